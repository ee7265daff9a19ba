#pragma once

#include <pretr/beilinson.hpp>
#include <pretr/homology.hpp>
#include <pretr/presentation.hpp>

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pretr {
namespace io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars and tokens
// ---------------------------------------------------------------------------

inline Scalar parse_scalar(const std::string& text, const Field& field) {
    auto slash = text.find('/');
    BigInt num = BigInt::from_string(slash == std::string::npos ? text : text.substr(0, slash));
    BigInt den = slash == std::string::npos ? BigInt(1) : BigInt::from_string(text.substr(slash + 1));
    return Scalar(num, den, field.modulus);
}

inline bool is_number_token(const std::string& t) {
    if (t.empty()) return false;
    for (std::size_t i = 0; i < t.size(); ++i) {
        char c = t[i];
        if (c >= '0' && c <= '9') continue;
        if (c == '/' && i > 0) continue;
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Morphism-entry expressions
// ---------------------------------------------------------------------------

/// Parses a linear combination of paths between two base objects into a
/// combination of basis elements. Terms look like "x0*y1", "-om",
/// "2*x0*y1", "1/2*g*b"; factors are resolved right to left from the
/// source object, joining tokens greedily so labels that themselves
/// contain a star (as in product categories) still resolve.
inline Combo parse_entry(const BaseCategory& cat, int src_obj, int dst_obj,
                         const std::string& text) {
    Combo out;
    std::size_t pos = 0;
    auto skip_ws = [&]() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    };
    skip_ws();
    if (pos == text.size() || text == "0") return out;
    bool first = true;
    while (pos < text.size()) {
        skip_ws();
        Scalar sign(1);
        if (text[pos] == '+' || text[pos] == '-') {
            if (text[pos] == '-') sign = Scalar(-1);
            ++pos;
        } else if (!first) {
            throw std::invalid_argument("parse_entry: expected '+' or '-' in '" + text + "'");
        }
        first = false;
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '+' && text[pos] != '-') ++pos;
        std::string term = text.substr(start, pos - start);
        while (!term.empty() && (term.back() == ' ' || term.back() == '\t')) term.pop_back();
        if (term.empty()) throw std::invalid_argument("parse_entry: empty term in '" + text + "'");
        // split by '*'
        std::vector<std::string> tokens;
        std::size_t tp = 0;
        while (tp <= term.size()) {
            std::size_t star = term.find('*', tp);
            if (star == std::string::npos) {
                tokens.push_back(term.substr(tp));
                break;
            }
            tokens.push_back(term.substr(tp, star - tp));
            tp = star + 1;
        }
        Scalar coeff = sign;
        std::size_t tok0 = 0;
        if (is_number_token(tokens[0])) {
            coeff = coeff * parse_scalar(tokens[0], cat.field());
            tok0 = 1;
        }
        if (tok0 == tokens.size()) {
            // pure scalar term: a multiple of the identity (endomorphisms)
            if (src_obj != dst_obj)
                throw std::invalid_argument("parse_entry: scalar term between distinct objects");
            combo_add(out, cat.identity_id(src_obj), coeff);
            continue;
        }
        // resolve factors right to left with greedy joins
        Combo value;
        int current = src_obj;
        std::size_t end = tokens.size();
        bool started = false;
        while (end > tok0) {
            bool matched = false;
            for (std::size_t span = end - tok0; span >= 1; --span) {
                std::string joined;
                for (std::size_t k = end - span; k < end; ++k) {
                    if (k > end - span) joined += "*";
                    joined += tokens[k];
                }
                int id = -1;
                try {
                    id = cat.resolve_from_source(current, joined);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                if (!started) {
                    value = Combo{{id, Scalar(1)}};
                    started = true;
                } else {
                    Combo next;
                    for (const auto& [b, c] : value)
                        combo_add(next, cat.compose_basis(id, b), c);
                    value = std::move(next);
                }
                current = cat.basis(id).dst;
                end -= span;
                matched = true;
                break;
            }
            if (!matched)
                throw std::invalid_argument("parse_entry: cannot resolve '" + term +
                                            "' from object '" + cat.object_label(current) + "'");
        }
        if (current != dst_obj)
            throw std::invalid_argument("parse_entry: term '" + term + "' ends at '" +
                                        cat.object_label(current) + "', expected '" +
                                        cat.object_label(dst_obj) + "'");
        for (const auto& [b, c] : value) combo_add(out, b, coeff * c);
    }
    return out;
}

inline std::string scalar_to_string(const Scalar& s) { return s.to_string(); }

/// Renders a combination of basis elements as an expression string.
inline std::string entry_to_string(const BaseCategory& cat, const Combo& combo) {
    if (combo.empty()) return "0";
    std::string out;
    for (const auto& [id, c] : combo) {
        Scalar a = c;
        bool neg = false;
        if ((-a).is_one() || (a.modulus() == 0 && a.num().is_negative())) {
            neg = true;
            a = -a;
        }
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        const std::string& label = cat.basis(id).label;
        if (a.is_one())
            out += label;
        else
            out += a.to_string() + "*" + label;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Presentations
// ---------------------------------------------------------------------------

inline PathCombo parse_path_combo(const QuiverPresentation& p, const std::string& text) {
    std::map<std::string, int> arrow_ids;
    for (std::size_t i = 0; i < p.arrows.size(); ++i)
        arrow_ids[p.arrows[i].name] = static_cast<int>(i);
    PathCombo combo;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos == text.size()) break;
        Scalar sign(1);
        if (text[pos] == '+' || text[pos] == '-') {
            if (text[pos] == '-') sign = Scalar(-1);
            ++pos;
        } else if (!first) {
            throw std::invalid_argument("parse_path_combo: expected sign in '" + text + "'");
        }
        first = false;
        while (pos < text.size() && text[pos] == ' ') ++pos;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '+' && text[pos] != '-') ++pos;
        std::string term = text.substr(start, pos - start);
        while (!term.empty() && term.back() == ' ') term.pop_back();
        Path path;
        Scalar coeff = sign;
        std::size_t tp = 0;
        bool coeff_seen = false;
        while (tp <= term.size() && !term.empty()) {
            std::size_t star = term.find('*', tp);
            std::string tok =
                star == std::string::npos ? term.substr(tp) : term.substr(tp, star - tp);
            if (!coeff_seen && path.empty() && is_number_token(tok)) {
                coeff = coeff * parse_scalar(tok, Field::rationals());
                coeff_seen = true;
            } else {
                auto it = arrow_ids.find(tok);
                if (it == arrow_ids.end())
                    throw std::invalid_argument("parse_path_combo: unknown arrow '" + tok + "'");
                path.push_back(it->second);
            }
            if (star == std::string::npos) break;
            tp = star + 1;
        }
        if (path.empty())
            throw std::invalid_argument("parse_path_combo: term without a path in '" + text + "'");
        combo.push_back({coeff, path});
    }
    return combo;
}

inline QuiverPresentation parse_presentation(const json& j) {
    QuiverPresentation p;
    if (j.contains("name")) p.name = j.at("name").get<std::string>();
    for (const auto& v : j.at("vertices")) p.vertices.push_back(v.get<std::string>());
    for (const auto& a : j.at("arrows")) {
        Arrow arrow;
        arrow.name = a.at("name").get<std::string>();
        arrow.src = a.at("src").get<std::string>();
        arrow.dst = a.at("dst").get<std::string>();
        arrow.degree = a.value("deg", 0);
        p.arrows.push_back(arrow);
    }
    if (j.contains("relations"))
        for (const auto& r : j.at("relations"))
            p.relations.push_back(parse_path_combo(p, r.get<std::string>()));
    if (j.contains("differentials"))
        for (const auto& [name, value] : j.at("differentials").items())
            p.differentials[name] = parse_path_combo(p, value.get<std::string>());
    return p;
}

inline std::string path_combo_to_string(const QuiverPresentation& p, const PathCombo& combo) {
    std::string out;
    for (const auto& [c, path] : combo) {
        Scalar a = c;
        bool neg = false;
        if ((-a).is_one() || (a.modulus() == 0 && a.num().is_negative())) {
            neg = true;
            a = -a;
        }
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string term;
        if (!a.is_one()) term += a.to_string() + "*";
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i) term += "*";
            term += p.arrows[static_cast<std::size_t>(path[i])].name;
        }
        out += term;
    }
    return out.empty() ? "0" : out;
}

inline json serialize_presentation(const QuiverPresentation& p) {
    json j;
    j["name"] = p.name;
    j["vertices"] = p.vertices;
    json arrows = json::array();
    for (const Arrow& a : p.arrows) {
        json ja;
        ja["name"] = a.name;
        ja["src"] = a.src;
        ja["dst"] = a.dst;
        if (a.degree != 0) ja["deg"] = a.degree;
        arrows.push_back(ja);
    }
    j["arrows"] = arrows;
    if (!p.relations.empty()) {
        json rels = json::array();
        for (const PathCombo& r : p.relations) rels.push_back(path_combo_to_string(p, r));
        j["relations"] = rels;
    }
    if (!p.differentials.empty()) {
        json diffs = json::object();
        for (const auto& [name, combo] : p.differentials)
            diffs[name] = path_combo_to_string(p, combo);
        j["differentials"] = diffs;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Complexes
// ---------------------------------------------------------------------------

inline NormalObject parse_complex(const BaseCategory& cat, const json& j) {
    std::vector<Summand> summands;
    for (const auto& s : j.at("summands"))
        summands.push_back(
            Summand{cat.object_index(s.at("object").get<std::string>()), s.value("shift", 0)});
    NormalObject plain{summands, {}};
    Morphism q(cat, plain, plain, 1);
    if (j.contains("q")) {
        const json& rows = j.at("q");
        if (rows.size() != summands.size())
            throw std::invalid_argument("parse_complex: twist matrix has wrong row count");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != summands.size())
                throw std::invalid_argument("parse_complex: twist matrix has wrong column count");
            for (std::size_t c = 0; c < rows[r].size(); ++c) {
                std::string text = rows[r][c].get<std::string>();
                if (text.empty() || text == "0") continue;
                Combo combo = parse_entry(cat, summands[c].object, summands[r].object, text);
                for (const auto& [id, coeff] : combo)
                    q.add_term(EntryKey{static_cast<int>(r), static_cast<int>(c), id}, coeff);
            }
        }
    }
    return twist_object(q);
}

inline json serialize_complex(const BaseCategory& cat, const NormalObject& x) {
    json j;
    json summands = json::array();
    for (const Summand& s : x.summands) {
        json js;
        js["object"] = cat.object_label(s.object);
        js["shift"] = s.shift;
        summands.push_back(js);
    }
    j["summands"] = summands;
    json rows = json::array();
    for (std::size_t r = 0; r < x.summands.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < x.summands.size(); ++c) {
            Combo combo;
            for (const auto& [k, coeff] : x.twist)
                if (k.row == static_cast<int>(r) && k.col == static_cast<int>(c))
                    combo[k.basis] = coeff;
            row.push_back(entry_to_string(cat, combo));
        }
        rows.push_back(row);
    }
    j["q"] = rows;
    return j;
}

// ---------------------------------------------------------------------------
// Morphisms between complexes
// ---------------------------------------------------------------------------

inline json serialize_morphism(const Morphism& m) {
    const BaseCategory& cat = m.category();
    // compact string form between embedded generators
    if (m.src().summands.size() == 1 && m.src().summands[0].shift == 0 && !m.src().is_twisted() &&
        m.dst().summands.size() == 1 && m.dst().summands[0].shift == 0 && !m.dst().is_twisted()) {
        Combo combo;
        for (const auto& [k, c] : m.terms()) combo[k.basis] = c;
        return json(entry_to_string(cat, combo));
    }
    json entries = json::array();
    std::map<std::pair<int, int>, Combo> blocks;
    for (const auto& [k, c] : m.terms()) blocks[{k.row, k.col}][k.basis] = c;
    for (const auto& [rc, combo] : blocks) {
        json e;
        e["row"] = rc.first;
        e["col"] = rc.second;
        e["value"] = entry_to_string(cat, combo);
        entries.push_back(e);
    }
    json j;
    j["degree"] = m.degree();
    j["entries"] = entries;
    return j;
}

inline Morphism parse_morphism(const BaseCategory& cat, const NormalObject& src,
                               const NormalObject& dst, const json& j) {
    if (j.is_string()) {
        // single-entry form between embedded objects
        if (src.summands.size() != 1 || dst.summands.size() != 1)
            throw std::invalid_argument(
                "parse_morphism: string form requires single-summand endpoints");
        Combo combo = parse_entry(cat, src.summands[0].object, dst.summands[0].object,
                                  j.get<std::string>());
        int degree = 0;
        bool have = false;
        Morphism out = Morphism::zero(cat, src, dst, 0);
        for (const auto& [id, c] : combo) {
            int d = cat.basis(id).degree + src.summands[0].shift - dst.summands[0].shift;
            if (!have) {
                degree = d;
                have = true;
                out = Morphism::zero(cat, src, dst, degree);
            }
            out.add_term(EntryKey{0, 0, id}, c);
        }
        return out;
    }
    Morphism out = Morphism::zero(cat, src, dst, j.at("degree").get<int>());
    for (const auto& e : j.at("entries")) {
        int row = e.at("row").get<int>();
        int col = e.at("col").get<int>();
        Combo combo = parse_entry(cat, src.summands.at(static_cast<std::size_t>(col)).object,
                                  dst.summands.at(static_cast<std::size_t>(row)).object,
                                  e.at("value").get<std::string>());
        for (const auto& [id, c] : combo) out.add_term(EntryKey{row, col, id}, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Functor tables and artifacts
// ---------------------------------------------------------------------------

struct LoadedFunctor {
    QuiverPresentation source_presentation;
    QuiverPresentation target_presentation;
    std::shared_ptr<BaseCategory> source;
    std::shared_ptr<BaseCategory> target;
    std::shared_ptr<TableFunctor> functor;
};

/// Serializes a table functor with its categories into a self-contained
/// artifact.
inline json serialize_artifact(const QuiverPresentation& source_presentation,
                               const QuiverPresentation& target_presentation,
                               const TableFunctor& f, const json& certificate) {
    const BaseCategory& src = f.source_base();
    const BaseCategory& dst = f.target_base();
    json j;
    j["kind"] = "functor_artifact";
    j["field"] = dst.field().to_string();
    j["source"] = serialize_presentation(source_presentation);
    j["target"] = serialize_presentation(target_presentation);
    json objects = json::object();
    for (std::size_t i = 0; i < src.object_count(); ++i) {
        NormalObject img = f.map_object(embed_object(src, src.object_label(static_cast<int>(i))));
        objects[src.object_label(static_cast<int>(i))] = serialize_complex(dst, img);
    }
    j["objects"] = objects;
    json f1 = json::object();
    for (const auto& [id, value] : f.f1_table()) f1[src.basis(id).label] = serialize_morphism(value);
    j["f1"] = f1;
    json f2 = json::object();
    for (const auto& [key, value] : f.f2_table())
        f2["(" + src.basis(key.first).label + "," + src.basis(key.second).label + ")"] =
            serialize_morphism(value);
    j["f2"] = f2;
    j["certificate"] = certificate;
    return j;
}

inline Field parse_field(const std::string& text) {
    if (text == "Q" || text == "q") return Field::rationals();
    if (text.size() > 1 && (text[0] == 'F' || text[0] == 'f'))
        return Field::prime(std::stoll(text.substr(1)));
    throw std::invalid_argument("parse_field: expected Q or F<p>, got '" + text + "'");
}

/// Finds the unique source object carrying a basis element of this label.
inline int find_basis_source(const BaseCategory& cat, const std::string& label) {
    int found = -1;
    for (std::size_t id = 0; id < cat.basis_count(); ++id)
        if (cat.basis(static_cast<int>(id)).label == label) {
            if (found >= 0 && found != cat.basis(static_cast<int>(id)).src)
                throw std::invalid_argument("find_basis_source: ambiguous label '" + label + "'");
            found = cat.basis(static_cast<int>(id)).src;
        }
    if (found < 0)
        throw std::invalid_argument("find_basis_source: unknown basis label '" + label + "'");
    return found;
}

inline LoadedFunctor parse_artifact(const json& j) {
    LoadedFunctor out;
    Field field = parse_field(j.at("field").get<std::string>());
    out.source_presentation = parse_presentation(j.at("source"));
    out.target_presentation = parse_presentation(j.at("target"));
    out.source = std::make_shared<BaseCategory>(
        PresentationBuilder(out.source_presentation, field).build());
    out.target = std::make_shared<BaseCategory>(
        PresentationBuilder(out.target_presentation, field).build());
    out.functor = std::make_shared<TableFunctor>(*out.source, *out.target);
    for (const auto& [label, complex] : j.at("objects").items())
        out.functor->set_object(label, parse_complex(*out.target, complex));
    auto object_of = [&](const std::string& label) {
        return out.functor->map_object(embed_object(*out.source, label));
    };
    for (const auto& [label, value] : j.at("f1").items()) {
        int id = out.source->resolve_from_source(
            find_basis_source(*out.source, label), label);
        const BasisElem& b = out.source->basis(id);
        Morphism m = parse_morphism(*out.target, object_of(out.source->object_label(b.src)),
                                    object_of(out.source->object_label(b.dst)), value);
        out.functor->set_f1(id, m);
    }
    if (j.contains("f2"))
        for (const auto& [key, value] : j.at("f2").items()) {
            auto comma = key.find(',');
            if (key.size() < 4 || key.front() != '(' || key.back() != ')' ||
                comma == std::string::npos)
                throw std::invalid_argument("parse_artifact: bad f2 key '" + key + "'");
            std::string la = key.substr(1, comma - 1);
            std::string lb = key.substr(comma + 1, key.size() - comma - 2);
            int idb = out.source->resolve_from_source(find_basis_source(*out.source, lb), lb);
            int ida = out.source->resolve_from_source(find_basis_source(*out.source, la), la);
            const BasisElem& ba = out.source->basis(ida);
            const BasisElem& bb = out.source->basis(idb);
            Morphism m = parse_morphism(*out.target, object_of(out.source->object_label(bb.src)),
                                        object_of(out.source->object_label(ba.dst)), value);
            out.functor->set_f2(ida, idb, m);
        }
    return out;
}

}  // namespace io
}  // namespace pretr
