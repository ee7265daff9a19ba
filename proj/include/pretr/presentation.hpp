#pragma once

#include <pretr/category.hpp>
#include <pretr/matrix.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pretr {

struct Arrow {
    std::string name;
    std::string src;
    std::string dst;
    int degree = 0;
};

/// A path written outermost-first: {a, b} denotes a o b.
using Path = std::vector<int>;

/// Linear combination of equal-endpoint paths.
using PathCombo = std::vector<std::pair<Scalar, Path>>;

/// Quiver with relations, optionally graded with a differential on arrows.
/// The plain k-linear case is the one where all degrees are zero and no
/// differentials are given.
struct QuiverPresentation {
    std::string name = "quiver";
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<PathCombo> relations;
    std::map<std::string, PathCombo> differentials;  // arrow name -> value
    int max_path_length_cap = 32;

    bool is_dg() const {
        if (!differentials.empty()) return true;
        for (const auto& a : arrows)
            if (a.degree != 0) return true;
        return false;
    }
};

namespace detail {

struct PathInfo {
    Path path;         // arrow ids, outermost first; empty = identity
    int src = 0;
    int dst = 0;
    int degree = 0;
    std::string label;
};

inline std::string path_label(const QuiverPresentation& p, const Path& path) {
    if (path.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += "*";
        s += p.arrows[static_cast<std::size_t>(path[i])].name;
    }
    return s;
}

/// Path order used for basis selection: by length, then by the arrow-name
/// sequence. RREF pivots are taken on the greatest monomials, so the
/// lexicographically least paths survive as the basis.
inline bool path_less(const QuiverPresentation& p, const Path& a, const Path& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string& na = p.arrows[static_cast<std::size_t>(a[i])].name;
        const std::string& nb = p.arrows[static_cast<std::size_t>(b[i])].name;
        if (na != nb) return na < nb;
    }
    return false;
}

}  // namespace detail

/// Builds the finite dg category presented by a quiver with relations.
/// Paths are enumerated up to the structural acyclicity bound, relations
/// are padded by all path factors and reduced per endpoint pair and degree
/// by exact elimination, and the differential (if any) is extended to path
/// monomials by the graded Leibniz rule and verified to square to zero and
/// to be compatible with the relations.
class PresentationBuilder {
public:
    explicit PresentationBuilder(const QuiverPresentation& pres, Field field = Field::rationals())
        : p_(pres), field_(field) {}

    BaseCategory build() {
        validate_quiver();
        enumerate_paths();
        collect_relations();
        reduce_buckets();
        return assemble();
    }

private:
    const QuiverPresentation& p_;
    Field field_;
    std::map<std::string, int> vertex_index_;
    std::vector<std::vector<int>> arrows_from_;           // per vertex: arrow ids with that src
    std::vector<detail::PathInfo> paths_;                 // all paths modulo nothing
    std::map<std::string, int> path_index_by_label_;
    // bucket key: (src, dst, degree) -> ordered path ids (ascending path order)
    std::map<std::tuple<int, int, int>, std::vector<int>> buckets_;
    struct BucketReduction {
        std::vector<int> members;            // path ids, ascending
        std::vector<int> basis;              // surviving path ids, ascending
        std::map<int, std::map<int, Scalar>> rewrite;  // path id -> combo over basis ids
    };
    std::map<std::tuple<int, int, int>, BucketReduction> reductions_;

    void validate_quiver() {
        for (const auto& v : p_.vertices) {
            if (vertex_index_.count(v))
                throw std::invalid_argument("duplicate vertex '" + v + "'");
            vertex_index_[v] = static_cast<int>(vertex_index_.size());
        }
        std::map<std::string, int> arrow_names;
        for (std::size_t i = 0; i < p_.arrows.size(); ++i) {
            const Arrow& a = p_.arrows[i];
            if (arrow_names.count(a.name))
                throw std::invalid_argument("duplicate arrow '" + a.name + "'");
            // names must survive the expression grammar: no composition
            // stars, signs, or whitespace, and "1" is the identity
            if (a.name.empty() || a.name == "1" ||
                a.name.find_first_of("*+- \t") != std::string::npos)
                throw std::invalid_argument("invalid arrow name '" + a.name + "'");
            arrow_names[a.name] = static_cast<int>(i);
            if (!vertex_index_.count(a.src) || !vertex_index_.count(a.dst))
                throw std::invalid_argument("arrow '" + a.name + "' has unknown endpoint");
            if (a.src == a.dst)
                throw std::invalid_argument("quiver must be acyclic: loop at '" + a.src + "'");
        }
        // acyclicity via DFS on the vertex graph
        std::vector<std::vector<int>> adj(p_.vertices.size());
        for (const auto& a : p_.arrows)
            adj[static_cast<std::size_t>(vertex_index_[a.src])].push_back(vertex_index_[a.dst]);
        std::vector<int> state(p_.vertices.size(), 0);
        for (std::size_t v = 0; v < p_.vertices.size(); ++v)
            if (state[v] == 0) dfs_cycle(adj, static_cast<int>(v), state);
        arrows_from_.assign(p_.vertices.size(), {});
        for (std::size_t i = 0; i < p_.arrows.size(); ++i)
            arrows_from_[static_cast<std::size_t>(vertex_index_[p_.arrows[i].src])].push_back(
                static_cast<int>(i));
    }

    static void dfs_cycle(const std::vector<std::vector<int>>& adj, int v,
                          std::vector<int>& state) {
        state[static_cast<std::size_t>(v)] = 1;
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (state[static_cast<std::size_t>(w)] == 1)
                throw std::invalid_argument("quiver must be acyclic");
            if (state[static_cast<std::size_t>(w)] == 0) dfs_cycle(adj, w, state);
        }
        state[static_cast<std::size_t>(v)] = 2;
    }

    void enumerate_paths() {
        // identities
        for (std::size_t v = 0; v < p_.vertices.size(); ++v)
            push_path(detail::PathInfo{{}, static_cast<int>(v), static_cast<int>(v), 0, "1"});
        // grow by length; acyclicity bounds length by vertex count - 1
        std::vector<int> frontier;
        for (std::size_t i = 0; i < p_.vertices.size(); ++i)
            frontier.push_back(static_cast<int>(i));
        int length = 0;
        while (!frontier.empty()) {
            ++length;
            if (length > p_.max_path_length_cap)
                throw std::invalid_argument("path length cap exceeded (" +
                                            std::to_string(p_.max_path_length_cap) + ")");
            std::vector<int> next;
            for (int pid : frontier) {
                const detail::PathInfo info = paths_[static_cast<std::size_t>(pid)];
                for (int aid : arrows_from_[static_cast<std::size_t>(info.dst)]) {
                    const Arrow& a = p_.arrows[static_cast<std::size_t>(aid)];
                    detail::PathInfo np;
                    np.path.push_back(aid);
                    np.path.insert(np.path.end(), info.path.begin(), info.path.end());
                    np.src = info.src;
                    np.dst = vertex_index_[a.dst];
                    np.degree = info.degree + a.degree;
                    np.label = detail::path_label(p_, np.path);
                    next.push_back(push_path(np));
                }
            }
            frontier = std::move(next);
        }
        for (auto& [key, ids] : buckets_) {
            (void)key;
            std::sort(ids.begin(), ids.end(), [this](int a, int b) {
                return detail::path_less(p_, paths_[static_cast<std::size_t>(a)].path,
                                         paths_[static_cast<std::size_t>(b)].path);
            });
        }
    }

    int push_path(detail::PathInfo info) {
        int id = static_cast<int>(paths_.size());
        buckets_[{info.src, info.dst, info.degree}].push_back(id);
        // identities share the label "1", so lookup keys carry the source
        path_index_by_label_[std::to_string(info.src) + "|" + info.label] = id;
        paths_.push_back(std::move(info));
        return id;
    }

    // relation vectors per bucket, as coefficient rows over bucket members
    std::map<std::tuple<int, int, int>, std::vector<std::map<int, Scalar>>> relation_rows_;

    void collect_relations() {
        for (const auto& rel : p_.relations) {
            std::map<int, Scalar> row;
            int src = -1, dst = -1, degree = 0;
            bool first = true;
            for (const auto& [coef, path] : rel) {
                int pid = lookup_path(path);
                const auto& info = paths_[static_cast<std::size_t>(pid)];
                if (first) {
                    src = info.src;
                    dst = info.dst;
                    degree = info.degree;
                    first = false;
                } else if (info.src != src || info.dst != dst) {
                    throw std::invalid_argument(
                        "relation mixes paths with different endpoints");
                } else if (info.degree != degree) {
                    throw std::invalid_argument("relation is not degree-homogeneous");
                }
                Scalar c = to_field(coef);
                auto [it, ins] = row.emplace(pid, c);
                if (!ins) it->second += c;
            }
            if (first) continue;
            // pad on both sides by all composable paths
            pad_and_store(row, src, dst, degree);
        }
    }

    void pad_and_store(const std::map<int, Scalar>& row, int src, int dst, int degree) {
        for (const auto& left : paths_) {
            if (left.src != dst) continue;
            for (const auto& right : paths_) {
                if (right.dst != src) continue;
                std::map<int, Scalar> padded;
                for (const auto& [pid, c] : row) {
                    const auto& mid = paths_[static_cast<std::size_t>(pid)];
                    Path whole = left.path;
                    whole.insert(whole.end(), mid.path.begin(), mid.path.end());
                    whole.insert(whole.end(), right.path.begin(), right.path.end());
                    int wid = lookup_path(whole);
                    auto [it, ins] = padded.emplace(wid, c);
                    if (!ins) it->second += c;
                }
                int bdeg = degree + left.degree + right.degree;
                relation_rows_[{right.src, left.dst, bdeg}].push_back(std::move(padded));
            }
        }
    }

    int lookup_path(const Path& path) const {
        if (path.empty()) throw std::invalid_argument("lookup_path: empty path needs a vertex");
        int src = vertex_index_.at(p_.arrows[static_cast<std::size_t>(path.back())].src);
        return lookup_path(src, path);
    }

    int lookup_path(int src, const Path& path) const {
        auto it = path_index_by_label_.find(std::to_string(src) + "|" +
                                            detail::path_label(p_, path));
        if (it == path_index_by_label_.end())
            throw std::invalid_argument("unknown path '" + detail::path_label(p_, path) + "'");
        return it->second;
    }

    void reduce_buckets() {
        for (const auto& [key, members] : buckets_) {
            BucketReduction red;
            red.members = members;
            auto rit = relation_rows_.find(key);
            if (rit == relation_rows_.end() || rit->second.empty()) {
                red.basis = members;
                for (int pid : members) red.rewrite[pid] = {{pid, Scalar(1)}};
                reductions_[key] = std::move(red);
                continue;
            }
            // columns in descending path order: pivots fall on the greatest
            // monomials, so least monomials survive as the basis
            std::vector<int> cols(members.rbegin(), members.rend());
            std::map<int, std::size_t> col_of;
            for (std::size_t c = 0; c < cols.size(); ++c) col_of[cols[c]] = c;
            Matrix m(rit->second.size(), cols.size());
            for (std::size_t r = 0; r < rit->second.size(); ++r)
                for (const auto& [pid, coef] : rit->second[r]) m(r, col_of[pid]) = coef;
            std::vector<std::size_t> pivots = m.rref();
            std::vector<bool> is_pivot(cols.size(), false);
            for (std::size_t pc : pivots) is_pivot[pc] = true;
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (!is_pivot[c]) red.basis.push_back(cols[c]);
            std::sort(red.basis.begin(), red.basis.end(), [this](int a, int b) {
                return detail::path_less(p_, paths_[static_cast<std::size_t>(a)].path,
                                         paths_[static_cast<std::size_t>(b)].path);
            });
            // rewrite rule per member: basis members map to themselves,
            // pivot members to minus the tail of their RREF row
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (!is_pivot[c]) red.rewrite[cols[c]] = {{cols[c], Scalar(1)}};
            for (std::size_t r = 0; r < pivots.size(); ++r) {
                std::map<int, Scalar> combo;
                for (std::size_t c = pivots[r] + 1; c < cols.size(); ++c)
                    if (!m(r, c).is_zero() && !is_pivot[c]) combo[cols[c]] = -m(r, c);
                    else if (!m(r, c).is_zero())
                        throw std::logic_error("reduce_buckets: rref tail touches pivot");
                red.rewrite[cols[pivots[r]]] = std::move(combo);
            }
            reductions_[key] = std::move(red);
        }
    }

    std::map<int, Scalar> reduce_path(int pid) const {
        const auto& info = paths_[static_cast<std::size_t>(pid)];
        const auto& red = reductions_.at({info.src, info.dst, info.degree});
        return red.rewrite.at(pid);
    }

    /// Differential of a path monomial by the graded Leibniz rule,
    /// expressed over path monomials (not yet reduced).
    std::map<int, Scalar> monomial_differential(int pid) const {
        const auto& info = paths_[static_cast<std::size_t>(pid)];
        std::map<int, Scalar> out;
        long long degree_passed = 0;
        for (std::size_t i = 0; i < info.path.size(); ++i) {
            int aid = info.path[i];
            const Arrow& a = p_.arrows[static_cast<std::size_t>(aid)];
            auto dit = p_.differentials.find(a.name);
            if (dit != p_.differentials.end()) {
                Scalar sign = (degree_passed % 2 == 0) ? Scalar(1) : Scalar(-1);
                for (const auto& [coef, dpath] : dit->second) {
                    Path whole(info.path.begin(), info.path.begin() + static_cast<long>(i));
                    whole.insert(whole.end(), dpath.begin(), dpath.end());
                    whole.insert(whole.end(), info.path.begin() + static_cast<long>(i) + 1,
                                 info.path.end());
                    int wid = lookup_path(whole);
                    Scalar c = sign * to_field(coef);
                    auto [it, ins] = out.emplace(wid, c);
                    if (!ins) it->second += c;
                }
            }
            degree_passed += a.degree;
        }
        return out;
    }

    Scalar to_field(const Scalar& s) const {
        return field_.modulus == 0 ? s : s + Scalar::residue(0, field_.modulus);
    }

    BaseCategory assemble() {
        BaseCategory::Builder b(p_.name, field_);
        for (const auto& v : p_.vertices) b.add_object(v);
        std::map<int, int> basis_id;  // path id -> basis id
        for (const auto& [key, red] : reductions_) {
            for (int pid : red.basis) {
                const auto& info = paths_[static_cast<std::size_t>(pid)];
                int id = b.add_basis(info.src, info.dst, info.degree, info.label,
                                     static_cast<int>(info.path.size()));
                basis_id[pid] = id;
                b.set_path_arrows(id, info.path);
            }
        }
        // identity ids: the empty path at each vertex
        std::map<int, int> identity_path;  // vertex -> path id
        for (std::size_t pid = 0; pid < paths_.size(); ++pid)
            if (paths_[pid].path.empty()) identity_path[paths_[pid].src] = static_cast<int>(pid);
        for (std::size_t v = 0; v < p_.vertices.size(); ++v)
            b.set_identity(static_cast<int>(v), basis_id.at(identity_path.at(static_cast<int>(v))));

        auto reduce_to_basis = [&](const std::map<int, Scalar>& monos) {
            Combo out;
            for (const auto& [pid, c] : monos)
                for (const auto& [bpid, bc] : reduce_path(pid))
                    combo_add(out, basis_id.at(bpid), c * bc);
            return out;
        };

        // differential on basis paths, reduced; then check relation
        // compatibility and d^2 = 0
        std::map<int, Combo> diff_table;
        if (p_.is_dg()) {
            for (const auto& [key, red] : reductions_)
                for (int pid : red.basis) {
                    Combo d = reduce_to_basis(monomial_differential(pid));
                    if (!d.empty()) diff_table[basis_id.at(pid)] = d;
                }
            for (const auto& rel : p_.relations) {
                std::map<int, Scalar> acc;
                for (const auto& [coef, path] : rel) {
                    int pid = lookup_path(path);
                    for (const auto& [did, dc] : monomial_differential(pid)) {
                        Scalar c = to_field(coef) * dc;
                        auto [it, ins] = acc.emplace(did, c);
                        if (!ins) it->second += c;
                    }
                }
                if (!reduce_to_basis(acc).empty())
                    throw std::invalid_argument(
                        "differential is not compatible with the relations");
            }
        }

        // composition: concatenate basis paths and reduce
        for (const auto& [key1, red1] : reductions_)
            for (int pid_f : red1.basis) {
                const auto& f = paths_[static_cast<std::size_t>(pid_f)];
                for (const auto& [key2, red2] : reductions_) {
                    if (std::get<0>(key2) != f.dst) continue;
                    for (int pid_g : red2.basis) {
                        const auto& g = paths_[static_cast<std::size_t>(pid_g)];
                        Path whole = g.path;
                        whole.insert(whole.end(), f.path.begin(), f.path.end());
                        Combo value = reduce_to_basis({{lookup_path(f.src, whole), Scalar(1)}});
                        b.set_composition(basis_id.at(pid_g), basis_id.at(pid_f),
                                          std::move(value));
                    }
                }
            }

        for (const auto& [id, combo] : diff_table) b.set_differential(id, combo);

        BaseCategory cat = b.build();

        if (p_.is_dg()) {
            // d^2 = 0 on every basis element
            for (std::size_t id = 0; id < cat.basis_count(); ++id) {
                Combo dd;
                for (const auto& [mid, c] : cat.diff_basis(static_cast<int>(id)))
                    combo_add(dd, cat.diff_basis(mid), c);
                if (!dd.empty())
                    throw std::invalid_argument("differential does not square to zero on '" +
                                                cat.basis(static_cast<int>(id)).label + "'");
            }
        }
        return cat;
    }
};

inline BaseCategory build_path_category(const QuiverPresentation& p,
                                        Field field = Field::rationals()) {
    if (p.is_dg())
        throw std::invalid_argument(
            "build_path_category: presentation carries degrees or differentials");
    return PresentationBuilder(p, field).build();
}

inline BaseCategory build_dg_quiver_category(const QuiverPresentation& p,
                                             Field field = Field::rationals()) {
    return PresentationBuilder(p, field).build();
}

/// External tensor product of two degree-0 categories: objects are pairs,
/// hom bases are pairs of factor basis elements, and composition is
/// componentwise (no sign in degree 0).
inline BaseCategory kunneth_product(const BaseCategory& a, const BaseCategory& b,
                                    const std::string& name = "") {
    auto degree0_only = [](const BaseCategory& c) {
        return c.degree_support() == std::pair<int, int>{0, 0};
    };
    if (!degree0_only(a) || !degree0_only(b))
        throw std::invalid_argument("kunneth_product: factors must be concentrated in degree 0");
    if (a.field() != b.field())
        throw std::invalid_argument("kunneth_product: factors over different fields");
    BaseCategory::Builder builder(name.empty() ? a.name() + "x" + b.name() : name, a.field());
    auto pair_object = [&](int i, int j) {
        return a.object_label(i) + "x" + b.object_label(j);
    };
    auto pair_index = [&](int i, int j) {
        return i * static_cast<int>(b.object_count()) + j;
    };
    for (std::size_t i = 0; i < a.object_count(); ++i)
        for (std::size_t j = 0; j < b.object_count(); ++j)
            builder.add_object(pair_object(static_cast<int>(i), static_cast<int>(j)));

    // basis pairs; ids arranged as ida * |basis_b| + idb
    std::map<std::pair<int, int>, int> pair_basis;
    for (std::size_t ida = 0; ida < a.basis_count(); ++ida)
        for (std::size_t idb = 0; idb < b.basis_count(); ++idb) {
            const BasisElem& ba = a.basis(static_cast<int>(ida));
            const BasisElem& bb = b.basis(static_cast<int>(idb));
            int id = builder.add_basis(pair_index(ba.src, bb.src), pair_index(ba.dst, bb.dst), 0,
                                       ba.label + "\xE2\x8A\xA0" + bb.label);
            pair_basis[{static_cast<int>(ida), static_cast<int>(idb)}] = id;
        }
    for (std::size_t i = 0; i < a.object_count(); ++i)
        for (std::size_t j = 0; j < b.object_count(); ++j)
            builder.set_identity(
                pair_index(static_cast<int>(i), static_cast<int>(j)),
                pair_basis.at({a.identity_id(static_cast<int>(i)),
                               b.identity_id(static_cast<int>(j))}));
    for (const auto& [keyg, idg] : pair_basis)
        for (const auto& [keyf, idf] : pair_basis) {
            const BasisElem& ga = a.basis(keyg.first);
            const BasisElem& fa = a.basis(keyf.first);
            const BasisElem& gb = b.basis(keyg.second);
            const BasisElem& fb = b.basis(keyf.second);
            if (ga.src != fa.dst || gb.src != fb.dst) continue;
            Combo value;
            for (const auto& [ra, ca] : a.compose_basis(keyg.first, keyf.first))
                for (const auto& [rb, cb] : b.compose_basis(keyg.second, keyf.second))
                    combo_add(value, pair_basis.at({ra, rb}), ca * cb);
            builder.set_composition(idg, idf, std::move(value));
        }
    return builder.build();
}

}  // namespace pretr
