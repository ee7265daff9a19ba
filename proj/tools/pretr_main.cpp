// Command-line front end: verify categories, lift functors given on
// homotopy classes, apply hull lifts to complexes, and run the bundled
// scenarios. Exit codes: 0 pass, 1 mathematical failure, 2 usage or parse
// error.

#include <pretr/io.hpp>
#include <pretr/scenarios.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace pretr;
using io::json;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("parse error in '" + path + "': " + e.what());
    }
    return j;
}

void write_output(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

Field field_from_flag(const std::string& flag) {
    if (flag == "q" || flag == "Q") return Field::rationals();
    if (flag.rfind("fp:", 0) == 0) return Field::prime(std::stoll(flag.substr(3)));
    throw std::invalid_argument("--field expects q or fp:<prime>");
}

struct PinnedHomotopy {
    std::string after;
    std::string before;
    std::string value;
};

PinnedHomotopy parse_pin(const std::string& text) {
    // shape: (after,before)=expression
    auto eq = text.find(")=");
    if (text.size() < 5 || text.front() != '(' || eq == std::string::npos)
        throw std::invalid_argument("--pin-homotopy expects (a,b)=expr");
    std::string pair = text.substr(1, eq - 1);
    auto comma = pair.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--pin-homotopy expects (a,b)=expr");
    return PinnedHomotopy{pair.substr(0, comma), pair.substr(comma + 1), text.substr(eq + 2)};
}

int run_check(const std::string& path, const SessionConfig& cfg) {
    json j = load_json(path);
    QuiverPresentation pres = io::parse_presentation(j);
    BaseCategory cat = PresentationBuilder(pres, cfg.field).build();

    DgView seed = seed_view(cat);
    std::vector<CheckReport> reports;
    reports.push_back(check_dg_axioms(seed, cfg.check_depth));
    reports.push_back(check_dg_axioms(direct_sum_completion(seed), cfg.check_depth));
    reports.push_back(check_dg_axioms(translation_completion(seed), cfg.check_depth));
    reports.push_back(check_dg_axioms(twist_completion(seed), cfg.check_depth));
    reports.push_back(check_dg_axioms(pretriangulated_hull(seed), cfg.check_depth));
    StasheffReport stasheff = check_stasheff(seed);

    bool pass = stasheff.pass();
    for (const auto& r : reports) pass = pass && r.pass();

    if (cfg.json_output) {
        json out;
        out["category"] = cat.name();
        out["pass"] = pass;
        json items = json::array();
        for (const auto& r : reports) {
            json e;
            e["subject"] = r.subject;
            e["pass"] = r.pass();
            e["pairs"] = r.pairs_checked;
            e["triples"] = r.triples_checked;
            json issues = json::array();
            for (const auto& i : r.issues) issues.push_back(i.clause + ": " + i.witness);
            e["issues"] = issues;
            items.push_back(e);
        }
        out["axiom_checks"] = items;
        out["suspended_identities"] = {{"pass", stasheff.pass()},
                                       {"chains", stasheff.chains_checked}};
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& r : reports) std::cout << r.to_string() << "\n";
        std::cout << "suspended-structure identities: " << (stasheff.pass() ? "pass" : "FAIL")
                  << " (" << stasheff.chains_checked << " chains)\n";
    }
    return pass ? 0 : 1;
}

int run_lift(const std::string& category_path, const std::string& functor_path, bool sharp,
             const std::vector<std::string>& pins, const std::string& out_path,
             const SessionConfig& cfg) {
    QuiverPresentation source_pres = io::parse_presentation(load_json(category_path));
    BaseCategory source = PresentationBuilder(source_pres, cfg.field).build();

    json fj = load_json(functor_path);
    QuiverPresentation target_pres = io::parse_presentation(fj.at("target"));
    BaseCategory target = PresentationBuilder(target_pres, cfg.field).build();

    H0FunctorTable table;
    for (const auto& [label, value] : fj.at("objects").items()) {
        if (value.is_string())
            table.objects[label] = embed_object(target, value.get<std::string>());
        else
            table.objects[label] = io::parse_complex(target, value);
    }
    auto image_of = [&](const std::string& label) {
        auto it = table.objects.find(label);
        if (it == table.objects.end())
            throw std::invalid_argument("functor file misses the image of '" + label + "'");
        return it->second;
    };
    for (const auto& [label, value] : fj.at("arrows").items()) {
        const Arrow* arrow = nullptr;
        for (const Arrow& a : source_pres.arrows)
            if (a.name == label) arrow = &a;
        if (!arrow) throw std::invalid_argument("functor file names unknown arrow '" + label + "'");
        table.arrow_images[label] =
            io::parse_morphism(target, image_of(arrow->src), image_of(arrow->dst), value);
    }
    if (fj.contains("homotopies"))
        for (const auto& [key, value] : fj.at("homotopies").items()) {
            auto comma = key.find(',');
            if (key.size() < 4 || key.front() != '(' || key.back() != ')' ||
                comma == std::string::npos)
                throw std::invalid_argument("bad homotopy key '" + key + "'");
            std::string la = key.substr(1, comma - 1);
            std::string lb = key.substr(comma + 1, key.size() - comma - 2);
            int ida = source.resolve_from_source(io::find_basis_source(source, la), la);
            int idb = source.resolve_from_source(io::find_basis_source(source, lb), lb);
            NormalObject s = image_of(source.object_label(source.basis(idb).src));
            NormalObject d = image_of(source.object_label(source.basis(ida).dst));
            table.pinned_homotopies[{la, lb}] = io::parse_morphism(target, s, d, value);
        }
    for (const std::string& pin_text : pins) {
        PinnedHomotopy pin = parse_pin(pin_text);
        int ida = source.resolve_from_source(io::find_basis_source(source, pin.after), pin.after);
        int idb =
            source.resolve_from_source(io::find_basis_source(source, pin.before), pin.before);
        NormalObject s = image_of(source.object_label(source.basis(idb).src));
        NormalObject d = image_of(source.object_label(source.basis(ida).dst));
        table.pinned_homotopies[{pin.after, pin.before}] =
            io::parse_morphism(target, s, d, json(pin.value));
    }

    std::shared_ptr<TableFunctor> functor = quiver_functor_lift(source, target, table);

    // relation certificate over the seed; chains carrying a multiple of an
    // identity are skipped and accounted for, the relation holds on them
    // for any strictly unital functor
    DgView seed = seed_view(source);
    long long chains = 0;
    long long degenerate = 0;
    for (std::size_t n = 1; n <= 3; ++n)
        for_each_basis_chain(source, seed.probes, n, false, [&](const Chain& chain) {
            if (is_degenerate_chain(chain)) {
                ++degenerate;
                return;
            }
            ++chains;
            if (!functor_relation_residual(*functor, chain).is_zero())
                throw std::logic_error("relation residual is nonzero after the lift");
        });
    json certificate;
    certificate["seed_chains_checked"] = chains;
    certificate["degenerate_chains_skipped"] = degenerate;
    certificate["residuals_zero"] = true;

    if (sharp) {
        auto hull = lift_to_hull(functor);
        DgView hull_probes = pretriangulated_hull(seed);
        long long hull_chains = 0;
        bool one_sided_ok = true;
        for (const NormalObject& probe : hull_probes.probes)
            one_sided_ok = one_sided_ok && is_one_sided(hull->map_object(probe));
        for (std::size_t n = 1; n <= 2; ++n)
            for (const Chain& chain : enumerate_basis_chains(source, hull_probes.probes, n)) {
                ++hull_chains;
                if (!functor_relation_residual(*hull, chain).is_zero())
                    throw std::logic_error("hull relation residual is nonzero");
            }
        certificate["hull_chains_checked"] = hull_chains;
        certificate["hull_images_one_sided"] = one_sided_ok;
    }

    json artifact = io::serialize_artifact(source_pres, target_pres, *functor, certificate);
    write_output(artifact, out_path);
    return 0;
}

int run_apply(const std::string& artifact_path, const std::string& complex_path,
              const std::string& out_path, const SessionConfig& cfg) {
    (void)cfg;
    io::LoadedFunctor loaded = io::parse_artifact(load_json(artifact_path));
    NormalObject input = io::parse_complex(*loaded.source, load_json(complex_path));
    if (!is_one_sided(input)) {
        auto fixed = permute_to_one_sided(input);
        if (!fixed)
            throw std::invalid_argument("input complex is not one-sided and cannot be permuted");
        input = fixed->first;
    }
    auto hull = lift_to_hull(loaded.functor);
    NormalObject image = hull->map_object(input);
    if (!is_one_sided(image)) throw std::logic_error("image lost one-sidedness");
    json out = io::serialize_complex(*loaded.target, image);
    out["one_sided"] = true;
    write_output(out, out_path);
    return 0;
}

int run_scenario_cmd(const std::string& name, const SessionConfig& cfg) {
    ScenarioReport report = scenarios::run_scenario(name, cfg);
    if (cfg.json_output)
        std::cout << report.to_json().dump(2) << "\n";
    else
        std::cout << report.to_text();
    return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic kernel for dg categories, twisted complexes, and functor lifts"};
    app.require_subcommand(1);

    std::string field_flag = "q";
    int depth = 3;
    int search_depth = 1;
    std::string format = "text";
    app.add_option("--field", field_flag, "ground field: q or fp:<prime>");
    app.add_option("--depth", depth, "axiom check depth");
    app.add_option("--search-depth", search_depth, "coefficient radius for isomorphism search");
    app.add_option("--format", format, "output format: text or json");

    std::string category_path, functor_path, artifact_path, complex_path, scenario_name;
    std::string out_path;
    bool sharp = false;
    std::vector<std::string> pins;

    CLI::App* check = app.add_subcommand("check", "verify the dg axioms of a category file");
    check->add_option("category", category_path)->required();

    CLI::App* lift = app.add_subcommand(
        "lift", "lift a functor given on homotopy classes to the suspended world");
    lift->add_option("category", category_path)->required();
    lift->add_option("functor", functor_path)->required();
    lift->add_flag("--sharp", sharp, "also certify the induced hull lift");
    lift->add_option("--pin-homotopy", pins, "(after,before)=expr homotopy choices");
    lift->add_option("-o,--output", out_path, "artifact output path");

    CLI::App* apply = app.add_subcommand("apply", "apply a lifted functor to a complex");
    apply->add_option("artifact", artifact_path)->required();
    apply->add_option("complex", complex_path)->required();
    apply->add_option("-o,--output", out_path, "output path");

    CLI::App* scenario = app.add_subcommand("scenario", "run a bundled scenario");
    scenario->add_option("name", scenario_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    SessionConfig cfg;
    try {
        cfg.field = field_from_flag(field_flag);
        cfg.check_depth = depth;
        cfg.search_depth = search_depth;
        if (format == "json")
            cfg.json_output = true;
        else if (format != "text")
            throw std::invalid_argument("--format expects text or json");
        cfg.validate();

        if (check->parsed()) return run_check(category_path, cfg);
        if (lift->parsed())
            return run_lift(category_path, functor_path, sharp, pins, out_path, cfg);
        if (apply->parsed()) return run_apply(artifact_path, complex_path, out_path, cfg);
        if (scenario->parsed()) return run_scenario_cmd(scenario_name, cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
