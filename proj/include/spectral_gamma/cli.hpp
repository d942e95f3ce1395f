#pragma once

// Command-line front end. run_cli() parses arguments, dispatches to the
// library and writes one JSON (or CSV) document to `out`.
//
// Exit codes: 0 success, 2 parse/domain/precondition errors, 3 resource
// caps, 4 inconclusive verdicts under --strict.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spectral_gamma/io.hpp"
#include "spectral_gamma/ktheory.hpp"
#include "spectral_gamma/parallel.hpp"
#include "spectral_gamma/ranks.hpp"
#include "spectral_gamma/sampling.hpp"
#include "spectral_gamma/spectra.hpp"
#include "spectral_gamma/weights.hpp"

namespace sgamma {

inline constexpr const char* kToolName = "spectral-gamma";
inline constexpr const char* kVersion = "0.3.0";

enum ExitCode : int { kExitOk = 0, kExitDomain = 2, kExitResource = 3, kExitInconclusive = 4 };

struct RunConfig {
    std::string command;
    std::string group;
    std::string element;
    std::string region;
    std::string space;
    std::string matrix;
    std::size_t n_max = 0;  // 0: per-command default
    double tol = 0.05;
    std::size_t nodes = 256;
    std::uint64_t seed = 0;
    std::string format;  // empty: command default
    bool strict = false;
    std::size_t cap_ball = kDefaultBallCap;
    std::size_t cap_support = kDefaultSupportCap;

    std::string k_range = "0..4";
    bool rieffel = false;
    std::string function = "id";
    std::size_t grid = 0;
    std::size_t resolution = 256;
    std::string weight = "growth-sqrt";
    std::string norm_a, norm_b;
    double c = 1.0;
    std::size_t samples = 100;
    std::vector<std::string> inputs;
};

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << h;
    return o.str();
}

namespace cli_detail {

struct Outcome {
    Json result;
    bool inconclusive = false;
    std::string csv;  // used when --format csv and the command has a table
};

inline GroupPtr group_of(const RunConfig& c) {
    if (c.group.empty()) return nullptr;
    return make_group(GroupSpec::parse(c.group));
}

inline AlgElement load_element(const RunConfig& c) {
    if (c.element.empty()) throw DomainError("--element is required for " + c.command);
    return element_from_json(io::load_json(c.element), group_of(c));
}

inline EstimatorOptions estimator_options(const RunConfig& c) {
    EstimatorOptions o;
    o.n_max = c.n_max;
    o.tol = c.tol;
    o.support_cap = c.cap_support;
    o.fourier_grid = c.grid;
    return o;
}

inline std::string element_key(const AlgElement& a) { return fnv1a_hex(element_to_json(a).dump()); }

inline Json element_summary(const AlgElement& a, const std::string& path) {
    auto n = norms(a, 0);
    return {{"file", path},
            {"id", element_key(a)},
            {"group", a.group().spec().to_string()},
            {"terms", a.size()},
            {"l1", n.l1},
            {"l2", n.l2}};
}

inline Outcome cmd_radius(const RunConfig& c) {
    auto a = load_element(c);
    auto e = l1_spectral_radius(a, estimator_options(c));
    return {{{"element", element_summary(a, c.element)}, {"r_l1", estimate_to_json(e)}}, false, {}};
}

inline Outcome cmd_norm(const RunConfig& c) {
    auto a = load_element(c);
    auto e = reduced_norm_bounds(a, estimator_options(c));
    return {{{"element", element_summary(a, c.element)}, {"opnorm", estimate_to_json(e)}}, false, {}};
}

inline Outcome cmd_sigma1(const RunConfig& c) {
    auto a = load_element(c);
    auto v = sigma1_verdict(a, estimator_options(c), element_key(a));
    Json r = verdict_to_json(v);
    r["element"] = element_summary(a, c.element);
    return {r, v.verdict == Sigma1Outcome::Inconclusive, {}};
}

inline Outcome cmd_kesten(const RunConfig& c) {
    GroupPtr g;
    std::vector<GroupElement> s;
    if (!c.element.empty()) {
        auto a = load_element(c);
        g = a.group_ptr();
        s = a.support();
    } else {
        g = group_of(c);
        if (!g) throw DomainError("kesten needs --group or --element");
        s = g->generators();
    }
    auto k = kesten_check(s, g, estimator_options(c));
    Json set = Json::array();
    for (const auto& x : s) set.push_back(g->format(x));
    Json r = kesten_to_json(k);
    r["group"] = g->spec().to_string();
    r["set"] = set;
    r["excludes_card"] = !k.amenable_consistent;
    return {r, false, {}};
}

inline HoloFunction parse_function(const std::string& text) {
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto numbers = [&] {
        std::vector<Complex> v;
        std::stringstream ss(arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                v.emplace_back(std::stod(tok), 0.0);
            } catch (const std::exception&) {
                throw ParseError("bad coefficient '" + tok + "' in --function " + text);
            }
        }
        if (v.empty()) throw ParseError("--function " + text + " needs coefficients");
        return v;
    };
    if (head == "id") return HoloFunction::identity();
    if (head == "exp") return HoloFunction::exp();
    if (head == "log") return HoloFunction::log();
    if (head == "chi") return HoloFunction::chi();
    if (head == "square") return HoloFunction::polynomial({0, 0, 1});
    if (head == "poly") return HoloFunction::polynomial(numbers());
    if (head == "homotopy") {
        try {
            return HoloFunction::homotopy(std::stod(arg));
        } catch (const std::invalid_argument&) {
            throw ParseError("--function homotopy:<t> needs a number");
        }
    }
    if (head == "inverse") return HoloFunction::rational({1}, {0, 1});
    throw ParseError("unknown --function '" + text + "' (id, exp, log, chi, square, poly:c0,c1,..., homotopy:t, inverse)");
}

inline Region load_region(const RunConfig& c, Region fallback) {
    if (c.region.empty()) return fallback;
    if (c.region == "omega0" || c.region == "omega1" || c.region == "full_plane")
        return region_from_json(Json(c.region));
    return region_from_json(io::load_json(c.region));
}

inline Matrix load_matrix(const RunConfig& c) {
    if (c.matrix.empty()) throw DomainError("--matrix is required for " + c.command);
    return matrix_from_json(io::load_json(c.matrix));
}

inline Json eig_json(const std::vector<Complex>& v) {
    Json a = Json::array();
    for (auto z : v) a.push_back(io::complex_json(z));
    return a;
}

inline Outcome cmd_calc(const RunConfig& c) {
    auto f = parse_function(c.function);
    auto m = load_matrix(c);
    const bool split = f.kind == HoloKind::Chi || f.kind == HoloKind::Homotopy;
    Region omega = load_region(c, split ? Region::omega0() : Region::full_plane());
    HoloOptions o;
    o.nodes = c.nodes;
    auto res = holo_calc(f, m, omega, o);
    auto eig_in = eigenvalues(m);
    std::vector<Complex> mapped;
    for (auto z : eig_in) mapped.push_back(f(z));
    auto eig_out = eigenvalues(res.value);
    double dist = multiset_distance(mapped, eig_out);
    Json r{{"function", c.function},
           {"region", region_to_json(omega)},
           {"nodes", res.nodes},
           {"converged", res.converged},
           {"last_change", res.last_change},
           {"result", matrix_to_json(res.value)},
           {"eigenvalues", eig_json(eig_in)},
           {"spectral_mapping_distance", dist}};
    return {r, !res.converged, {}};
}

inline Outcome cmd_kcount(const RunConfig& c) {
    Region omega = load_region(c, Region::omega0());
    auto m = load_matrix(c);
    auto eigs = eigenvalues(m);
    auto oc = analyze_components(omega, auto_bbox(omega, eigs), c.resolution);
    auto counts = component_counts(m, oc);
    Json comps = Json::array();
    for (std::size_t i = 0; i < oc.components().size(); ++i)
        comps.push_back({{"index", i},
                         {"representative", io::complex_json(oc.components()[i].representative)},
                         {"cells", oc.components()[i].cells},
                         {"base", i == oc.base_index()}});
    Json r{{"region", region_to_json(omega)},
           {"k", k_group_rank(oc)},
           {"counts", counts.counts},
           {"eigenvalues", eig_json(eigs)},
           {"components", comps},
           {"resolution", oc.resolution()}};
    return {r, false, {}};
}

inline std::pair<int, int> parse_k_range(const std::string& s) {
    try {
        auto dots = s.find("..");
        std::size_t used = 0;
        if (dots == std::string::npos) {
            int k = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing");
            return {k, k};
        }
        int a = std::stoi(s.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument("trailing");
        auto rest = s.substr(dots + 2);
        int b = std::stoi(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("trailing");
        return {a, b};
    } catch (const std::exception&) {
        throw ParseError("bad --k range '" + s + "' (expected N or A..B)");
    }
}

inline Outcome cmd_ranks(const RunConfig& c) {
    if (c.space.empty()) throw DomainError("--space is required for ranks");
    auto space = SpaceDescriptor::parse(c.space);
    auto [k0, k1] = parse_k_range(c.k_range);
    auto rows = rank_table(space, k0, k1, c.rieffel);
    auto th = k_stability_thresholds(space);
    Json r{{"space", space.to_string()},
           {"rieffel", c.rieffel},
           {"table", rank_rows_to_json(space, rows)},
           {"k_stability",
            {{"k1_threshold", th.k1},
             {"k0_threshold", th.k0},
             {"provenance", to_string(th.provenance)},
             {"tsr", th.tsr},
             {"k1_threshold_tsr", th.k1_tsr},
             {"k0_threshold_tsr", th.k0_tsr},
             {"k1_threshold_tsr_rieffel", th.k1_tsr_rieffel},
             {"k0_threshold_tsr_rieffel", th.k0_tsr_rieffel}}}};
    return {r, false, rank_rows_to_csv(space, rows)};
}

inline Outcome cmd_weights(const RunConfig& c) {
    auto w = Weight::parse(c.weight);
    GroupPtr g;
    std::vector<GroupElement> s;
    if (!c.element.empty()) {
        auto a = load_element(c);
        g = a.group_ptr();
        s = a.support();
    } else {
        g = group_of(c);
        if (!g) throw DomainError("weights needs --group or --element");
        s = g->generators();
    }
    auto probe = subexponentiality_probe(w, s, *g, c.n_max, c.cap_ball);
    Json r{{"group", g->spec().to_string()}, {"omega_S", evaluate(w, s, *g, c.cap_ball)}, {"probe", probe_to_json(probe)}};
    std::string csv = probe_to_csv(probe);
    bool inconclusive = false;
    if (!c.norm_a.empty() || !c.norm_b.empty()) {
        auto na = NormSelector::parse(c.norm_a.empty() ? "l2" : c.norm_a);
        auto nb = NormSelector::parse(c.norm_b.empty() ? "l1" : c.norm_b);
        Rng rng(c.seed);
        std::vector<AlgElement> samples;
        for (std::size_t i = 0; i < c.samples; ++i) samples.push_back(random_element(g, rng));
        auto rep = control_check(samples, na, nb, c.c, w, c.grid);
        r["control"] = control_to_json(rep);
        csv = control_to_csv(rep);
        inconclusive = rep.inconclusive > 0;
    }
    return {r, inconclusive, csv};
}

inline Json envelope(const RunConfig& c, const std::string& command) {
    Json params{{"n_max", c.n_max}, {"tol", c.tol}, {"nodes", c.nodes}, {"cap_ball", c.cap_ball},
                {"cap_support", c.cap_support}};
    if (!c.group.empty()) params["group"] = c.group;
    if (!c.element.empty()) params["element"] = c.element;
    if (!c.region.empty()) params["region"] = c.region;
    if (!c.space.empty()) params["space"] = c.space;
    if (!c.matrix.empty()) params["matrix"] = c.matrix;
    return {{"tool", kToolName}, {"version", kVersion}, {"command", command}, {"seed", c.seed}, {"parameters", params}};
}

inline Outcome cmd_report(const RunConfig& c) {
    std::vector<Json> docs(c.inputs.size());
    parallel_for(c.inputs.size(), [&](std::size_t i) { docs[i] = io::load_json(c.inputs[i]); });
    std::map<std::string, std::vector<Json>> sections;
    std::map<std::string, Json> by_element;
    std::vector<std::pair<std::string, Json>> inputs;
    std::optional<std::uint64_t> seed;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const auto& d = docs[i];
        const auto& file = c.inputs[i];
        if (!d.is_object() || d.value("tool", std::string()) != kToolName)
            throw DomainError("report input '" + file + "' was not produced by " + kToolName);
        if (d.value("version", std::string()) != kVersion)
            throw DomainError("report input '" + file + "' has version " + d.value("version", std::string("?")) +
                              ", expected " + kVersion);
        auto s = d.value("seed", std::uint64_t{0});
        if (seed && *seed != s) throw DomainError("report inputs mix seeds " + std::to_string(*seed) + " and " + std::to_string(s));
        seed = s;
        const auto cmd = d.value("command", std::string());
        if (cmd == "report") throw DomainError("report inputs cannot themselves be reports");
        const auto sum = fnv1a_hex(d.dump());
        inputs.emplace_back(sum + file, Json{{"file", file}, {"command", cmd}, {"checksum", sum}});
        Json entry{{"checksum", sum}, {"parameters", d.value("parameters", Json::object())},
                   {"result", d.value("result", Json::object())}};
        sections[cmd].push_back(entry);
        if (d.contains("result") && d["result"].contains("element")) {
            auto id = d["result"]["element"].value("id", std::string());
            if (!id.empty()) by_element[id][cmd] = d["result"];
        }
    }
    std::sort(inputs.begin(), inputs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Json in = Json::array();
    for (auto& p : inputs) in.push_back(p.second);
    Json sec = Json::object();
    for (auto& [cmd, list] : sections) {
        std::sort(list.begin(), list.end(), [](const Json& a, const Json& b) { return a["checksum"] < b["checksum"]; });
        sec[cmd] = list;
    }
    Json xref = Json::array();
    for (const auto& [id, parts] : by_element) {
        Json row{{"element", id}};
        if (parts.contains("radius")) row["r_l1"] = parts["radius"]["r_l1"];
        if (parts.contains("norm")) row["opnorm"] = parts["norm"]["opnorm"];
        if (parts.contains("sigma1")) {
            const auto& res = parts["sigma1"];
            row["verdict"] = res["verdict"];
            row["margin"] = res["margin"];
            if (!row.contains("r_l1")) row["r_l1"] = res["r_l1"];
            if (!row.contains("opnorm")) row["opnorm"] = res["opnorm"];
        }
        if (parts.contains("radius") && parts.contains("sigma1")) {
            const auto& a = parts["radius"]["r_l1"];
            const auto& b = parts["sigma1"]["r_l1"];
            row["radius_intervals_overlap"] =
                a["lower"].get<double>() <= b["upper"].get<double>() * (1 + 1e-12) &&
                b["lower"].get<double>() <= a["upper"].get<double>() * (1 + 1e-12);
        }
        xref.push_back(row);
    }
    Json r{{"inputs", in}, {"sections", sec}, {"cross_reference", xref}};
    if (seed) r["bundle_seed"] = *seed;
    return {r, false, {}};
}

inline int exit_code_for(const Error& e) {
    return e.category() == Error::Category::Resource ? kExitResource : kExitDomain;
}

}  // namespace cli_detail

inline std::size_t default_n_max(const std::string& command) { return command == "weights" ? 32 : 1024; }

inline int run_config(const RunConfig& config, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    RunConfig c = config;
    if (c.n_max == 0) c.n_max = default_n_max(c.command);
    try {
        if (c.n_max < 2 || !is_power_of_two(c.n_max)) throw DomainError("--n-max must be a power of two >= 2");
        if (!(c.tol > 0)) throw DomainError("--tol must be positive");
        if (c.nodes < 4) throw DomainError("--nodes must be >= 4");
        std::string fmt = c.format.empty() ? (c.command == "ranks" ? "csv" : "json") : c.format;
        if (fmt != "json" && fmt != "csv") throw ParseError("--format must be json or csv");
        Outcome o;
        if (c.command == "radius") o = cmd_radius(c);
        else if (c.command == "norm") o = cmd_norm(c);
        else if (c.command == "sigma1") o = cmd_sigma1(c);
        else if (c.command == "kesten") o = cmd_kesten(c);
        else if (c.command == "calc") o = cmd_calc(c);
        else if (c.command == "kcount") o = cmd_kcount(c);
        else if (c.command == "ranks") o = cmd_ranks(c);
        else if (c.command == "weights") o = cmd_weights(c);
        else if (c.command == "report") o = cmd_report(c);
        else throw ParseError("unknown command '" + c.command + "'");

        if (fmt == "csv") {
            if (o.csv.empty()) throw DomainError("command '" + c.command + "' has no CSV table; use --format json");
            out << o.csv;
        } else {
            Json doc = envelope(c, c.command);
            doc["status"] = o.inconclusive ? "inconclusive" : "ok";
            doc["result"] = o.result;
            out << doc.dump(2) << '\n';
        }
        if (o.inconclusive && c.strict) {
            err << "inconclusive result under --strict\n";
            return kExitInconclusive;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    RunConfig c;
    CLI::App app{"Spectral radii, holomorphic calculus, spectral K-theory and stable ranks", kToolName};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);

    auto common = [&](CLI::App* s) {
        s->add_option("--group", c.group, "Group spec, e.g. free:2, lattice:2, heisenberg, cyclic:5, lattice:1*free:2");
        s->add_option("--element", c.element, "Element file (JSON)");
        s->add_option("--n-max", c.n_max, "Largest power (power of two; default 1024, 32 for weights)");
        s->add_option("--tol", c.tol, "Relative tolerance for verdicts");
        s->add_option("--nodes", c.nodes, "Quadrature nodes per circle");
        s->add_option("--seed", c.seed, "Random seed");
        s->add_option("--format", c.format, "json or csv");
        s->add_flag("--strict", c.strict, "Exit 4 on inconclusive verdicts");
        s->add_option("--cap-ball", c.cap_ball, "Ball enumeration cap");
        s->add_option("--cap-support", c.cap_support, "Support size cap for products");
        s->add_option("--region", c.region, "Region file (JSON) or omega0 / omega1 / full_plane");
        s->add_option("--space", c.space, "Space descriptor, e.g. torus:3, sphere:2, cube:4, cw:4:top");
        s->add_option("--grid", c.grid, "Fourier grid per axis (0 = automatic)");
    };
    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {{"radius", "l1 spectral radius of an element"},
                        {"norm", "reduced C*-norm bounds of an element"},
                        {"sigma1", "compare the l1 spectral radius with the reduced norm"},
                        {"kesten", "Kesten amenability check for a symmetric set"},
                        {"calc", "holomorphic functional calculus of a matrix"},
                        {"kcount", "eigenvalue counts per region component"},
                        {"ranks", "stable-rank table for a space"},
                        {"weights", "subexponential weight probe and norm control"},
                        {"report", "aggregate earlier JSON outputs"}};
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        common(sub);
        const std::string name = s.name;
        if (name == "calc" || name == "kcount") sub->add_option("--matrix", c.matrix, "Matrix file (JSON)");
        if (name == "calc") sub->add_option("--function", c.function, "id, exp, log, chi, square, poly:..., homotopy:t, inverse");
        if (name == "kcount") sub->add_option("--resolution", c.resolution, "Flood-fill grid resolution");
        if (name == "ranks") {
            sub->add_option("--k", c.k_range, "k or range A..B");
            sub->add_flag("--rieffel", c.rieffel, "Assume the Rieffel estimate");
        }
        if (name == "weights") {
            sub->add_option("--weight", c.weight, "growth-sqrt, poly:<s> or const:<c>");
            sub->add_option("--norm-a", c.norm_a, "l1, l2, l2w:<s> or opnorm");
            sub->add_option("--norm-b", c.norm_b, "l1, l2, l2w:<s> or opnorm");
            sub->add_option("--C", c.c, "Control constant");
            sub->add_option("--samples", c.samples, "Random samples for the control check");
        }
        if (name == "report") sub->add_option("inputs", c.inputs, "Earlier JSON outputs");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    for (auto* s : app.get_subcommands()) c.command = s->get_name();
    return run_config(c, out, err);
}

}  // namespace sgamma
