#pragma once

// JSON readers and writers for groups, elements, matrices, regions and
// estimates. Parse failures name the offending field path or input line.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectral_gamma/algebra.hpp"
#include "spectral_gamma/groups.hpp"
#include "spectral_gamma/holocalc.hpp"
#include "spectral_gamma/ranks.hpp"
#include "spectral_gamma/region.hpp"
#include "spectral_gamma/spectra.hpp"
#include "spectral_gamma/weights.hpp"

namespace sgamma {

using Json = nlohmann::ordered_json;

namespace io {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Parses text as JSON; syntax errors report line and column.
inline Json parse_json(const std::string& text, const std::string& source = "<input>") {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
}

inline Json load_json(const std::string& path) { return parse_json(read_file(path), path); }

[[noreturn]] inline void fail(const std::string& field, const std::string& msg) {
    throw ParseError("field '" + field + "': " + msg);
}

inline const Json& require(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

inline double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

inline int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

inline Complex complex_value(const Json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object()) {
        double re = j.contains("re") ? number(j["re"], path + ".re") : 0.0;
        double im = j.contains("im") ? number(j["im"], path + ".im") : 0.0;
        return {re, im};
    }
    fail(path, "expected a number, [re, im] or {re, im}");
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

}  // namespace io

// ---------------------------------------------------------------------------
// Groups and elements
// ---------------------------------------------------------------------------

/// {"kind":"free","rank":2}, {"kind":"lattice","dim":2}, {"kind":"cyclic","n":5},
/// {"kind":"heisenberg"}, {"kind":"product","factors":[...]}, or a short string.
inline GroupSpec group_spec_from_json(const Json& j, const std::string& path = "group") {
    try {
        if (j.is_string()) return GroupSpec::parse(j.get<std::string>());
        const auto& kind = io::require(j, "kind", path);
        if (!kind.is_string()) io::fail(path + ".kind", "expected a string");
        const auto k = kind.get<std::string>();
        GroupSpec s;
        if (k == "lattice" || k == "integer_lattice")
            s = GroupSpec::lattice(io::integer(io::require(j, "dim", path), path + ".dim"));
        else if (k == "free" || k == "free_group")
            s = GroupSpec::free(io::integer(io::require(j, "rank", path), path + ".rank"));
        else if (k == "heisenberg" || k == "heisenberg3")
            s = GroupSpec::heisenberg();
        else if (k == "cyclic")
            s = GroupSpec::cyclic(io::integer(io::require(j, "n", path), path + ".n"));
        else if (k == "product") {
            const auto& fs = io::require(j, "factors", path);
            if (!fs.is_array()) io::fail(path + ".factors", "expected an array");
            std::vector<GroupSpec> out;
            for (std::size_t i = 0; i < fs.size(); ++i)
                out.push_back(group_spec_from_json(fs[i], path + ".factors[" + std::to_string(i) + "]"));
            s = GroupSpec::product(std::move(out));
        } else {
            io::fail(path + ".kind", "unknown group kind '" + k + "'");
        }
        s.validate();
        return s;
    } catch (const DomainError& e) {
        io::fail(path, e.what());
    }
}

inline Json group_spec_to_json(const GroupSpec& s) {
    switch (s.kind) {
        case GroupKind::IntegerLattice: return {{"kind", "lattice"}, {"dim", s.param}};
        case GroupKind::FreeGroup: return {{"kind", "free"}, {"rank", s.param}};
        case GroupKind::Heisenberg3: return {{"kind", "heisenberg"}};
        case GroupKind::Cyclic: return {{"kind", "cyclic"}, {"n", s.param}};
        case GroupKind::DirectProduct: {
            Json fs = Json::array();
            for (const auto& f : s.factors) fs.push_back(group_spec_to_json(f));
            return {{"kind", "product"}, {"factors", fs}};
        }
    }
    return {};
}

/// {"group": spec, "terms": [{"word": "y x", "re": 1, "im": 0}, ...]}. When
/// `group` is given it overrides (and must agree with) the file's group.
inline AlgElement element_from_json(const Json& j, GroupPtr group = nullptr) {
    if (!j.is_object()) io::fail("", "element must be a JSON object");
    if (j.contains("group")) {
        auto spec = group_spec_from_json(j["group"]);
        if (group && !(group->spec() == spec))
            throw ParseError("field 'group': file has " + spec.to_string() + " but " + group->spec().to_string() +
                             " was requested");
        if (!group) group = make_group(spec);
    }
    if (!group) io::fail("group", "missing (and no --group given)");
    const auto& terms = io::require(j, "terms", "");
    if (!terms.is_array()) io::fail("terms", "expected an array");
    std::vector<AlgElement::Term> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string path = "terms[" + std::to_string(i) + "]";
        const auto& t = terms[i];
        const auto& w = io::require(t, "word", path);
        GroupElement g;
        try {
            if (w.is_string()) g = group->parse(w.get<std::string>());
            else if (w.is_array()) {
                g.code.clear();
                for (const auto& v : w) g.code.push_back(static_cast<std::int32_t>(io::integer(v, path + ".word")));
                if (!group->is_valid(g)) io::fail(path + ".word", "not a valid element");
            } else {
                io::fail(path + ".word", "expected a string or an integer tuple");
            }
        } catch (const ParseError& e) {
            io::fail(path + ".word", e.what());
        }
        Complex c;
        if (t.contains("coeff")) c = io::complex_value(t["coeff"], path + ".coeff");
        else c = io::complex_value(Json{{"re", t.value("re", Json(0.0))}, {"im", t.value("im", Json(0.0))}}, path);
        out.emplace_back(std::move(g), c);
    }
    return AlgElement::from_terms(group, std::move(out));
}

inline Json element_to_json(const AlgElement& a) {
    Json terms = Json::array();
    for (const auto& [g, c] : a.terms())
        terms.push_back({{"word", a.group().format(g)}, {"re", c.real()}, {"im", c.imag()}});
    return {{"group", group_spec_to_json(a.group().spec())}, {"terms", terms}};
}

/// {"group": spec, "entries": [[element-terms, ...], ...]} where each entry is
/// an array of terms as in element files.
inline MatrixAlgElement matrix_element_from_json(const Json& j, GroupPtr group = nullptr) {
    if (j.contains("group") && !group) group = make_group(group_spec_from_json(j["group"]));
    if (!group) io::fail("group", "missing");
    const auto& rows = io::require(j, "entries", "");
    if (!rows.is_array() || rows.empty()) io::fail("entries", "expected a nonempty array of rows");
    MatrixAlgElement m(group, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != rows.size())
            io::fail("entries[" + std::to_string(i) + "]", "row length must equal the number of rows");
        for (std::size_t k = 0; k < rows.size(); ++k) {
            try {
                m.set(i, k, element_from_json(Json{{"terms", rows[i][k]}}, group));
            } catch (const ParseError& e) {
                throw ParseError("entries[" + std::to_string(i) + "][" + std::to_string(k) + "]: " + e.what());
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Complex matrices and regions
// ---------------------------------------------------------------------------

/// [[x, x, ...], ...] with x a number or [re, im]; also {"matrix": ...}.
inline Matrix matrix_from_json(const Json& j) {
    const Json& rows = j.is_object() ? io::require(j, "matrix", "") : j;
    if (!rows.is_array() || rows.empty()) io::fail("matrix", "expected a nonempty array of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            io::fail("matrix[" + std::to_string(i) + "]", "row length must equal the number of rows");
        for (Eigen::Index k = 0; k < n; ++k)
            m(i, k) = io::complex_value(row[static_cast<std::size_t>(k)],
                                        "matrix[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(io::complex_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

/// Region DSL:
///   {"disk": {"center": [re, im], "radius": r}}
///   {"half_plane": {"axis": "re"|"im", "threshold": t, "side": ">"|"<"}}
///   {"rect": [re0, re1, im0, im1]}   {"full_plane": true}
///   {"point": [re, im]}   {"line_re": c}   {"line_im": c}
///   {"point_complement": [re, im]}   {"line_complement": c}
///   {"op": "union"|"intersection", "of": [...]}   {"op": "complement", "of": {...}}
///   "omega0" | "omega1"
inline Region region_from_json(const Json& j, const std::string& path = "region") {
    if (j.is_string()) {
        auto name = j.get<std::string>();
        if (name == "omega0") return Region::omega0();
        if (name == "omega1") return Region::omega1();
        if (name == "full_plane") return Region::full_plane();
        io::fail(path, "unknown named region '" + name + "'");
    }
    if (!j.is_object()) io::fail(path, "expected an object or a region name");
    try {
        if (j.contains("op")) {
            const auto op = j["op"].is_string() ? j["op"].get<std::string>() : std::string();
            const auto& of = io::require(j, "of", path);
            if (op == "complement") return Region::complement(region_from_json(of, path + ".of"));
            if (op != "union" && op != "intersection") io::fail(path + ".op", "expected union, intersection or complement");
            if (!of.is_array()) io::fail(path + ".of", "expected an array");
            std::vector<Region> parts;
            for (std::size_t i = 0; i < of.size(); ++i)
                parts.push_back(region_from_json(of[i], path + ".of[" + std::to_string(i) + "]"));
            return op == "union" ? Region::unite(std::move(parts)) : Region::intersect(std::move(parts));
        }
        if (j.size() != 1) io::fail(path, "a primitive must have exactly one key");
        const auto& [key, v] = *j.items().begin();
        const std::string sub = path + "." + key;
        if (key == "disk") {
            return Region::leaf(Primitive::disk(io::complex_value(io::require(v, "center", sub), sub + ".center"),
                                                io::number(io::require(v, "radius", sub), sub + ".radius")));
        }
        if (key == "half_plane") {
            const auto& ax = io::require(v, "axis", sub);
            int axis = ax == "re" ? 0 : ax == "im" ? 1 : -1;
            if (axis < 0) io::fail(sub + ".axis", "expected \"re\" or \"im\"");
            std::string side = v.value("side", std::string(">"));
            if (side != ">" && side != "<") io::fail(sub + ".side", "expected \">\" or \"<\"");
            return Region::leaf(
                Primitive::half_plane(axis, io::number(io::require(v, "threshold", sub), sub + ".threshold"), side == ">"));
        }
        if (key == "rect") {
            if (!v.is_array() || v.size() != 4) io::fail(sub, "expected [re0, re1, im0, im1]");
            return Region::leaf(Primitive::rectangle(io::number(v[0], sub), io::number(v[1], sub),
                                                     io::number(v[2], sub), io::number(v[3], sub)));
        }
        if (key == "full_plane") return Region::full_plane();
        if (key == "point") return Region::leaf(Primitive::point(io::complex_value(v, sub)));
        if (key == "line_re") return Region::leaf(Primitive::line_re(io::number(v, sub)));
        if (key == "line_im") return Region::leaf(Primitive::line_im(io::number(v, sub)));
        if (key == "point_complement")
            return Region::complement(Region::leaf(Primitive::point(io::complex_value(v, sub))));
        if (key == "line_complement") return Region::complement(Region::leaf(Primitive::line_re(io::number(v, sub))));
        io::fail(sub, "unknown region primitive");
    } catch (const DomainError& e) {
        io::fail(path, e.what());
    }
}

inline Json region_to_json(const Region& r) {
    switch (r.op()) {
        case RegionOp::Complement: return {{"op", "complement"}, {"of", region_to_json(r.children().front())}};
        case RegionOp::Union:
        case RegionOp::Intersection: {
            Json of = Json::array();
            for (const auto& k : r.children()) of.push_back(region_to_json(k));
            return {{"op", r.op() == RegionOp::Union ? "union" : "intersection"}, {"of", of}};
        }
        case RegionOp::Leaf: break;
    }
    const auto& p = r.primitive();
    switch (p.kind) {
        case PrimKind::Disk: return {{"disk", {{"center", io::complex_json(p.center)}, {"radius", p.radius}}}};
        case PrimKind::HalfPlane:
            return {{"half_plane",
                     {{"axis", p.axis == 0 ? "re" : "im"}, {"threshold", p.value}, {"side", p.greater ? ">" : "<"}}}};
        case PrimKind::Rectangle: return {{"rect", {p.re0, p.re1, p.im0, p.im1}}};
        case PrimKind::FullPlane: return {{"full_plane", true}};
        case PrimKind::Point: return {{"point", io::complex_json(p.center)}};
        case PrimKind::LineRe: return {{"line_re", p.value}};
        case PrimKind::LineIm: return {{"line_im", p.value}};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

inline Json trace_json(const std::vector<std::pair<std::size_t, double>>& t) {
    Json a = Json::array();
    for (const auto& [n, v] : t) a.push_back(Json::array({n, v}));
    return a;
}

inline Json estimate_to_json(const SpectralEstimate& e) {
    Json j{{"value", e.value},       {"lower", e.lower},   {"upper", e.upper},
           {"trace", trace_json(e.trace)}, {"n_max", e.n_max}, {"method", e.method}};
    if (!e.upper_trace.empty()) j["upper_trace"] = trace_json(e.upper_trace);
    return j;
}

inline SpectralEstimate estimate_from_json(const Json& j, const std::string& path = "estimate") {
    SpectralEstimate e;
    e.value = io::number(io::require(j, "value", path), path + ".value");
    e.lower = io::number(io::require(j, "lower", path), path + ".lower");
    e.upper = io::number(io::require(j, "upper", path), path + ".upper");
    const auto& tr = io::require(j, "trace", path);
    if (!tr.is_array()) io::fail(path + ".trace", "expected an array");
    for (const auto& p : tr) {
        if (!p.is_array() || p.size() != 2) io::fail(path + ".trace", "expected [n, value] pairs");
        e.trace.emplace_back(p[0].get<std::size_t>(), io::number(p[1], path + ".trace"));
    }
    e.n_max = j.value("n_max", e.trace.empty() ? std::size_t{1} : e.trace.back().first);
    e.method = j.value("method", std::string());
    return e;
}

inline Json verdict_to_json(const Sigma1Verdict& v) {
    return {{"element", v.element_id},
            {"verdict", to_string(v.verdict)},
            {"margin", v.margin},
            {"r_l1", estimate_to_json(v.r_l1)},
            {"opnorm", estimate_to_json(v.opnorm)}};
}

inline Json kesten_to_json(const KestenReport& k) {
    return {{"card", k.card}, {"amenable_consistent", k.amenable_consistent}, {"radius", estimate_to_json(k.radius)}};
}

inline Json probe_to_json(const SubexpProbe& p) {
    Json pts = Json::array();
    for (const auto& q : p.points)
        pts.push_back({{"n", q.n}, {"value", q.value}, {"radius", q.radius}, {"mode", to_string(q.mode)}});
    return {{"weight", p.weight.to_string()},
            {"points", pts},
            {"trend", to_string(p.trend)},
            {"subexponential", p.subexponential}};
}

inline Json control_to_json(const ControlReport& r) {
    Json bad = Json::array();
    for (const auto& s : r.violating())
        bad.push_back({{"index", s.index},
                       {"outcome", to_string(s.outcome)},
                       {"norm_a", s.norm_a},
                       {"norm_b", s.norm_b},
                       {"omega", s.omega},
                       {"bound", s.bound},
                       {"margin", s.margin}});
    return {{"norm_a", r.norm_a.to_string()}, {"norm_b", r.norm_b.to_string()}, {"C", r.c},
            {"weight", r.weight.to_string()}, {"samples", r.samples.size()}, {"passes", r.passes},
            {"violations", r.violations},     {"inconclusive", r.inconclusive}, {"min_margin", r.min_margin},
            {"failing", bad}};
}

inline Json rank_rows_to_json(const SpaceDescriptor& s, const std::vector<RankRow>& rows) {
    Json a = Json::array();
    for (const auto& r : rows)
        a.push_back({{"space", s.to_string()},
                     {"k", r.k},
                     {"csr", r.csr.value},
                     {"csr_provenance", to_string(r.csr.provenance)},
                     {"csr_bound", r.csr_bound},
                     {"tsr", r.tsr},
                     {"csr_tsr_bound", r.csr_tsr},
                     {"hsr_lower", r.hsr.lower},
                     {"hsr_upper", r.hsr.upper},
                     {"hsr_provenance", to_string(r.hsr.provenance)}});
    return a;
}

inline std::string rank_rows_to_csv(const SpaceDescriptor& s, const std::vector<RankRow>& rows) {
    std::ostringstream out;
    out << "space,k,csr,csr_provenance,csr_bound,tsr,csr_tsr_bound,hsr_lower,hsr_upper\n";
    for (const auto& r : rows)
        out << s.to_string() << ',' << r.k << ',' << r.csr.value << ',' << to_string(r.csr.provenance) << ','
            << r.csr_bound << ',' << r.tsr << ',' << r.csr_tsr << ',' << r.hsr.lower << ',' << r.hsr.upper << '\n';
    return out.str();
}

inline std::string probe_to_csv(const SubexpProbe& p) {
    std::ostringstream out;
    out.precision(17);
    out << "n,value,radius,mode\n";
    for (const auto& q : p.points) out << q.n << ',' << q.value << ',' << q.radius << ',' << to_string(q.mode) << '\n';
    return out.str();
}

inline std::string control_to_csv(const ControlReport& r) {
    std::ostringstream out;
    out.precision(17);
    out << "index,outcome,norm_a,norm_b,omega,bound,margin\n";
    for (const auto& s : r.samples)
        out << s.index << ',' << to_string(s.outcome) << ',' << s.norm_a << ',' << s.norm_b << ',' << s.omega << ','
            << s.bound << ',' << s.margin << '\n';
    return out.str();
}

}  // namespace sgamma
