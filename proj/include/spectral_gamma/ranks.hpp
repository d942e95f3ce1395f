#pragma once

// Stable ranks of C(Σ) for a few families of compact spaces, the bounds
// relating csr_k, tsr and hsr_k, and finite-dimensional Lg_n / Bass checks.

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include "spectral_gamma/errors.hpp"

namespace sgamma {

enum class SpaceKind { Point, Torus, Sphere, Cube, FiniteCW };

struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::Point;
    int d = 0;  // dimension parameter (Cube: k, FiniteCW: dim)
    bool top_cohom_nonzero = false;
    bool codim1_cohom_nonzero = false;

    static SpaceDescriptor point() { return {}; }
    static SpaceDescriptor torus(int d) { return make(SpaceKind::Torus, d); }
    static SpaceDescriptor sphere(int d) { return make(SpaceKind::Sphere, d); }
    static SpaceDescriptor cube(int k) { return make(SpaceKind::Cube, k); }
    static SpaceDescriptor finite_cw(int dim, bool top, bool codim1) {
        auto s = make(SpaceKind::FiniteCW, dim);
        s.top_cohom_nonzero = top;
        s.codim1_cohom_nonzero = codim1;
        return s;
    }

    int dim() const { return kind == SpaceKind::Point ? 0 : d; }

    std::string to_string() const {
        switch (kind) {
            case SpaceKind::Point: return "point";
            case SpaceKind::Torus: return "torus:" + std::to_string(d);
            case SpaceKind::Sphere: return "sphere:" + std::to_string(d);
            case SpaceKind::Cube: return "cube:" + std::to_string(d);
            case SpaceKind::FiniteCW: {
                std::string s = "cw:" + std::to_string(d);
                if (top_cohom_nonzero) s += ":top";
                if (codim1_cohom_nonzero) s += ":codim1";
                return s;
            }
        }
        return {};
    }

    /// point | torus:<d> | sphere:<d> | cube:<k> | cw:<dim>[:top][:codim1]
    static SpaceDescriptor parse(const std::string& text) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        for (;;) {
            auto pos = text.find(':', start);
            parts.push_back(text.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        auto number = [&](std::size_t i) {
            if (i >= parts.size()) throw ParseError("space '" + text + "' needs a dimension");
            try {
                std::size_t used = 0;
                int v = std::stoi(parts[i], &used);
                if (used != parts[i].size() || v < 0) throw std::invalid_argument("bad");
                return v;
            } catch (const std::exception&) {
                throw ParseError("bad dimension '" + parts[i] + "' in space '" + text + "'");
            }
        };
        const auto& head = parts[0];
        if (head == "point") {
            if (parts.size() != 1) throw ParseError("space 'point' takes no parameters");
            return point();
        }
        SpaceDescriptor s;
        if (head == "torus") s = torus(number(1));
        else if (head == "sphere") s = sphere(number(1));
        else if (head == "cube") s = cube(number(1));
        else if (head == "cw") {
            s = finite_cw(number(1), false, false);
            for (std::size_t i = 2; i < parts.size(); ++i) {
                if (parts[i] == "top") s.top_cohom_nonzero = true;
                else if (parts[i] == "codim1") s.codim1_cohom_nonzero = true;
                else throw ParseError("unknown cohomology flag '" + parts[i] + "' in space '" + text + "'");
            }
            return s;
        } else {
            throw ParseError("unknown space '" + text + "' (expected point, torus:d, sphere:d, cube:k, cw:dim[:top][:codim1])");
        }
        if (parts.size() != 2) throw ParseError("space '" + text + "' takes exactly one parameter");
        return s;
    }

private:
    static SpaceDescriptor make(SpaceKind k, int d) {
        if (d < 0) throw DomainError("space dimension must be >= 0");
        SpaceDescriptor s;
        s.kind = k;
        s.d = d;
        return s;
    }
};

enum class Provenance { ExactFormula, UpperBoundOnly };

inline const char* to_string(Provenance p) {
    return p == Provenance::ExactFormula ? "exact-formula" : "upper-bound-only";
}

struct RankValue {
    int value = 0;  // the value, or an upper bound for it
    Provenance provenance = Provenance::ExactFormula;
    bool exact() const { return provenance == Provenance::ExactFormula; }
};

inline int ceil_half(int n) { return (n + 1) / 2; }

/// ⌈(dim + k)/2⌉ + 1
inline int csr_upper_bound(int dim, int k) {
    if (dim < 0 || k < 0) throw DomainError("dim and k must be >= 0");
    return ceil_half(dim + k) + 1;
}

/// ⌊dim/2⌋ + 1
inline int tsr_commutative(int dim) {
    if (dim < 0) throw DomainError("dim must be >= 0");
    return dim / 2 + 1;
}

/// tsr + k + 1, or tsr + ⌊k/2⌋ + 1 under the Rieffel estimate.
inline int csr_tsr_bound(int tsr, int k, bool rieffel) {
    if (tsr < 1 || k < 0) throw DomainError("tsr must be >= 1 and k >= 0");
    return rieffel ? tsr + k / 2 + 1 : tsr + k + 1;
}

inline RankValue csr_k_formula(const SpaceDescriptor& s, int k) {
    if (k < 0) throw DomainError("k must be >= 0");
    const int bound = csr_upper_bound(s.dim(), k);
    switch (s.kind) {
        case SpaceKind::Point:
        case SpaceKind::Cube: return {ceil_half(k) + 1, Provenance::ExactFormula};
        case SpaceKind::Torus: return {bound, Provenance::ExactFormula};
        case SpaceKind::Sphere:
            if (k == 0 && s.d == 2) return {1, Provenance::ExactFormula};
            return {bound, Provenance::ExactFormula};
        case SpaceKind::FiniteCW: {
            bool exact;
            if (k >= 1) exact = s.top_cohom_nonzero;
            else if (s.d % 2 == 1) exact = s.top_cohom_nonzero;
            else exact = s.codim1_cohom_nonzero && s.d >= 1;
            return {bound, exact ? Provenance::ExactFormula : Provenance::UpperBoundOnly};
        }
    }
    return {bound, Provenance::UpperBoundOnly};
}

struct HsrBounds {
    int lower = 0;
    int upper = 0;
    Provenance provenance = Provenance::UpperBoundOnly;  // exact when lower == upper
};

/// hsr_k <= csr_{k+1} - 1, and csr_k - 1 <= max(hsr_k, csr - 1).
inline HsrBounds hsr_bounds(const SpaceDescriptor& s, int k) {
    auto next = csr_k_formula(s, k + 1);
    auto cur = csr_k_formula(s, k);
    auto base = csr_k_formula(s, 0);
    HsrBounds h;
    h.upper = next.value - 1;
    if (cur.exact() && cur.value - 1 > base.value - 1) h.lower = cur.value - 1;
    h.provenance = h.lower == h.upper ? Provenance::ExactFormula : Provenance::UpperBoundOnly;
    return h;
}

struct StabilityThresholds {
    int k1 = 0;  // K₁ ≅ π₀(GL_n) for n >= k1 = csr₁ - 1
    int k0 = 0;  // K₀ ≅ π₁(GL_n) for n >= k0 = csr₂ - 1
    Provenance provenance = Provenance::ExactFormula;
    int tsr = 0;
    int k1_tsr = 0;  // tsr + 1
    int k0_tsr = 0;  // tsr + 2
    int k1_tsr_rieffel = 0;  // tsr
    int k0_tsr_rieffel = 0;  // tsr + 1
};

/// csr-based thresholds; bound-only csr values give thresholds that are
/// still valid (stabilization holds from there on) but may not be sharp.
inline StabilityThresholds k_stability_thresholds(const SpaceDescriptor& s) {
    StabilityThresholds t;
    auto c1 = csr_k_formula(s, 1);
    auto c2 = csr_k_formula(s, 2);
    t.k1 = c1.value - 1;
    t.k0 = c2.value - 1;
    t.provenance = c1.exact() && c2.exact() ? Provenance::ExactFormula : Provenance::UpperBoundOnly;
    t.tsr = tsr_commutative(s.dim());
    t.k1_tsr = csr_tsr_bound(t.tsr, 1, false) - 1;
    t.k0_tsr = csr_tsr_bound(t.tsr, 2, false) - 1;
    t.k1_tsr_rieffel = csr_tsr_bound(t.tsr, 1, true) - 1;
    t.k0_tsr_rieffel = csr_tsr_bound(t.tsr, 2, true) - 1;
    return t;
}

struct RankRow {
    int k = 0;
    RankValue csr;
    int csr_bound = 0;  // (+)
    int tsr = 0;
    int csr_tsr = 0;
    HsrBounds hsr;
};

inline std::vector<RankRow> rank_table(const SpaceDescriptor& s, int k_min, int k_max, bool rieffel = false) {
    if (k_min < 0 || k_max < k_min) throw DomainError("bad k range");
    std::vector<RankRow> rows;
    for (int k = k_min; k <= k_max; ++k) {
        RankRow r;
        r.k = k;
        r.csr = csr_k_formula(s, k);
        r.csr_bound = csr_upper_bound(s.dim(), k);
        r.tsr = tsr_commutative(s.dim());
        r.csr_tsr = csr_tsr_bound(r.tsr, k, rieffel);
        r.hsr = hsr_bounds(s, k);
        rows.push_back(r);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Left-generating tuples
// ---------------------------------------------------------------------------

/// (a_1, ..., a_n) ∈ Lg_n(M_m(C)) iff the stacked nm × m matrix has rank m.
/// For 1 × 1 matrices this is the exact nonzero test.
inline bool lg_membership(const std::vector<Eigen::MatrixXcd>& tuple) {
    if (tuple.empty()) throw DomainError("empty tuple");
    const auto m = tuple.front().rows();
    for (const auto& a : tuple)
        if (a.rows() != m || a.cols() != m) throw DomainError("tuple entries must all be " + std::to_string(m) + "x" + std::to_string(m));
    if (m == 1)
        return std::any_of(tuple.begin(), tuple.end(), [](const auto& a) { return a(0, 0) != std::complex<double>(0); });
    Eigen::MatrixXcd stack(static_cast<Eigen::Index>(tuple.size()) * m, m);
    for (std::size_t i = 0; i < tuple.size(); ++i) stack.block(static_cast<Eigen::Index>(i) * m, 0, m, m) = tuple[i];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stack);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0) return false;
    const double thr = 1e-10 * sv(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++rank;
    return rank == m;
}

inline bool lg_membership(const std::vector<std::complex<double>>& scalars) {
    if (scalars.empty()) throw DomainError("empty tuple");
    return std::any_of(scalars.begin(), scalars.end(), [](auto z) { return z != std::complex<double>(0); });
}

struct BassReduction {
    std::vector<std::complex<double>> x;        // x_1, ..., x_n
    std::vector<std::complex<double>> reduced;  // (a_i + x_i a_{n+1})
};

/// Reduces (a_1, ..., a_{n+1}) ∈ Lg_{n+1}(C) to Lg_n(C); bsr(C) = 1.
inline BassReduction bass_reduce(const std::vector<std::complex<double>>& a) {
    if (a.size() < 2) throw DomainError("Bass reduction needs n + 1 >= 2 entries");
    if (!lg_membership(a)) throw DomainError("tuple is not left-generating (all entries zero)");
    const std::size_t n = a.size() - 1;
    BassReduction r;
    r.x.assign(n, 0.0);
    bool head_nonzero = std::any_of(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n),
                                    [](auto z) { return z != std::complex<double>(0); });
    if (!head_nonzero) r.x[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) r.reduced.push_back(a[i] + r.x[i] * a[n]);
    return r;
}

}  // namespace sgamma
