#pragma once

// Spectral K-theory over C. For an open Ω ∋ 0 with components Ω₀ (the one
// containing 0), Ω₁, ..., Ω_k, a matrix with spectrum in Ω is classified up
// to eventual homotopy by how many eigenvalues fall in each Ω_i, i ≥ 1.

#include <string>
#include <vector>

#include "spectral_gamma/holocalc.hpp"
#include "spectral_gamma/region.hpp"

namespace sgamma {

struct CountVector {
    std::vector<long> counts;

    bool operator==(const CountVector& o) const { return counts == o.counts; }
    std::size_t k() const { return counts.size(); }
};

inline CountVector component_counts(const Matrix& m, const OmegaComponents& oc, double margin = -1) {
    CountVector c;
    c.counts.assign(oc.k(), 0);
    for (auto z : eigenvalues(m)) {
        double mg = margin < 0 ? default_region_margin(z) : margin;
        if (!oc.region().contains_with_margin(z, mg))
            throw DomainError("eigenvalue (" + std::to_string(z.real()) + "," + std::to_string(z.imag()) +
                              ") is outside the region or on its boundary");
        auto comp = oc.component_of(z);
        if (auto slot = oc.count_slot(*comp)) ++c.counts[*slot];
    }
    return c;
}

inline CountVector v_add(const CountVector& a, const CountVector& b) {
    if (a.k() != b.k())
        throw DomainError("count vectors have different lengths " + std::to_string(a.k()) + " and " +
                          std::to_string(b.k()));
    CountVector r = a;
    for (std::size_t i = 0; i < r.counts.size(); ++i) r.counts[i] += b.counts[i];
    return r;
}

/// Grothendieck completion: integer vector of count differences.
inline std::vector<long> k_class(const CountVector& a, const CountVector& b) {
    if (a.k() != b.k()) throw DomainError("count vectors have different lengths");
    std::vector<long> r(a.k());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.counts[i] - b.counts[i];
    return r;
}

/// Rank of K_Ω(C) ≅ Z^k.
inline std::size_t k_group_rank(const OmegaComponents& oc) { return oc.k(); }

/// diag(λ_1 repeated #_1 times, ..., λ_k repeated #_k times, 0, ..., 0).
/// basepoints[i] must lie in the i-th non-base component.
inline Matrix normal_form(const Matrix& m, const OmegaComponents& oc, const std::vector<Complex>& basepoints) {
    if (basepoints.size() != oc.k())
        throw DomainError("expected " + std::to_string(oc.k()) + " basepoints, got " +
                          std::to_string(basepoints.size()));
    for (std::size_t i = 0; i < basepoints.size(); ++i) {
        auto comp = oc.component_of(basepoints[i]);
        if (!comp || oc.count_slot(*comp) != i)
            throw DomainError("basepoint " + std::to_string(i) + " is not in component " + std::to_string(i + 1));
    }
    auto c = component_counts(m, oc);
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    Eigen::Index pos = 0;
    for (std::size_t i = 0; i < c.counts.size(); ++i)
        for (long j = 0; j < c.counts[i]; ++j, ++pos) out(pos, pos) = basepoints[i];
    return out;
}

/// Same class in V_Ω(C), sizes may differ (padding by zero blocks).
inline bool same_class(const Matrix& a, const Matrix& b, const OmegaComponents& oc) {
    return component_counts(a, oc) == component_counts(b, oc);
}

/// diag(a, b)
inline Matrix block_diag(const Matrix& a, const Matrix& b) {
    Matrix r = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    r.topLeftCorner(a.rows(), a.cols()) = a;
    r.bottomRightCorner(b.rows(), b.cols()) = b;
    return r;
}

/// Numerical rank of an idempotent: its trace, rounded.
inline long idempotent_rank(const Matrix& e, double tol = 1e-6) {
    Complex tr = e.trace();
    double r = std::round(tr.real());
    if (std::abs(tr - Complex(r, 0)) > tol) throw NumericalError("trace of the idempotent is not an integer");
    return static_cast<long>(r);
}

/// rank χ(m) for m with spectrum off Re = 1/2.
inline long chi_rank(const Matrix& m, const HoloOptions& o = {}) {
    auto e = holo_calc(HoloFunction::chi(), m, Region::omega0(), o).value;
    return idempotent_rank(e);
}

}  // namespace sgamma
