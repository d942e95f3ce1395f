#pragma once

// Repeated squaring of a group-algebra element in log scale. Each square is
// renormalized to unit ℓ¹ norm and tiny coefficients are dropped; the dropped
// ℓ¹ mass is carried as an explicit error so every derived bound stays valid.

#include <cmath>
#include <limits>
#include <vector>

#include "spectral_gamma/algebra.hpp"

namespace sgamma {

inline constexpr double kDefaultTruncation = 1e-14;

/// The true power equals exp(log_scale) · (t + e) with ‖t‖₁ = 1 and ‖e‖₁ <= err.
struct ScaledPower {
    AlgElement t;
    double log_scale = 0;
    double err = 0;

    double log_l1_upper() const { return log_scale + std::log1p(err); }

    double log_l2_upper() const { return log_scale + std::log(t.l2() + err); }

    /// -inf when the error swamps the stored part.
    double log_l2_lower() const {
        double v = t.l2() - err;
        return v > 0 ? log_scale + std::log(v) : -std::numeric_limits<double>::infinity();
    }
};

inline ScaledPower scaled_start(const AlgElement& a) {
    const double n = a.l1();
    if (n == 0) throw DomainError("cannot renormalize the zero element");
    return {a.scaled(Complex(1.0 / n, 0.0)), std::log(n), 0.0};
}

inline ScaledPower scaled_square(const ScaledPower& p, double truncation, std::size_t support_cap) {
    AlgElement q = convolve(p.t, p.t, support_cap);
    // (t+e)² - t² = te + et + e², with ‖t‖₁ = 1
    double err = 2.0 * p.err + p.err * p.err;
    const double threshold = truncation * q.l1();
    std::vector<AlgElement::Term> kept;
    kept.reserve(q.size());
    double dropped = 0;
    for (const auto& term : q.terms()) {
        double m = std::abs(term.second);
        if (m < threshold) dropped += m;
        else kept.push_back(term);
    }
    AlgElement k = AlgElement::adopt_sorted(q.group_ptr(), std::move(kept));
    const double norm = k.l1();
    if (norm == 0) throw ResourceError("all coefficients fell below the truncation threshold");
    err += dropped;
    return {k.scaled(Complex(1.0 / norm, 0.0)), 2.0 * p.log_scale + std::log(norm), err / norm};
}

}  // namespace sgamma
