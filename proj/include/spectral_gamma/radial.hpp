#pragma once

// Radial elements of CF_r: functions of the word length alone. They form a
// commutative subalgebra generated by σ₁ (the indicator of the generators),
// with σ₁σ₁ = σ₂ + 2r·σ₀ and σ₁σ_j = σ_{j+1} + (2r-1)σ_{j-1} for j >= 2.
// Products of radial elements never need the exponentially large supports.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "spectral_gamma/algebra.hpp"

namespace sgamma {

/// f[k] is the common coefficient on words of length k.
struct RadialFunction {
    int rank = 2;
    std::vector<Complex> values;

    double q() const { return 2.0 * rank - 1.0; }

    double log_sphere(std::size_t k) const {
        if (k == 0) return 0.0;
        return std::log(2.0 * rank) + static_cast<double>(k - 1) * std::log(q());
    }
};

/// Returns the radial profile of `a` if `a` lives on a free group and its
/// coefficient depends only on word length.
inline std::optional<RadialFunction> as_radial(const AlgElement& a) {
    if (a.group().kind() != GroupKind::FreeGroup || a.is_zero()) return std::nullopt;
    RadialFunction f;
    f.rank = a.group().spec().param;
    std::vector<std::size_t> count;
    std::vector<bool> seen;
    for (const auto& [g, c] : a.terms()) {
        std::size_t k = g.code.size();
        if (k >= f.values.size()) {
            f.values.resize(k + 1, Complex(0));
            count.resize(k + 1, 0);
            seen.resize(k + 1, false);
        }
        if (!seen[k]) {
            f.values[k] = c;
            seen[k] = true;
        } else if (f.values[k] != c) {
            return std::nullopt;
        }
        ++count[k];
    }
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        if (!seen[k]) continue;
        double expected = std::exp(f.log_sphere(k));
        if (expected > 1e7 || static_cast<double>(count[k]) != std::round(expected)) return std::nullopt;
    }
    return f;
}

namespace detail {

// σ₁ * f
inline std::vector<Complex> sigma1_times(const std::vector<Complex>& f, int rank) {
    const double q = 2.0 * rank - 1.0;
    std::vector<Complex> g(f.size() + 1, Complex(0));
    if (f.size() > 1) g[0] = 2.0 * rank * f[1];
    for (std::size_t k = 1; k < g.size(); ++k) {
        Complex v = f[k - 1];
        if (k + 1 < f.size()) v += q * f[k + 1];
        g[k] = v;
    }
    return g;
}

}  // namespace detail

/// b * f for radial b of small radius (the three-term recurrence is run
/// radius(b) times).
inline std::vector<Complex> radial_multiply(const RadialFunction& b, const std::vector<Complex>& f) {
    const int r = b.rank;
    const double q = 2.0 * r - 1.0;
    const std::size_t R = b.values.size() - 1;
    std::vector<Complex> out(f.size() + R, Complex(0));
    std::vector<Complex> prev, cur = f;
    for (std::size_t j = 0; j <= R; ++j) {
        if (j == 1) {
            prev = cur;
            cur = detail::sigma1_times(cur, r);
        } else if (j >= 2) {
            auto next = detail::sigma1_times(cur, r);
            const double c = j == 2 ? 2.0 * r : q;
            for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= c * prev[k];
            prev = std::move(cur);
            cur = std::move(next);
        }
        if (b.values[j] != Complex(0))
            for (std::size_t k = 0; k < cur.size(); ++k) out[k] += b.values[j] * cur[k];
    }
    while (out.size() > 1 && out.back() == Complex(0)) out.pop_back();
    return out;
}

namespace detail {

inline double log_sum_exp(const std::vector<double>& logs) {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : logs) m = std::max(m, v);
    if (!std::isfinite(m)) return m;
    double s = 0;
    for (double v : logs) s += std::exp(v - m);
    return m + std::log(s);
}

}  // namespace detail

/// log ‖f‖₁, log ‖f‖₂², and log of the Haagerup sum Σ_k (k+1)‖f|_{S_k}‖₂.
struct RadialLogNorms {
    double log_l1;
    double log_l2sq;
    double log_haagerup;
};

inline RadialLogNorms radial_log_norms(const RadialFunction& shape, const std::vector<Complex>& f) {
    std::vector<double> l1, l2, hg;
    for (std::size_t k = 0; k < f.size(); ++k) {
        double a = std::abs(f[k]);
        if (a == 0) continue;
        double ls = shape.log_sphere(k);
        l1.push_back(ls + std::log(a));
        l2.push_back(ls + 2.0 * std::log(a));
        hg.push_back(std::log(static_cast<double>(k + 1)) + 0.5 * ls + std::log(a));
    }
    return {detail::log_sum_exp(l1), detail::log_sum_exp(l2), detail::log_sum_exp(hg)};
}

inline AlgElement radial_to_element(const RadialFunction& f, GroupPtr group, std::size_t cap = kDefaultSupportCap) {
    auto ball = group->ball(f.values.size() - 1, cap);
    std::vector<AlgElement::Term> t;
    for (auto& g : ball.elements) {
        auto c = f.values[g.code.size()];
        if (c != Complex(0)) t.emplace_back(g, c);
    }
    return AlgElement::from_terms(std::move(group), std::move(t));
}

}  // namespace sgamma
