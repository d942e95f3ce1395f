#pragma once

// Seeded random elements and matrices for property checks.

#include <random>
#include <vector>

#include "spectral_gamma/algebra.hpp"
#include "spectral_gamma/groups.hpp"
#include "spectral_gamma/holocalc.hpp"

namespace sgamma {

using Rng = std::mt19937_64;

/// Product of a uniformly random number (0..radius) of random generators.
inline GroupElement random_group_element(const Group& g, Rng& rng, std::size_t radius) {
    const auto& gens = g.generators();
    std::uniform_int_distribution<std::size_t> len(0, radius), pick(0, gens.size() - 1);
    GroupElement e = g.identity();
    for (std::size_t i = len(rng); i > 0; --i) e = g.multiply(e, gens[pick(rng)]);
    return e;
}

struct ElementShape {
    std::size_t max_terms = 6;
    std::size_t radius = 3;
    bool gaussian_integers = false;  // small integer coefficients, exact in floating point
};

inline AlgElement random_element(const GroupPtr& g, Rng& rng, const ElementShape& shape = {}) {
    std::uniform_int_distribution<std::size_t> count(1, shape.max_terms);
    std::uniform_real_distribution<double> real(-1.0, 1.0);
    std::uniform_int_distribution<int> small(-3, 3);
    std::vector<AlgElement::Term> terms;
    for (std::size_t i = count(rng); i > 0; --i) {
        Complex c = shape.gaussian_integers ? Complex(small(rng), small(rng)) : Complex(real(rng), real(rng));
        terms.emplace_back(random_group_element(*g, rng, shape.radius), c);
    }
    auto a = AlgElement::from_terms(g, std::move(terms));
    if (a.is_zero()) return AlgElement::delta(g, g->identity());
    return a;
}

inline MatrixAlgElement random_matrix_element(const GroupPtr& g, Rng& rng, std::size_t n,
                                              const ElementShape& shape = {}) {
    MatrixAlgElement m(g, n);
    std::bernoulli_distribution zero(0.25);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!zero(rng)) m.set(i, j, random_element(g, rng, shape));
    return m;
}

inline Matrix random_complex_matrix(std::size_t n, Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(nd(rng), nd(rng));
    return m;
}

/// S·diag(d)·S⁻¹ with S = I + small random perturbation (well conditioned).
inline Matrix random_similar(const std::vector<Complex>& d, Rng& rng, double spread = 0.3) {
    const auto n = static_cast<Eigen::Index>(d.size());
    Matrix s = Matrix::Identity(n, n) + random_complex_matrix(d.size(), rng, spread / std::sqrt(static_cast<double>(n)));
    Matrix diag = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) diag(i, i) = d[static_cast<std::size_t>(i)];
    return s * diag * s.inverse();
}

}  // namespace sgamma
