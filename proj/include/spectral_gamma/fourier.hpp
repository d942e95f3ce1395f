#pragma once

// Fourier side of abelian groups. An element of a lattice, cyclic group or a
// product of these is a trigonometric polynomial on the dual group; its norm
// in the reduced C*-algebra is the sup of the modulus of that polynomial.
// Also used for abelianizations (characters give lower bounds for spectral
// radii in ℓ¹Γ).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "spectral_gamma/algebra.hpp"
#include "spectral_gamma/errors.hpp"
#include "spectral_gamma/groups.hpp"

namespace sgamma {

/// Element of Z^a × Z_{n_1} × ... written in integer coordinates. orders[i] is
/// 0 for an infinite cyclic coordinate and n for Z_n.
struct AbelianElement {
    std::vector<int> orders;
    std::vector<std::pair<std::vector<long>, Complex>> terms;

    std::size_t lattice_dims() const {
        return static_cast<std::size_t>(std::count(orders.begin(), orders.end(), 0));
    }
};

namespace detail {

inline void abelian_orders(const Group& g, std::vector<int>& out) {
    switch (g.kind()) {
        case GroupKind::IntegerLattice: out.insert(out.end(), static_cast<std::size_t>(g.spec().param), 0); break;
        case GroupKind::Cyclic: out.push_back(g.spec().param); break;
        case GroupKind::FreeGroup: out.insert(out.end(), static_cast<std::size_t>(g.spec().param), 0); break;
        case GroupKind::Heisenberg3: out.insert(out.end(), 2, 0); break;
        case GroupKind::DirectProduct:
            for (const auto& f : g.factors()) abelian_orders(*f, out);
            break;
    }
}

// Image of g under the abelianization map, appended to out.
inline void abelian_image(const Group& grp, const GroupElement& g, std::vector<long>& out) {
    switch (grp.kind()) {
        case GroupKind::IntegerLattice:
        case GroupKind::Cyclic:
            for (auto v : g.code) out.push_back(v);
            break;
        case GroupKind::FreeGroup: {
            std::size_t base = out.size();
            out.insert(out.end(), static_cast<std::size_t>(grp.spec().param), 0);
            for (auto l : g.code) out[base + static_cast<std::size_t>(std::abs(l) - 1)] += l > 0 ? 1 : -1;
            break;
        }
        case GroupKind::Heisenberg3:
            out.push_back(g.code[0]);
            out.push_back(g.code[1]);
            break;
        case GroupKind::DirectProduct: {
            auto parts = grp.split(g);
            for (std::size_t i = 0; i < parts.size(); ++i) abelian_image(*grp.factors()[i], parts[i], out);
            break;
        }
    }
}

}  // namespace detail

/// Pushes a forward along Γ → Γ/[Γ,Γ]. For abelian Γ this is a change of
/// coordinates; otherwise it is a contractive homomorphism of ℓ¹ algebras.
inline AbelianElement abelianize(const AlgElement& a) {
    AbelianElement out;
    detail::abelian_orders(a.group(), out.orders);
    std::vector<std::pair<std::vector<long>, Complex>> raw;
    for (const auto& [g, c] : a.terms()) {
        std::vector<long> key;
        detail::abelian_image(a.group(), g, key);
        raw.emplace_back(std::move(key), c);
    }
    std::stable_sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& t : raw) {
        if (!out.terms.empty() && out.terms.back().first == t.first) out.terms.back().second += t.second;
        else out.terms.push_back(std::move(t));
    }
    return out;
}

/// Sampled sup of |â| over the dual group. `lower` is attained by a character
/// and so is exact as a lower bound; `upper` adds the slack that a grid of
/// spacing h = 2π/grid can hide.
struct FourierBounds {
    double lower = 0;
    double upper = 0;
    double lipschitz = 0;  // Σ|a_g| |g|₁ over lattice coordinates
    std::size_t samples = 0;
};

inline constexpr std::size_t kFourierSampleCap = std::size_t{1} << 26;

inline FourierBounds fourier_sup(const AbelianElement& a, std::size_t grid) {
    if (grid < 8) throw DomainError("Fourier grid must be >= 8");
    FourierBounds fb;
    const std::size_t dims = a.orders.size();
    std::vector<std::size_t> extent(dims);
    std::size_t total = 1;
    for (std::size_t k = 0; k < dims; ++k) {
        extent[k] = a.orders[k] == 0 ? grid : static_cast<std::size_t>(a.orders[k]);
        if (total > kFourierSampleCap / extent[k])
            throw ResourceError("Fourier sampling needs more than " + std::to_string(kFourierSampleCap) + " points");
        total *= extent[k];
    }
    fb.samples = total;
    if (a.terms.empty()) return fb;

    // phase[t][k][j] = exp(i * g_k * θ_j) for term t, coordinate k, sample j
    const std::size_t nt = a.terms.size();
    std::vector<std::vector<std::vector<Complex>>> phase(nt, std::vector<std::vector<Complex>>(dims));
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t k = 0; k < dims; ++k) {
            phase[t][k].resize(extent[k]);
            const double step = 2.0 * std::numbers::pi / static_cast<double>(extent[k]);
            const long gk = a.terms[t].first[k];
            for (std::size_t j = 0; j < extent[k]; ++j) {
                // reduce the angle exactly in integers before scaling
                long m = static_cast<long>((static_cast<long long>(gk) * static_cast<long long>(j)) %
                                           static_cast<long long>(extent[k]));
                double ang = step * static_cast<double>(m);
                phase[t][k][j] = {std::cos(ang), std::sin(ang)};
            }
        }

    std::vector<std::size_t> idx(dims, 0);
    double best2 = 0;
    for (std::size_t s = 0; s < total; ++s) {
        Complex v = 0;
        for (std::size_t t = 0; t < nt; ++t) {
            Complex p = a.terms[t].second;
            for (std::size_t k = 0; k < dims; ++k) p *= phase[t][k][idx[k]];
            v += p;
        }
        best2 = std::max(best2, std::norm(v));
        for (std::size_t k = 0; k < dims; ++k) {
            if (++idx[k] < extent[k]) break;
            idx[k] = 0;
        }
    }
    fb.lower = std::sqrt(best2);

    // First-order slack L·h and second-order slack on |â|² at the maximizer,
    // where the gradient vanishes: p* <= p_s + M2 (h/2)² / 2.
    double l1 = 0, lip = 0, second = 0;
    auto lattice_norm = [&](const std::vector<long>& g) {
        double s = 0;
        for (std::size_t k = 0; k < dims; ++k)
            if (a.orders[k] == 0) s += std::abs(static_cast<double>(g[k]));
        return s;
    };
    for (const auto& [g, c] : a.terms) {
        l1 += std::abs(c);
        lip += std::abs(c) * lattice_norm(g);
        second += std::abs(c) * lattice_norm(g) * lattice_norm(g);
    }
    double m2 = 0;
    if (nt <= 4096) {
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t j = 0; j < nt; ++j) {
                double d = 0;
                for (std::size_t k = 0; k < dims; ++k)
                    if (a.orders[k] == 0)
                        d += std::abs(static_cast<double>(a.terms[i].first[k] - a.terms[j].first[k]));
                m2 += std::abs(a.terms[i].second) * std::abs(a.terms[j].second) * d * d;
            }
    } else {
        m2 = 4.0 * l1 * second;  // |g-h|² <= 2|g|² + 2|h|²
    }
    fb.lipschitz = lip;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(grid);
    double upper_first = fb.lower + lip * h;
    double upper_second = std::sqrt(best2 + m2 * h * h / 8.0);
    fb.upper = std::min(upper_first, upper_second);
    // rounding in the sampled values
    fb.upper *= 1.0 + 1e-13;
    return fb;
}

/// Default per-axis grid so that the total sample count stays moderate.
inline std::size_t default_fourier_grid(std::size_t lattice_dims) {
    switch (lattice_dims) {
        case 0:
        case 1: return 4096;
        case 2: return 1024;
        case 3: return 128;
        default: return 32;
    }
}

}  // namespace sgamma
