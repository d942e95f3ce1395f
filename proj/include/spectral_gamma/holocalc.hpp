#pragma once

// Holomorphic functional calculus for square complex matrices:
// f(m) = (1/2πi) ∮ f(λ)(λ - m)^{-1} dλ over disjoint circles around the
// spectrum, evaluated with the trapezoid rule and LU-based resolvents.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "spectral_gamma/errors.hpp"
#include "spectral_gamma/parallel.hpp"
#include "spectral_gamma/region.hpp"

namespace sgamma {

using Matrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxMatrixSize = 512;

inline void check_matrix(const Matrix& m) {
    if (m.rows() != m.cols()) throw DomainError("matrix must be square");
    if (m.rows() == 0) throw DomainError("matrix must be nonempty");
    if (static_cast<std::size_t>(m.rows()) > kMaxMatrixSize)
        throw DomainError("matrix size " + std::to_string(m.rows()) + " exceeds " + std::to_string(kMaxMatrixSize));
    if (!m.allFinite()) throw DomainError("matrix has non-finite entries");
}

/// Eigenvalues with multiplicity, sorted by (re, im) for reproducible output.
inline std::vector<Complex> eigenvalues(const Matrix& m) {
    check_matrix(m);
    Eigen::ComplexEigenSolver<Matrix> es(m, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
    std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

/// Every eigenvalue lies in Ω at distance > margin from the primitive
/// boundaries. A negative margin selects the default 1e-6·(1+|λ|).
inline bool in_region(const Matrix& m, const Region& omega, double margin = -1) {
    for (auto z : eigenvalues(m)) {
        double mg = margin < 0 ? default_region_margin(z) : margin;
        if (!omega.contains_with_margin(z, mg)) return false;
    }
    return true;
}

/// Smallest max-distance pairing of two multisets (bottleneck matching).
inline double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) throw DomainError("multisets differ in size");
    const std::size_t n = a.size();
    if (n == 0) return 0;
    std::vector<double> cand;
    cand.reserve(n * n);
    for (auto x : a)
        for (auto y : b) cand.push_back(std::abs(x - y));
    std::sort(cand.begin(), cand.end());
    auto feasible = [&](double t) {
        std::vector<long> match(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<char> seen(n, 0);
            std::function<bool(std::size_t)> aug = [&](std::size_t u) {
                for (std::size_t v = 0; v < n; ++v) {
                    if (seen[v] || std::abs(a[u] - b[v]) > t) continue;
                    seen[v] = 1;
                    if (match[v] < 0 || aug(static_cast<std::size_t>(match[v]))) {
                        match[v] = static_cast<long>(u);
                        return true;
                    }
                }
                return false;
            };
            if (!aug(i)) return false;
        }
        return true;
    };
    std::size_t lo = 0, hi = cand.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (feasible(cand[mid])) hi = mid;
        else lo = mid + 1;
    }
    return cand[lo];
}

// ---------------------------------------------------------------------------
// Function library
// ---------------------------------------------------------------------------

enum class HoloKind { Identity, Polynomial, Exp, Log, Chi, Rational, Homotopy };

/// A closed library of functions with known analyticity domains.
struct HoloFunction {
    HoloKind kind = HoloKind::Identity;
    std::vector<Complex> num;  // ascending coefficients (Polynomial, Rational numerator)
    std::vector<Complex> den;  // ascending coefficients (Rational denominator)
    double t = 0;              // Homotopy parameter
    Complex scale = 1;         // overall factor, for linear combinations in tests

    static HoloFunction identity() { return {}; }
    static HoloFunction polynomial(std::vector<Complex> c) {
        HoloFunction f;
        f.kind = HoloKind::Polynomial;
        f.num = std::move(c);
        return f;
    }
    static HoloFunction exp() {
        HoloFunction f;
        f.kind = HoloKind::Exp;
        return f;
    }
    static HoloFunction log() {
        HoloFunction f;
        f.kind = HoloKind::Log;
        return f;
    }
    /// 0 on {Re < 1/2}, 1 on {Re > 1/2}
    static HoloFunction chi() {
        HoloFunction f;
        f.kind = HoloKind::Chi;
        return f;
    }
    static HoloFunction rational(std::vector<Complex> p, std::vector<Complex> q) {
        while (!q.empty() && q.back() == Complex(0)) q.pop_back();
        if (q.empty()) throw DomainError("rational function with zero denominator");
        HoloFunction f;
        f.kind = HoloKind::Rational;
        f.num = std::move(p);
        f.den = std::move(q);
        return f;
    }
    /// h_t = (1-t)·id + t·χ
    static HoloFunction homotopy(double t) {
        if (!(t >= 0 && t <= 1)) throw DomainError("homotopy parameter must lie in [0,1]");
        HoloFunction f;
        f.kind = HoloKind::Homotopy;
        f.t = t;
        return f;
    }

    HoloFunction scaled(Complex s) const {
        HoloFunction f = *this;
        f.scale *= s;
        return f;
    }

    std::string name() const {
        switch (kind) {
            case HoloKind::Identity: return "id";
            case HoloKind::Polynomial: return "poly";
            case HoloKind::Exp: return "exp";
            case HoloKind::Log: return "log";
            case HoloKind::Chi: return "chi";
            case HoloKind::Rational: return "rational";
            case HoloKind::Homotopy: return "homotopy";
        }
        return {};
    }

    static Complex horner(const std::vector<Complex>& c, Complex z) {
        Complex v = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
        return v;
    }

    Complex operator()(Complex z) const {
        Complex v;
        switch (kind) {
            case HoloKind::Identity: v = z; break;
            case HoloKind::Polynomial: v = horner(num, z); break;
            case HoloKind::Exp: v = std::exp(z); break;
            case HoloKind::Log: v = std::log(z); break;
            case HoloKind::Chi: v = z.real() > 0.5 ? 1.0 : 0.0; break;
            case HoloKind::Rational: v = horner(num, z) / horner(den, z); break;
            case HoloKind::Homotopy: v = (1.0 - t) * z + t * (z.real() > 0.5 ? 1.0 : 0.0); break;
        }
        return scale * v;
    }

    /// Roots of the denominator.
    std::vector<Complex> poles() const {
        if (kind != HoloKind::Rational || den.size() < 2) return {};
        const auto d = static_cast<Eigen::Index>(den.size() - 1);
        Matrix comp = Matrix::Zero(d, d);
        for (Eigen::Index i = 1; i < d; ++i) comp(i, i - 1) = 1;
        for (Eigen::Index i = 0; i < d; ++i) comp(i, d - 1) = -den[static_cast<std::size_t>(i)] / den.back();
        Eigen::ComplexEigenSolver<Matrix> es(comp, false);
        return {es.eigenvalues().data(), es.eigenvalues().data() + d};
    }

    /// Whether f is holomorphic on a neighbourhood of the closed disk.
    bool analytic_on_disk(Complex c, double r) const {
        switch (kind) {
            case HoloKind::Identity:
            case HoloKind::Polynomial:
            case HoloKind::Exp: return true;
            case HoloKind::Log: {
                double d = c.real() <= 0 ? std::abs(c.imag()) : std::abs(c);
                return d > r;
            }
            case HoloKind::Chi:
            case HoloKind::Homotopy: return std::abs(c.real() - 0.5) > r;
            case HoloKind::Rational:
                for (auto p : poles())
                    if (std::abs(p - c) <= r) return false;
                return true;
        }
        return false;
    }
};

// ---------------------------------------------------------------------------
// Contours
// ---------------------------------------------------------------------------

struct Circle {
    Complex center;
    double radius = 0;
    std::vector<std::size_t> members;  // indices into the eigenvalue list
};

struct Contour {
    std::vector<Circle> circles;
};

/// Disjoint circles around clusters of the targeted eigenvalues. Clusters
/// join eigenvalues closer than 1e-2·scale unless a region boundary separates
/// them; each circle stays inside Ω and away from every other eigenvalue.
inline Contour build_contour(const std::vector<Complex>& eigs, const Region& omega,
                             const std::vector<bool>& target = {}, double scale = 0) {
    if (eigs.empty()) throw DomainError("no eigenvalues to enclose");
    std::vector<bool> tgt = target.empty() ? std::vector<bool>(eigs.size(), true) : target;
    if (tgt.size() != eigs.size()) throw DomainError("target mask size mismatch");
    if (scale <= 0) {
        scale = 1;
        for (auto z : eigs) scale = std::max(scale, std::abs(z));
    }
    const double gap = 1e-2 * scale;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (!tgt[i]) continue;
        if (!omega.contains(eigs[i])) throw DomainError("targeted eigenvalue lies outside the region");
        if (omega.boundary_distance(eigs[i]) <= 1e-12 * (1 + std::abs(eigs[i])))
            throw NumericalError("eigenvalue within 1e-12 of a region boundary (geometric degeneracy)");
    }

    // single-linkage clustering of targeted eigenvalues
    const std::size_t n = eigs.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (tgt[i] && tgt[j] && std::abs(eigs[i] - eigs[j]) < gap && !omega.segment_crosses(eigs[i], eigs[j]))
                parent[find(i)] = find(j);

    Contour c;
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) {
        if (!tgt[i]) continue;
        auto r = find(i);
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            c.circles.push_back({});
            it = roots.end() - 1;
        }
        c.circles[static_cast<std::size_t>(it - roots.begin())].members.push_back(i);
    }
    std::vector<double> extent(c.circles.size(), 0);
    for (std::size_t k = 0; k < c.circles.size(); ++k) {
        auto& circ = c.circles[k];
        Complex sum = 0;
        for (auto i : circ.members) sum += eigs[i];
        circ.center = sum / static_cast<double>(circ.members.size());
        for (auto i : circ.members) extent[k] = std::max(extent[k], std::abs(eigs[i] - circ.center));
    }
    for (std::size_t k = 0; k < c.circles.size(); ++k) {
        auto& circ = c.circles[k];
        double room = omega.boundary_distance(circ.center) - extent[k];
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(circ.members.begin(), circ.members.end(), i) != circ.members.end()) continue;
            if (!tgt[i]) room = std::min(room, std::abs(eigs[i] - circ.center) - extent[k]);
        }
        for (std::size_t j = 0; j < c.circles.size(); ++j)
            if (j != k)
                room = std::min(room, 0.9 * (std::abs(c.circles[j].center - circ.center) - extent[k] - extent[j]));
        room = std::min(room, scale);
        if (!(room > 1e-12 * scale))
            throw NumericalError("cannot fit a contour circle around the eigenvalue cluster near (" +
                                 std::to_string(circ.center.real()) + "," + std::to_string(circ.center.imag()) + ")");
        circ.radius = extent[k] + 0.5 * room;
        if (!omega.contains(circ.center) || omega.segment_crosses(circ.center, circ.center + circ.radius))
            throw NumericalError("contour circle would leave the region");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct HoloOptions {
    std::size_t nodes = 256;
    bool adaptive = true;
    std::size_t max_nodes = 4096;
    double tol = 1e-10;
    double max_condition = 1e12;
};

struct HoloResult {
    Matrix value;
    std::size_t nodes = 0;   // per circle, final
    double last_change = 0;  // Frobenius difference of the last doubling
    bool converged = true;
};

namespace detail {

inline Matrix trapezoid(const HoloFunction& f, const Matrix& m, const Contour& c, std::size_t nodes,
                        double max_condition) {
    const auto n = m.rows();
    const Matrix id = Matrix::Identity(n, n);
    Matrix total = Matrix::Zero(n, n);
    for (const auto& circ : c.circles) {
        std::vector<Matrix> parts(nodes);
        parallel_for(nodes, [&](std::size_t j) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nodes);
            const Complex w = std::polar(1.0, th);
            const Complex lam = circ.center + circ.radius * w;
            Eigen::PartialPivLU<Matrix> lu(lam * id - m);
            const double rc = lu.rcond();
            if (!(rc > 0) || 1.0 / rc > max_condition)
                throw NumericalError("resolvent condition number exceeds " + std::to_string(max_condition));
            // dλ / (2πi) = r·w dθ / 2π, and dθ/2π = 1/nodes
            parts[j] = (f(lam) * circ.radius * w / static_cast<double>(nodes)) * lu.solve(id);
        });
        for (const auto& p : parts) total += p;
    }
    return total;
}

}  // namespace detail

/// f(m) on the given contour. With adaptive quadrature the node count doubles
/// until successive results differ by < tol·max(1, ‖result‖_F) or max_nodes
/// is reached.
inline HoloResult holo_calc(const HoloFunction& f, const Matrix& m, const Contour& contour, const HoloOptions& o = {}) {
    check_matrix(m);
    if (contour.circles.empty()) throw DomainError("empty contour");
    if (o.nodes < 4) throw DomainError("need at least 4 quadrature nodes");
    for (const auto& c : contour.circles)
        if (!f.analytic_on_disk(c.center, c.radius))
            throw DomainError(f.name() + " is not holomorphic on a contour disk (pole or branch cut inside)");
    HoloResult r;
    r.nodes = o.nodes;
    r.value = detail::trapezoid(f, m, contour, r.nodes, o.max_condition);
    if (!o.adaptive) return r;
    r.converged = false;
    while (r.nodes * 2 <= o.max_nodes) {
        Matrix next = detail::trapezoid(f, m, contour, r.nodes * 2, o.max_condition);
        r.last_change = (next - r.value).norm();
        r.nodes *= 2;
        r.value = std::move(next);
        if (r.last_change < o.tol * std::max(1.0, r.value.norm())) {
            r.converged = true;
            break;
        }
    }
    return r;
}

/// Contour around the whole spectrum of m within Ω, then f(m).
inline HoloResult holo_calc(const HoloFunction& f, const Matrix& m, const Region& omega, const HoloOptions& o = {}) {
    auto eigs = eigenvalues(m);
    double scale = std::max(1.0, m.norm());
    auto contour = build_contour(eigs, omega, {}, scale);
    for (auto& c : contour.circles) {
        double extent = 0;
        for (auto i : c.members) extent = std::max(extent, std::abs(eigs[i] - c.center));
        for (int shrink = 0; shrink < 60 && !f.analytic_on_disk(c.center, c.radius); ++shrink)
            c.radius = extent + 0.5 * (c.radius - extent);
    }
    return holo_calc(f, m, contour, o);
}

/// h_t(m) for the deformation (1-t)·id + t·χ on Ω₀ = C ∖ {Re = 1/2}.
inline Matrix homotopy_deformation_probe(const Matrix& m, double t, const HoloOptions& o = {}) {
    const Region omega = Region::omega0();
    if (!in_region(m, omega)) throw DomainError("matrix spectrum must avoid Re = 1/2");
    return holo_calc(HoloFunction::homotopy(t), m, omega, o).value;
}

}  // namespace sgamma
