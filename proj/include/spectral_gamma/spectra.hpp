#pragma once

// Estimators for the ℓ¹ spectral radius and the reduced C*-norm of elements
// of CΓ, with certified lower and upper bounds.
//
// Lower bounds for r_{ℓ¹}(a): characters of the abelianization, exactness of
// ‖a‖₁ when supp a freely generates a semigroup, and (for normal a) any lower
// bound for the reduced norm. Upper bounds: the Gelfand terms ‖a^n‖₁^{1/n}.
//
// Lower bounds for ‖a‖ in C*_rΓ: trace moments τ((a*a)^n)^{1/2n}. Upper
// bounds: ‖a‖₁, ‖(a*a)^n‖₁^{1/2n}, Haagerup's inequality on free groups, and
// Fourier sups when a lives on an abelian group or a*a on a cyclic subgroup.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "spectral_gamma/algebra.hpp"
#include "spectral_gamma/fourier.hpp"
#include "spectral_gamma/powers.hpp"
#include "spectral_gamma/radial.hpp"

namespace sgamma {

struct SpectralEstimate {
    double value = 0;
    double lower = 0;
    double upper = 0;
    std::vector<std::pair<std::size_t, double>> trace;
    std::size_t n_max = 1;
    // Certified upper bounds per moment; empty when only `upper` is known.
    std::vector<std::pair<std::size_t, double>> upper_trace;
    std::string method;

    bool contains(double x, double rel = 1e-12) const {
        return lower <= x * (1 + rel) + rel && x <= upper * (1 + rel) + rel;
    }
    double width() const { return upper - lower; }
};

struct EstimatorOptions {
    std::size_t n_max = 1024;
    double truncation = kDefaultTruncation;
    std::size_t support_cap = kDefaultSupportCap;
    bool use_certificates = true;
    std::size_t fourier_grid = 0;  // 0 picks a grid from the lattice dimension
    double tol = 0.05;
    std::optional<double> reduced_norm_lower;  // only used for normal elements
    // Stop squaring once |supp|² would exceed this; 0 picks 1e7 on abelian
    // groups (where the Fourier oracle certifies) and 1e9 elsewhere.
    double work_budget = 0;
};

inline double effective_work_budget(const EstimatorOptions& o, const Group& g) {
    if (o.work_budget > 0) return o.work_budget;
    return g.is_abelian() ? 1e7 : 1e9;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline void check_estimator_input(const AlgElement& a, const EstimatorOptions& o) {
    if (a.is_zero()) throw DomainError("spectral estimate of the zero element");
    if (o.n_max < 2 || !is_power_of_two(o.n_max))
        throw DomainError("n_max must be a power of two >= 2, got " + std::to_string(o.n_max));
}

/// a*a == aa* up to rounding.
inline bool is_normal(const AlgElement& a) {
    auto s = a.involution();
    auto d = convolve(s, a) - convolve(a, s);
    return d.l1() <= 1e-12 * a.l1() * a.l1();
}

// ---------------------------------------------------------------------------
// Free semigroup certificate
// ---------------------------------------------------------------------------

namespace detail {

using Letters = std::vector<std::int32_t>;

// Sardinas–Patterson: is the finite set of nonempty words a code?
inline bool is_code(const std::vector<Letters>& words) {
    std::set<Letters> code(words.begin(), words.end());
    if (code.size() != words.size()) return false;
    if (code.count(Letters{})) return false;
    auto dangling = [](const std::set<Letters>& a, const std::set<Letters>& b) {
        std::set<Letters> out;
        for (const auto& u : a)
            for (const auto& v : b)
                if (v.size() > u.size() && std::equal(u.begin(), u.end(), v.begin()))
                    out.insert(Letters(v.begin() + static_cast<std::ptrdiff_t>(u.size()), v.end()));
        return out;
    };
    std::set<Letters> current;
    for (const auto& u : code)
        for (const auto& v : code)
            if (u != v && v.size() > u.size() && std::equal(u.begin(), u.end(), v.begin()))
                current.insert(Letters(v.begin() + static_cast<std::ptrdiff_t>(u.size()), v.end()));
    std::set<std::set<Letters>> history;
    while (!current.empty()) {
        for (const auto& w : current)
            if (code.count(w)) return false;
        if (!history.insert(current).second) return true;
        auto next = dangling(code, current);
        auto more = dangling(current, code);
        next.insert(more.begin(), more.end());
        current = std::move(next);
    }
    return true;
}

}  // namespace detail

/// True when supp a provably generates a free semigroup, so that
/// ‖a^n‖₁ = ‖a‖₁^n for every n. Covers single-term elements and free-group
/// supports in which each generator occurs with one sign only (the words then
/// multiply without cancellation, and freeness is the code property).
inline bool free_semigroup_certificate(const AlgElement& a) {
    if (a.size() == 1) return true;
    if (a.group().kind() != GroupKind::FreeGroup) return false;
    std::map<std::int32_t, int> sign;
    for (const auto& [g, c] : a.terms()) {
        if (g.code.empty()) return false;
        for (auto l : g.code) {
            int s = l > 0 ? 1 : -1;
            auto [it, fresh] = sign.emplace(std::abs(l), s);
            if (!fresh && it->second != s) return false;
        }
    }
    std::vector<detail::Letters> words;
    for (const auto& [g, c] : a.terms()) words.emplace_back(g.code.begin(), g.code.end());
    return detail::is_code(words);
}

/// Exact check of ‖a^n‖₁ = ‖a‖₁^n for n = 1..N. Equality fails exactly when
/// two contributions to one coefficient of a^n are not positively collinear;
/// collinearity is tested in exact Gaussian-rational arithmetic.
inline bool free_semigroup_l1_probe(const AlgElement& a, std::size_t max_n,
                                    std::size_t support_cap = 1'000'000) {
    if (max_n > 12) throw DomainError("free semigroup probe supports N <= 12");
    if (a.is_zero()) throw DomainError("free semigroup probe of the zero element");
    const ExactElement ea = to_exact(a);
    const Group& G = a.group();
    ExactElement cur = ea;
    auto collinear = [](const GaussianRational& z, const GaussianRational& w) {
        auto p = z * w.conj();
        return p.im == 0 && p.re > 0;
    };
    for (std::size_t n = 2; n <= max_n; ++n) {
        std::unordered_map<GroupElement, std::pair<GaussianRational, GaussianRational>, GroupElementHash> acc;
        for (const auto& [h, x] : cur.terms()) {
            for (const auto& [u, y] : ea.terms()) {
                auto contrib = x * y;
                auto key = G.multiply(h, u);
                auto it = acc.find(key);
                if (it == acc.end()) {
                    acc.emplace(std::move(key), std::make_pair(contrib, contrib));
                } else {
                    if (!collinear(it->second.first, contrib)) return false;
                    it->second.second += contrib;
                }
            }
            if (acc.size() > support_cap)
                throw ResourceError("free semigroup probe support exceeds cap " + std::to_string(support_cap) +
                                    " at n = " + std::to_string(n));
        }
        std::vector<ExactElement::Term> terms;
        terms.reserve(acc.size());
        for (auto& kv : acc) terms.emplace_back(kv.first, std::move(kv.second.second));
        cur = ExactElement::from_terms(a.group_ptr(), std::move(terms));
    }
    return true;
}

// ---------------------------------------------------------------------------
// Cyclic subgroup transfer on free groups
// ---------------------------------------------------------------------------

namespace detail {

struct Root {
    Code conj;  // p in w = p c p^-1
    Code base;  // primitive cyclically reduced r with c = r^k
    long power = 0;
};

inline Root free_root(const Code& w) {
    std::size_t i = 0, j = w.size();
    while (j - i >= 2 && w[i] == -w[j - 1]) {
        ++i;
        --j;
    }
    Root r;
    r.conj.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
    Code c(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
    const std::size_t n = c.size();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        bool periodic = true;
        for (std::size_t k = d; k < n && periodic; ++k) periodic = c[k] == c[k - d];
        if (periodic) {
            r.base.assign(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(d));
            r.power = static_cast<long>(n / d);
            break;
        }
    }
    return r;
}

inline Code invert_word(const Code& w) {
    Code r;
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(-*it);
    return r;
}

}  // namespace detail

/// If supp b lies in a cyclic subgroup <h> of a free group, returns the
/// pushed-forward element of CZ (h^k ↦ k). The embedding CZ → CF_r is an
/// isometry for ℓ¹, ℓ², τ and the reduced C*-norm.
inline std::optional<AlgElement> cyclic_transfer(const AlgElement& b) {
    if (b.group().kind() != GroupKind::FreeGroup) return std::nullopt;
    std::optional<detail::Root> gen;
    std::vector<std::pair<long, Complex>> out;
    for (const auto& [g, c] : b.terms()) {
        if (g.code.empty()) {
            out.emplace_back(0, c);
            continue;
        }
        auto r = detail::free_root(g.code);
        if (!gen) gen = detail::Root{r.conj, r.base, 1};
        if (r.conj != gen->conj) return std::nullopt;
        if (r.base == gen->base) out.emplace_back(r.power, c);
        else if (r.base == detail::invert_word(gen->base)) out.emplace_back(-r.power, c);
        else return std::nullopt;
    }
    auto z = make_group(GroupSpec::lattice(1));
    std::vector<AlgElement::Term> terms;
    for (auto& [k, c] : out) terms.emplace_back(GroupElement{Code{static_cast<std::int32_t>(k)}}, c);
    return AlgElement::from_terms(z, std::move(terms));
}

// ---------------------------------------------------------------------------
// Fourier oracles
// ---------------------------------------------------------------------------

inline SpectralEstimate fourier_estimate(const AbelianElement& ab, std::size_t grid, const std::string& label) {
    auto fb = fourier_sup(ab, grid);
    SpectralEstimate e;
    e.value = fb.lower;
    e.lower = fb.lower;
    e.upper = fb.upper * (1 + 1e-12);  // floating-point slack on the sampled sum
    e.trace = {{grid, fb.lower}};
    e.n_max = grid;
    e.method = label;
    return e;
}

/// ‖a‖ in C*_r(Z^d) as the sup of |â| over the torus, sampled on grid^d points.
inline SpectralEstimate fourier_opnorm_lattice(const AlgElement& a, std::size_t grid) {
    if (a.group().kind() != GroupKind::IntegerLattice)
        throw StructuralError("lattice Fourier oracle needs an integer lattice, got " + a.group().spec().to_string());
    return fourier_estimate(abelianize(a), grid, "fourier-lattice");
}

/// Same oracle for any abelian model (lattices, cyclic groups, products).
inline SpectralEstimate fourier_opnorm_abelian(const AlgElement& a, std::size_t grid = 0) {
    if (!a.group().is_abelian())
        throw CapabilityError("Fourier oracle needs an abelian group, got " + a.group().spec().to_string());
    auto ab = abelianize(a);
    if (grid == 0) grid = default_fourier_grid(ab.lattice_dims());
    return fourier_estimate(ab, grid, "fourier-abelian");
}

/// max over characters of the abelianization of |χ(a)|, a lower bound for
/// r_{ℓ¹Γ}(a). Falls back to the trivial character when the dual is too big.
inline double character_lower_bound(const AlgElement& a) {
    auto ab = abelianize(a);
    Complex total = 0;
    for (const auto& t : ab.terms) total += t.second;
    double best = std::abs(total);
    const std::size_t dims = ab.lattice_dims();
    std::size_t grid = 8;
    while (dims > 0) {
        double next = std::pow(static_cast<double>(grid * 2), static_cast<double>(dims));
        if (next > static_cast<double>(std::size_t{1} << 20) || grid >= 4096) break;
        grid *= 2;
    }
    try {
        best = std::max(best, fourier_sup(ab, grid).lower);
    } catch (const ResourceError&) {
    }
    return best * (1 - 1e-12);
}

// ---------------------------------------------------------------------------
// ℓ¹ spectral radius
// ---------------------------------------------------------------------------

/// Gelfand limit of ‖a^n‖₁^{1/n} along n = 2^m. The trace is non-increasing
/// and each term is an upper bound.
inline SpectralEstimate l1_spectral_radius(const AlgElement& a, const EstimatorOptions& o = {}) {
    check_estimator_input(a, o);
    const double norm1 = a.l1();
    SpectralEstimate e;
    e.n_max = o.n_max;

    double lower = character_lower_bound(a);
    std::string lower_src = "characters";
    if (o.use_certificates && free_semigroup_certificate(a)) {
        lower = std::max(lower, norm1);
        lower_src = "free-semigroup";
    }
    if (o.reduced_norm_lower && *o.reduced_norm_lower > lower && is_normal(a)) {
        lower = *o.reduced_norm_lower;
        lower_src = "reduced-norm";
    }

    if (o.use_certificates && lower >= norm1 * (1 - 1e-12)) {
        // ‖a^n‖₁^{1/n} is squeezed between lower and ‖a‖₁ for every n.
        for (std::size_t n = 1; n <= o.n_max; n *= 2) e.trace.emplace_back(n, norm1);
        e.value = e.upper = norm1;
        e.lower = std::min(lower, norm1);
        e.method = "closed-form(" + lower_src + ")";
        return e;
    }

    if (auto radial = as_radial(a)) {
        RadialFunction shape = *radial;
        std::vector<Complex> f = shape.values;
        double log_scale = 0;
        for (std::size_t n = 1; n <= o.n_max; ++n) {
            if (n > 1) f = radial_multiply(shape, f);
            double m = 0;
            for (auto& v : f) m = std::max(m, std::abs(v));
            for (auto& v : f) v /= m;
            log_scale += std::log(m);
            if (is_power_of_two(n)) {
                auto ln = radial_log_norms(shape, f);
                e.trace.emplace_back(n, std::exp((log_scale + ln.log_l1) / static_cast<double>(n)));
            }
        }
        e.method = "radial";
    } else {
        ScaledPower p = scaled_start(a);
        e.trace.emplace_back(1, norm1);
        e.method = "repeated-squaring";
        const double budget = effective_work_budget(o, a.group());
        for (std::size_t n = 2; n <= o.n_max; n *= 2) {
            if (static_cast<double>(p.t.size()) * static_cast<double>(p.t.size()) > budget) {
                e.method += "(work budget reached at n=" + std::to_string(n / 2) + ")";
                break;
            }
            p = scaled_square(p, o.truncation, o.support_cap);
            e.trace.emplace_back(n, std::exp(p.log_l1_upper() / static_cast<double>(n)));
        }
        e.n_max = e.trace.back().first;
    }
    double upper = norm1;
    for (const auto& t : e.trace) upper = std::min(upper, t.second);
    if (a.group().is_abelian()) {
        // Gelfand theory: r(a) is the sup of |â| over the dual group
        try {
            auto f = fourier_opnorm_abelian(a, o.fourier_grid);
            if (f.lower > lower) {
                lower = f.lower;
                lower_src = "fourier-abelian";
            }
            upper = std::min(upper, f.upper);
        } catch (const ResourceError&) {
        }
    }
    if (lower > upper * (1 + 1e-9)) throw std::logic_error("l1 radius: certified lower bound exceeds upper bound");
    e.upper = e.value = upper;
    e.lower = std::min(lower, upper);
    e.method += "; lower=" + lower_src;
    return e;
}

// ---------------------------------------------------------------------------
// Reduced C*-norm via trace moments
// ---------------------------------------------------------------------------

namespace detail {

// Haagerup: ‖f‖ <= Σ_k (k+1) ‖f restricted to words of length k‖₂ on free groups.
inline double haagerup_sum(const AlgElement& f) {
    std::map<std::size_t, double> shell;
    for (const auto& [g, c] : f.terms()) shell[g.code.size()] += std::norm(c);
    double s = 0;
    for (const auto& [k, v] : shell) s += static_cast<double>(k + 1) * std::sqrt(v);
    return s;
}

struct MomentRun {
    std::vector<std::pair<std::size_t, double>> lower;  // (n, τ(b^n)^{1/2n})
    std::vector<std::pair<std::size_t, double>> upper;  // (n, certified upper for ‖a‖)
    std::string route;
};

inline MomentRun radial_moments(const RadialFunction& b, std::size_t n_max) {
    MomentRun run;
    run.route = "radial";
    std::vector<Complex> f = b.values;
    double log_scale = 0;
    for (std::size_t k = 1; 2 * k <= n_max; ++k) {
        if (k > 1) f = radial_multiply(b, f);
        double m = 0;
        for (auto& v : f) m = std::max(m, std::abs(v));
        for (auto& v : f) v /= m;
        log_scale += std::log(m);
        if (!is_power_of_two(k)) continue;
        auto ln = radial_log_norms(b, f);
        const double two_k = 2.0 * static_cast<double>(k);
        run.lower.emplace_back(2 * k, std::exp((log_scale + 0.5 * ln.log_l2sq) / two_k));
        double up = std::min(ln.log_l1, ln.log_haagerup);
        run.upper.emplace_back(2 * k, std::exp((log_scale + up) / two_k));
    }
    return run;
}

inline MomentRun squaring_moments(const AlgElement& b, const EstimatorOptions& o, bool haagerup) {
    MomentRun run;
    run.route = "repeated-squaring";
    ScaledPower p = scaled_start(b);
    for (std::size_t k = 1; 2 * k <= o.n_max; k *= 2) {
        if (k > 1) {
            const double work = static_cast<double>(p.t.size()) * static_cast<double>(p.t.size());
            if (work > effective_work_budget(o, b.group())) break;
            p = scaled_square(p, o.truncation, o.support_cap);
        }
        const double two_k = 2.0 * static_cast<double>(k);
        // τ(b^{2k}) = ‖b^k‖₂² since b is self-adjoint
        double lo = p.log_l2_lower();
        run.lower.emplace_back(2 * k, std::isfinite(lo) ? std::exp(lo / two_k) : 0.0);
        double up = p.log_l1_upper();
        if (haagerup) up = std::min(up, p.log_scale + std::log(haagerup_sum(p.t) + p.err));
        run.upper.emplace_back(2 * k, std::exp(up / two_k));
    }
    return run;
}

}  // namespace detail

/// Trace-moment estimate of ‖a‖ in C*_rΓ. The estimates are lower bounds;
/// the upper bound is the best of ‖a‖₁ and the certified moment bounds.
inline SpectralEstimate reduced_norm_trace(const AlgElement& a, const EstimatorOptions& o = {}) {
    check_estimator_input(a, o);
    const AlgElement b = convolve(a.involution(), a, o.support_cap);
    SpectralEstimate e;
    e.n_max = o.n_max;
    e.trace.emplace_back(1, a.l2());

    detail::MomentRun run;
    const bool free = a.group().kind() == GroupKind::FreeGroup;
    if (auto rb = free ? as_radial(b) : std::nullopt) {
        run = detail::radial_moments(*rb, o.n_max);
    } else if (auto zb = free ? cyclic_transfer(b) : std::nullopt) {
        run = detail::squaring_moments(*zb, o, false);
        run.route = "cyclic-subgroup";
    } else {
        run = detail::squaring_moments(b, o, free);
    }
    e.trace.insert(e.trace.end(), run.lower.begin(), run.lower.end());
    e.upper_trace = run.upper;
    e.n_max = e.trace.back().first;

    double lower = 0;
    for (const auto& t : e.trace) lower = std::max(lower, t.second);
    double upper = a.l1();
    for (const auto& t : run.upper) upper = std::min(upper, t.second);
    if (lower > upper * (1 + 1e-9)) throw std::logic_error("reduced norm: trace lower bound exceeds upper bound");
    e.lower = e.value = std::min(lower, upper);
    e.upper = upper;
    e.method = "trace-moments(" + run.route + ")";
    return e;
}

/// Best certified interval for ‖a‖ in C*_rΓ: trace moments, plus Fourier sups
/// where the group (or the cyclic subgroup carrying a*a) is abelian.
inline SpectralEstimate reduced_norm_bounds(const AlgElement& a, const EstimatorOptions& o = {}) {
    SpectralEstimate e = reduced_norm_trace(a, o);
    std::optional<SpectralEstimate> f;
    if (a.group().is_abelian()) {
        try {
            f = fourier_opnorm_abelian(a, o.fourier_grid);
        } catch (const ResourceError&) {
        }
    } else if (a.group().kind() == GroupKind::FreeGroup) {
        auto b = convolve(a.involution(), a, o.support_cap);
        if (auto zb = cyclic_transfer(b)) {
            auto fb = fourier_opnorm_abelian(*zb, o.fourier_grid);
            fb.lower = std::sqrt(fb.lower);
            fb.upper = std::sqrt(fb.upper);
            fb.value = fb.lower;
            fb.method = "fourier-cyclic-subgroup(a*a)";
            f = fb;
        }
    }
    if (f) {
        if (f->lower > e.upper * (1 + 1e-9) || e.lower > f->upper * (1 + 1e-9))
            throw std::logic_error("reduced norm: Fourier and trace intervals are disjoint");
        e.lower = std::max(e.lower, f->lower);
        e.upper = std::min(e.upper, f->upper);
        e.value = std::max(e.lower, f->value);
        e.method += " + " + f->method;
    }
    e.lower = std::min(e.lower, e.upper);
    e.value = std::clamp(e.value, e.lower, e.upper);
    return e;
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

enum class Sigma1Outcome { Consistent, ViolationWitness, Inconclusive };

inline const char* to_string(Sigma1Outcome v) {
    switch (v) {
        case Sigma1Outcome::Consistent: return "consistent-with-sigma1";
        case Sigma1Outcome::ViolationWitness: return "violation-witness";
        case Sigma1Outcome::Inconclusive: return "inconclusive";
    }
    return "";
}

struct Sigma1Verdict {
    std::string element_id;
    SpectralEstimate r_l1;
    SpectralEstimate opnorm;
    Sigma1Outcome verdict = Sigma1Outcome::Inconclusive;
    double margin = 0;  // r_l1.lower - opnorm.upper; positive means a certified gap
};

/// Tests r_{ℓ¹}(a) <= ‖a‖. A violation is reported only when the certified
/// intervals are disjoint with the ℓ¹ radius above.
inline Sigma1Verdict sigma1_verdict(const AlgElement& a, const EstimatorOptions& o = {}, std::string id = {}) {
    Sigma1Verdict v;
    v.element_id = std::move(id);
    v.opnorm = reduced_norm_bounds(a, o);
    EstimatorOptions lo = o;
    lo.reduced_norm_lower = v.opnorm.lower;
    v.r_l1 = l1_spectral_radius(a, lo);
    v.margin = v.r_l1.lower - v.opnorm.upper;
    if (v.r_l1.lower > v.opnorm.upper * (1 + 1e-12)) v.verdict = Sigma1Outcome::ViolationWitness;
    else if (v.r_l1.upper <= v.opnorm.lower * (1 + o.tol)) v.verdict = Sigma1Outcome::Consistent;
    else v.verdict = Sigma1Outcome::Inconclusive;
    return v;
}

struct KestenReport {
    SpectralEstimate radius;
    std::size_t card = 0;
    bool amenable_consistent = false;
};

/// Kesten: Γ is amenable iff ‖χ_S‖ = #S for a symmetric generating set S.
/// Reports whether the certified interval for ‖χ_S‖ contains #S.
inline KestenReport kesten_check(const std::vector<GroupElement>& s, GroupPtr group, const EstimatorOptions& o = {}) {
    if (s.empty()) throw DomainError("Kesten check needs a nonempty set");
    std::set<GroupElement> set(s.begin(), s.end());
    for (const auto& g : set)
        if (!set.count(group->inverse(g)))
            throw DomainError("Kesten check needs a symmetric set; missing inverse of " + group->format(g));
    KestenReport r;
    auto chi = indicator(s, group);
    r.card = set.size();
    r.radius = reduced_norm_bounds(chi, o);
    r.amenable_consistent = r.radius.contains(static_cast<double>(r.card));
    return r;
}

struct SandwichReport {
    SpectralEstimate plain;     // ‖a^n‖₁^{1/n}
    SpectralEstimate sandwich;  // (sqrt(vol B(nR)) ‖a^n‖₂)^{1/n}
    std::vector<std::pair<std::size_t, double>> growth_factor;  // vol B(nR)^{1/2n}
};

/// Plain Gelfand trace next to the growth-sandwich trace; on groups of
/// subexponential growth both converge to the same radius.
inline SandwichReport subexp_sandwich_radius(const AlgElement& a, const EstimatorOptions& o = {}) {
    check_estimator_input(a, o);
    const Group& G = a.group();
    if (G.has_exponential_growth())
        throw DomainError("growth sandwich needs subexponential growth; " + G.spec().to_string() + " grows exponentially");
    const std::size_t R = circumscribing_radius(a.support(), G);
    SandwichReport rep;
    const double lower = character_lower_bound(a);
    ScaledPower p = scaled_start(a);
    for (std::size_t n = 1; n <= o.n_max; n *= 2) {
        if (n > 1) p = scaled_square(p, o.truncation, o.support_cap);
        const double dn = static_cast<double>(n);
        const double log_vol = std::log(static_cast<double>(G.ball_volume(n * R)));
        rep.growth_factor.emplace_back(n, std::exp(log_vol / (2.0 * dn)));
        rep.plain.trace.emplace_back(n, std::exp(p.log_l1_upper() / dn));
        rep.sandwich.trace.emplace_back(n, std::exp((0.5 * log_vol + p.log_l2_upper()) / dn));
    }
    for (auto* est : {&rep.plain, &rep.sandwich}) {
        est->n_max = o.n_max;
        est->upper = est->trace.back().second;
        for (const auto& t : est->trace) est->upper = std::min(est->upper, t.second);
        est->value = est->trace.back().second;
        est->lower = std::min(lower, est->upper);
    }
    rep.plain.method = "gelfand";
    rep.sandwich.method = "growth-sandwich";
    return rep;
}

}  // namespace sgamma
