#pragma once

// Weights on finite subsets of a group and the norm-control inequality
// ‖a‖_B <= C·ω(supp a)·‖a‖_A, for elements and for matrices over CΓ.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "spectral_gamma/algebra.hpp"
#include "spectral_gamma/errors.hpp"
#include "spectral_gamma/groups.hpp"
#include "spectral_gamma/parallel.hpp"
#include "spectral_gamma/spectra.hpp"

namespace sgamma {

enum class WeightKind { GrowthSqrt, Polynomial, Constant };

struct Weight {
    WeightKind kind = WeightKind::GrowthSqrt;
    double param = 0;  // s for Polynomial, c for Constant

    static Weight growth_sqrt() { return {WeightKind::GrowthSqrt, 0}; }
    static Weight polynomial(double s) {
        if (!(s >= 0)) throw DomainError("polynomial weight needs s >= 0");
        return {WeightKind::Polynomial, s};
    }
    static Weight constant(double c) {
        if (!(c >= 1)) throw DomainError("constant weight needs c >= 1");
        return {WeightKind::Constant, c};
    }

    std::string to_string() const {
        switch (kind) {
            case WeightKind::GrowthSqrt: return "growth-sqrt";
            case WeightKind::Polynomial: return "poly:" + format_param();
            case WeightKind::Constant: return "const:" + format_param();
        }
        return {};
    }

    /// "growth-sqrt", "poly:<s>", "const:<c>".
    static Weight parse(const std::string& text) {
        auto colon = text.find(':');
        std::string head = text.substr(0, colon);
        std::optional<double> arg;
        if (colon != std::string::npos) {
            try {
                std::size_t used = 0;
                arg = std::stod(text.substr(colon + 1), &used);
                if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("bad weight parameter in '" + text + "'");
            }
        }
        if (head == "growth-sqrt" || head == "growth" || head == "sqrt-vol") return growth_sqrt();
        if (head == "poly" || head == "polynomial") return polynomial(arg.value_or(1.0));
        if (head == "const" || head == "constant") return constant(arg.value_or(1.0));
        throw ParseError("unknown weight '" + text + "' (expected growth-sqrt, poly:<s> or const:<c>)");
    }

private:
    std::string format_param() const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", param);
        return buf;
    }
};

/// ω(S) for S with circumscribing radius R.
inline double weight_of_radius(const Weight& w, std::size_t radius, const Group& group,
                               std::size_t cap = kDefaultBallCap) {
    switch (w.kind) {
        case WeightKind::GrowthSqrt:
            return static_cast<double>(std::sqrt(group.ball_volume(radius, cap)));
        case WeightKind::Polynomial: return std::pow(1.0 + static_cast<double>(radius), w.param);
        case WeightKind::Constant: return w.param;
    }
    return 1.0;
}

/// ω(S): √vol B(R(S)), (1+R(S))^s or c. Every kind depends on S only through
/// R(S), which makes monotonicity under inclusion automatic.
inline double evaluate(const Weight& w, const std::vector<GroupElement>& s, const Group& group,
                       std::size_t cap = kDefaultBallCap) {
    return weight_of_radius(w, circumscribing_radius(s, group), group, cap);
}

// ---------------------------------------------------------------------------
// Subexponentiality
// ---------------------------------------------------------------------------

enum class PowerSetMode { ProductSet, BallBound };

inline const char* to_string(PowerSetMode m) {
    return m == PowerSetMode::ProductSet ? "product-set" : "ball-bound";
}

enum class Trend { Decreasing, NonIncreasing, Increasing, Mixed };

inline const char* to_string(Trend t) {
    switch (t) {
        case Trend::Decreasing: return "decreasing";
        case Trend::NonIncreasing: return "non-increasing";
        case Trend::Increasing: return "increasing";
        case Trend::Mixed: return "mixed";
    }
    return "";
}

struct ProbePoint {
    std::size_t n = 0;
    double value = 0;  // ω(S^n)^{1/n}
    std::size_t radius = 0;
    PowerSetMode mode = PowerSetMode::ProductSet;
};

struct SubexpProbe {
    Weight weight;
    std::vector<ProbePoint> points;
    Trend trend = Trend::Mixed;
    // Analytic verdict: polynomial and constant weights always are; the
    // growth weight is iff the group has subexponential growth.
    bool subexponential = true;
};

/// ω(S^n)^{1/n} for n = 1, 2, 4, ..., n_max. S^n is enumerated as a product
/// set while it fits under `cap`; beyond that it is bounded by B(n·R(S)),
/// which can only increase ω. Each point records the mode used.
inline SubexpProbe subexponentiality_probe(const Weight& w, const std::vector<GroupElement>& s, const Group& group,
                                           std::size_t n_max, std::size_t cap = 1'000'000,
                                           std::optional<PowerSetMode> force = std::nullopt) {
    if (s.empty()) throw DomainError("subexponentiality probe of an empty set");
    if (n_max < 1) throw DomainError("n_max must be positive");
    SubexpProbe p;
    p.weight = w;
    p.subexponential = w.kind != WeightKind::GrowthSqrt || !group.has_exponential_growth();
    const std::size_t r1 = circumscribing_radius(s, group);

    std::vector<GroupElement> power = s;  // S^n for the last n reached by products
    std::size_t power_n = 1;
    bool products = force.value_or(PowerSetMode::ProductSet) == PowerSetMode::ProductSet;
    for (std::size_t n = 1; n <= n_max; n *= 2) {
        ProbePoint pt;
        pt.n = n;
        if (products) {
            try {
                while (power_n < n) {
                    power = product_set(power, s, group, cap);
                    ++power_n;
                }
            } catch (const ResourceError&) {
                if (force) throw;
                products = false;
            }
        }
        if (products) {
            pt.mode = PowerSetMode::ProductSet;
            pt.radius = circumscribing_radius(power, group);
        } else {
            pt.mode = PowerSetMode::BallBound;
            pt.radius = n * r1;
        }
        pt.value = std::pow(weight_of_radius(w, pt.radius, group, cap), 1.0 / static_cast<double>(n));
        p.points.push_back(pt);
    }

    bool strict = true, nonincr = true, incr = true;
    for (std::size_t i = 1; i < p.points.size(); ++i) {
        double a = p.points[i - 1].value, b = p.points[i].value;
        if (!(b < a)) strict = false;
        if (b > a) nonincr = false;
        if (b < a) incr = false;
    }
    p.trend = strict && p.points.size() > 1 ? Trend::Decreasing
              : nonincr                      ? Trend::NonIncreasing
              : incr                         ? Trend::Increasing
                                             : Trend::Mixed;
    return p;
}

// ---------------------------------------------------------------------------
// Norm control
// ---------------------------------------------------------------------------

enum class NormKind { L1, L2, WeightedL2, FourierOpnorm };

struct NormSelector {
    NormKind kind = NormKind::L1;
    double s = 0;  // exponent for WeightedL2

    std::string to_string() const {
        switch (kind) {
            case NormKind::L1: return "l1";
            case NormKind::L2: return "l2";
            case NormKind::WeightedL2: {
                char buf[40];
                std::snprintf(buf, sizeof buf, "l2w:%g", s);
                return buf;
            }
            case NormKind::FourierOpnorm: return "opnorm";
        }
        return {};
    }

    /// "l1", "l2", "l2w:<s>", "opnorm".
    static NormSelector parse(const std::string& text) {
        if (text == "l1") return {NormKind::L1, 0};
        if (text == "l2") return {NormKind::L2, 0};
        if (text == "opnorm" || text == "fourier") return {NormKind::FourierOpnorm, 0};
        if (text.rfind("l2w:", 0) == 0) {
            try {
                double s = std::stod(text.substr(4));
                if (s < 0) throw std::invalid_argument("negative");
                return {NormKind::WeightedL2, s};
            } catch (const std::exception&) {
            }
        }
        throw ParseError("unknown norm '" + text + "' (expected l1, l2, l2w:<s> or opnorm)");
    }
};

/// Interval for a norm of a. Exact norms have lower == upper.
struct NormInterval {
    double lower = 0;
    double upper = 0;
};

inline NormInterval norm_interval(const AlgElement& a, const NormSelector& sel, std::size_t grid = 0) {
    switch (sel.kind) {
        case NormKind::L1: {
            double v = a.l1();
            return {v, v};
        }
        case NormKind::L2: {
            double v = a.l2();
            return {v, v};
        }
        case NormKind::WeightedL2: {
            double v = norms(a, sel.s).weighted_l2;
            return {v, v};
        }
        case NormKind::FourierOpnorm: {
            if (!a.group().is_abelian())
                throw CapabilityError("operator norm is only computable here on abelian groups, not " +
                                      a.group().spec().to_string());
            if (a.is_zero()) return {0, 0};
            auto e = fourier_opnorm_abelian(a, grid);
            return {e.lower, e.upper};
        }
    }
    return {};
}

inline void check_norm_capability(const NormSelector& sel, const Group& g) {
    if (sel.kind == NormKind::FourierOpnorm && !g.is_abelian())
        throw CapabilityError("operator norm is only computable here on abelian groups, not " + g.spec().to_string());
}

enum class ControlOutcome { Pass, Violation, Inconclusive };

inline const char* to_string(ControlOutcome o) {
    switch (o) {
        case ControlOutcome::Pass: return "pass";
        case ControlOutcome::Violation: return "violation";
        case ControlOutcome::Inconclusive: return "inconclusive";
    }
    return "";
}

struct ControlSample {
    std::size_t index = 0;
    double norm_a = 0;   // upper end of ‖a‖_A used for the bound
    double norm_b = 0;   // ‖a‖_B (upper end)
    double omega = 1;
    double bound = 0;    // C·ω·‖a‖_A
    double margin = 0;   // bound - ‖a‖_B; negative means a violation
    ControlOutcome outcome = ControlOutcome::Pass;
};

struct ControlReport {
    NormSelector norm_a, norm_b;
    double c = 1;
    Weight weight;
    std::vector<ControlSample> samples;
    std::size_t passes = 0, violations = 0, inconclusive = 0;
    double min_margin = 0;

    bool ok() const { return violations == 0 && inconclusive == 0; }
    std::vector<ControlSample> violating() const {
        std::vector<ControlSample> v;
        for (const auto& s : samples)
            if (s.outcome != ControlOutcome::Pass) v.push_back(s);
        return v;
    }
};

namespace detail {

inline ControlSample judge(std::size_t idx, NormInterval na, NormInterval nb, double omega, double c) {
    ControlSample s;
    s.index = idx;
    s.norm_a = na.upper;
    s.norm_b = nb.upper;
    s.omega = omega;
    s.bound = c * omega * na.upper;
    s.margin = s.bound - nb.upper;
    const double slack = 1e-12 * std::max(1.0, s.bound);
    if (nb.upper <= c * omega * na.lower + slack) s.outcome = ControlOutcome::Pass;
    else if (nb.lower > s.bound + slack) s.outcome = ControlOutcome::Violation;
    else s.outcome = ControlOutcome::Inconclusive;
    return s;
}

inline void tally(ControlReport& r) {
    r.passes = r.violations = r.inconclusive = 0;
    r.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& s : r.samples) {
        r.min_margin = std::min(r.min_margin, s.margin);
        switch (s.outcome) {
            case ControlOutcome::Pass: ++r.passes; break;
            case ControlOutcome::Violation: ++r.violations; break;
            case ControlOutcome::Inconclusive: ++r.inconclusive; break;
        }
    }
    if (r.samples.empty()) r.min_margin = 0;
}

}  // namespace detail

/// Checks ‖a‖_B <= C·ω(supp a)·‖a‖_A on every sample. Zero samples pass
/// trivially (ω is taken as 1).
inline ControlReport control_check(const std::vector<AlgElement>& samples, const NormSelector& norm_a,
                                   const NormSelector& norm_b, double c, const Weight& w, std::size_t grid = 0) {
    if (!(c > 0)) throw DomainError("control constant must be positive");
    ControlReport r{norm_a, norm_b, c, w, {}, 0, 0, 0, 0};
    for (const auto& a : samples) {
        check_norm_capability(norm_a, a.group());
        check_norm_capability(norm_b, a.group());
    }
    r.samples.resize(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        const auto& a = samples[i];
        double omega = a.is_zero() ? 1.0 : evaluate(w, a.support(), a.group());
        r.samples[i] = detail::judge(i, norm_interval(a, norm_a, grid), norm_interval(a, norm_b, grid), omega, c);
    });
    detail::tally(r);
    return r;
}

/// Matrix version with ‖(a_ij)‖ = Σ_ij ‖a_ij‖ and ω evaluated on the union
/// of the entry supports.
inline ControlReport matrix_control_check(const std::vector<MatrixAlgElement>& samples, const NormSelector& norm_a,
                                          const NormSelector& norm_b, double c, const Weight& w,
                                          std::size_t grid = 0) {
    if (!(c > 0)) throw DomainError("control constant must be positive");
    ControlReport r{norm_a, norm_b, c, w, {}, 0, 0, 0, 0};
    for (const auto& m : samples) {
        check_norm_capability(norm_a, *m.group_ptr());
        check_norm_capability(norm_b, *m.group_ptr());
    }
    auto summed = [&](const MatrixAlgElement& m, const NormSelector& sel) {
        NormInterval t;
        for (const auto& e : m.entries()) {
            auto v = norm_interval(e, sel, grid);
            t.lower += v.lower;
            t.upper += v.upper;
        }
        return t;
    };
    r.samples.resize(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) {
        const auto& m = samples[i];
        auto supp = m.support();
        double omega = supp.empty() ? 1.0 : evaluate(w, supp, *m.group_ptr());
        r.samples[i] = detail::judge(i, summed(m, norm_a), summed(m, norm_b), omega, c);
    });
    detail::tally(r);
    return r;
}

struct SupportPowerRow {
    std::size_t n = 0;
    double omega_power_support = 0;  // ω(supp (a_ij)^n)
    double omega_support_power = 0;  // ω((supp (a_ij))^n)
    bool inclusion = false;          // supp (a_ij)^n ⊆ (supp (a_ij))^n
};

/// Verifies supp((a_ij)^n) ⊆ (supp (a_ij))^n and the resulting weight
/// inequality for n = 1..n_max.
inline std::vector<SupportPowerRow> matrix_support_power_check(const MatrixAlgElement& m, const Weight& w,
                                                               std::size_t n_max, std::size_t cap = 1'000'000) {
    const Group& G = *m.group_ptr();
    const auto s = m.support();
    if (s.empty()) throw DomainError("support power check of the zero matrix");
    std::vector<SupportPowerRow> rows;
    MatrixAlgElement p = m;
    std::vector<GroupElement> sp = s;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1) {
            p = p * m;
            sp = product_set(sp, s, G, cap);
        }
        SupportPowerRow row;
        row.n = n;
        auto ps = p.support();
        row.inclusion = std::includes(sp.begin(), sp.end(), ps.begin(), ps.end());
        row.omega_power_support = ps.empty() ? 1.0 : evaluate(w, ps, G);
        row.omega_support_power = evaluate(w, sp, G);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sgamma
