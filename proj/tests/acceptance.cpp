// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "properties.hpp"
#include "spectral_gamma.hpp"

using namespace sgamma;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

GroupPtr G(const char* spec) { return make_group(GroupSpec::parse(spec)); }

AlgElement E(const GroupPtr& g, std::vector<std::pair<const char*, Complex>> terms) {
    std::vector<AlgElement::Term> t;
    for (auto& [w, c] : terms) t.emplace_back(g->parse(w), c);
    return AlgElement::from_terms(g, std::move(t));
}

const Complex I(0, 1);

// Collects sub-checks; the first failing one is reported.
struct Criterion {
    bool ok = true;
    std::string why;
    std::ostringstream info;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    }
    void tally(const props::Tally& t, const std::string& name) {
        require(t.ok(), name + ": " + std::to_string(t.failures) + "/" + std::to_string(t.cases) + " failed (" +
                            t.first_failure + ")");
        info << name << " " << t.cases << " cases; ";
    }
};

Criterion c1() {
    Criterion c;
    auto a = E(G("lattice:1"), {{"x", 1}, {"x^-1", 1}});
    EstimatorOptions o;
    o.n_max = 1024;
    o.use_certificates = false;
    auto t0 = Clock::now();
    auto e = l1_spectral_radius(a, o);
    double dt = seconds_since(t0);
    c.require(!e.trace.empty() && e.trace.back().first == 1024, "trace must reach n = 1024");
    double worst = 0;
    for (auto [n, v] : e.trace) worst = std::max(worst, std::abs(v - 2.0));
    c.require(worst <= 1e-12, "trace deviates from 2 by " + std::to_string(worst));
    c.require(dt < 1.0, "runtime " + std::to_string(dt) + " s");
    c.info << "max |trace - 2| = " << worst << ", " << dt << " s";
    return c;
}

Criterion c2() {
    Criterion c;
    auto a = E(G("lattice:1"), {{"x", 1}, {"x^-1", 1}});
    EstimatorOptions o;
    o.n_max = 512;
    auto e = reduced_norm_trace(a, o);
    c.require(e.trace.back().first == 512, "trace must reach n = 512");
    c.require(std::abs(e.value - 2.0) <= 0.02, "estimate " + std::to_string(e.value) + " not within 1% of 2");
    double worst = 0;
    for (auto [n, v] : e.trace)
        worst = std::max(worst, std::abs(v - oracle::central_binomial_root(static_cast<unsigned>(n))));
    c.require(worst <= 1e-9, "central binomial oracle mismatch " + std::to_string(worst));
    auto f = fourier_opnorm_lattice(a, 1024);
    c.require(std::abs(f.lower - 2.0) <= 1e-4 && f.upper >= 2.0 - 1e-12, "Fourier oracle disagrees");
    c.info << "estimate " << e.value << ", oracle gap " << worst << ", Fourier " << f.lower;
    return c;
}

Criterion c3() {
    Criterion c;
    auto t0 = Clock::now();
    auto f2 = G("free:2");
    auto a = E(f2, {{"e", 1}, {"x", I}, {"x^-1", I}});
    c.require(a.l1() == 3.0, "|a|_1 != 3");
    auto b = a.involution() * a;
    auto want = E(f2, {{"e", 3}, {"x^2", 1}, {"x^-2", 1}});
    c.require(props::max_coeff_diff(b, want) == 0, "a*a != 3 + x^2 + x^-2");
    auto nb = reduced_norm_bounds(b);
    c.require(std::abs(nb.lower - 5) <= 1e-3 && std::abs(nb.upper - 5) <= 1e-3,
              "|a*a| interval [" + std::to_string(nb.lower) + ", " + std::to_string(nb.upper) + "]");
    auto y = AlgElement::delta(f2, f2->parse("y x"));
    auto yxa = y * a;
    for (std::size_t n = 1; n <= 6; ++n) c.require(free_semigroup_l1_probe(yxa, n), "free-semigroup probe fails");
    auto v = sigma1_verdict(yxa);
    c.require(v.verdict == Sigma1Outcome::ViolationWitness, std::string("verdict ") + to_string(v.verdict));
    c.require(v.margin >= 0.7, "margin " + std::to_string(v.margin));
    double dt = seconds_since(t0);
    c.require(dt < 30, "runtime " + std::to_string(dt) + " s");
    c.info << "|a*a| in [" << nb.lower << ", " << nb.upper << "], margin " << v.margin << ", " << dt << " s";
    return c;
}

Criterion c4() {
    Criterion c;
    auto z2 = G("lattice:2");
    auto k1 = kesten_check(z2->generators(), z2);
    c.require(k1.amenable_consistent && k1.radius.width() <= 0.01, "Z^2 interval misses 4 or is too wide");
    auto f2 = G("free:2");
    EstimatorOptions o;
    o.n_max = 512;
    auto k2 = kesten_check(f2->generators(), f2, o);
    const double target = 2 * std::sqrt(3.0);
    c.require(std::abs(k2.radius.value - target) <= 0.02 * target, "F_2 estimate " + std::to_string(k2.radius.value));
    c.require(!k2.amenable_consistent && k2.radius.upper < 4, "F_2 interval does not exclude 4");
    auto chi = to_exact(indicator(f2->generators(), f2));
    auto p = ExactElement::unit(f2);
    for (unsigned n = 1; n <= 10; ++n) {
        p = convolve(p, chi);
        auto tau = p.coeff(f2->identity());
        c.require(tau.im == 0 && static_cast<long double>(tau.re.convert_to<double>()) == oracle::tree_closed_walks(2, n),
                  "tree walk count mismatch at n = " + std::to_string(n));
    }
    c.info << "Z^2 [" << k1.radius.lower << ", " << k1.radius.upper << "], F_2 " << k2.radius.value << " in ["
           << k2.radius.lower << ", " << k2.radius.upper << "]";
    return c;
}

Criterion c5() {
    Criterion c;
    auto z2 = G("lattice:2");
    auto p = subexponentiality_probe(Weight::growth_sqrt(), z2->generators(), *z2, 64);
    auto at = [&](std::size_t n) {
        for (const auto& q : p.points)
            if (q.n == n) return q.value;
        return std::nan("");
    };
    c.require(at(16) > at(32) && at(32) > at(64), "probe not strictly decreasing over 16, 32, 64");
    c.require(at(64) <= 1.1, "probe at 64 is " + std::to_string(at(64)));
    auto z = G("lattice:1");
    double worst = 0;
    for (double s : {0.5, 1.0, 2.0, 3.0}) {
        auto q = subexponentiality_probe(Weight::polynomial(s), z->generators(), *z, 64);
        for (const auto& pt : q.points)
            worst = std::max(worst, std::abs(pt.value - std::pow(1.0 + static_cast<double>(pt.n), s / pt.n)));
    }
    c.require(worst <= 1e-12, "polynomial probe off by " + std::to_string(worst));
    c.info << "values " << at(16) << ", " << at(32) << ", " << at(64) << "; poly max error " << worst;
    return c;
}

Criterion c6() {
    Criterion c;
    auto l2 = NormSelector::parse("l2"), l1 = NormSelector::parse("l1");
    Rng rng(2024);
    for (const char* s : {"lattice:1", "lattice:2"}) {
        auto g = G(s);
        std::vector<AlgElement> samples;
        for (int i = 0; i < 10000; ++i) samples.push_back(random_element(g, rng));
        auto r = control_check(samples, l2, l1, 1.0, Weight::growth_sqrt());
        c.require(r.violations == 0 && r.passes == samples.size(),
                  std::string(s) + ": " + std::to_string(r.violations) + " violations");
        c.info << s << " " << r.passes << " passes; ";
    }
    auto z = G("lattice:1");
    std::vector<MatrixAlgElement> mats;
    for (int i = 0; i < 1000; ++i) mats.push_back(random_matrix_element(z, rng, 2));
    auto r = matrix_control_check(mats, l2, l1, 1.0, Weight::growth_sqrt());
    c.require(r.violations == 0, "matrix analogue: " + std::to_string(r.violations) + " violations");
    c.info << "2x2 " << r.passes << " passes";
    return c;
}

Criterion c7() {
    Criterion c;
    c.tally(props::holo_identity(100, 71), "id at 256 nodes");
    c.tally(props::holo_chi_idempotent(100, 72), "chi on idempotents");
    c.tally(props::holo_spectral_mapping(100, 73), "spectral mapping z^2, exp");
    Rng rng(74);
    HoloOptions o;
    o.adaptive = false;
    for (int t = 0; t < 10; ++t) {
        Matrix m = props::separated_matrix(6, rng);
        double prev = -1;
        for (std::size_t nodes = 4; nodes <= 256; nodes *= 2) {
            o.nodes = nodes;
            double err = (holo_calc(HoloFunction::identity(), m, Region::full_plane(), o).value - m).norm();
            if (prev > 1e-11) c.require(prev / err >= 4, "error ratio " + std::to_string(prev / err) + " at " +
                                                             std::to_string(nodes) + " nodes");
            prev = err;
        }
    }
    c.info << "error ratio >= 4 per doubling on 10 matrices";
    return c;
}

Criterion c8() {
    Criterion c;
    c.tally(props::omega0_counts_vs_chi(100, 81), "Omega0 counts vs rank chi");
    c.tally(props::omega1_trivial(100, 82), "Omega1 same_class");
    c.tally(props::count_additivity(1000, 83), "additivity");
    c.tally(props::count_conjugation_invariance(1000, 84), "conjugation invariance");
    return c;
}

Criterion c9() {
    Criterion c;
    int rows = 0;
    for (char kind : {'t', 's', 'c'})
        for (int d = 0; d <= 6; ++d) {
            auto s = kind == 't' ? SpaceDescriptor::torus(d) : kind == 's' ? SpaceDescriptor::sphere(d) : SpaceDescriptor::cube(d);
            for (const auto& r : rank_table(s, 0, 6)) {
                ++rows;
                c.require(r.csr.exact() && r.csr.value == oracle::csr_closed_form(kind, d, r.k),
                          "csr mismatch for " + s.to_string() + " k=" + std::to_string(r.k));
            }
            auto all = rank_table(s, 0, 16);
            for (std::size_t i = 0; i < all.size(); ++i) {
                c.require(all[i].csr.value <= all[i].csr_bound, "(+) bound violated for " + s.to_string());
                if (i > 0) c.require(all[i - 1].csr.value <= all[i].csr.value, "hierarchy not monotone for " + s.to_string());
            }
        }
    c.require(csr_k_formula(SpaceDescriptor::sphere(2), 0).value == 1, "sphere exception");
    for (int d = 0; d <= 6; ++d) {
        auto h = hsr_bounds(SpaceDescriptor::finite_cw(2 * d, true, false), 1);
        c.require(h.lower == d + 1 && h.upper == d + 1, "hsr_1 of cw:" + std::to_string(2 * d) + ":top");
    }
    c.info << rows << " table rows";
    return c;
}

Criterion c10() {
    Criterion c;
    auto t0 = Clock::now();
    c.tally(props::associativity(10000, 101), "associativity");
    c.tally(props::involution(10000, 102), "involution");
    c.tally(props::support_growth(10000, 103), "support growth");
    c.tally(props::lg_vs_oracle(10000, 10000, 104), "Lg membership");
    double dt = seconds_since(t0);
    c.require(dt < 300, "runtime " + std::to_string(dt) + " s");
    c.info << dt << " s";
    return c;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Criterion()>> criteria[] = {
        {"l1 Gelfand radius of x + x^-1 on Z", c1},
        {"reduced norm trace of x + x^-1 on Z", c2},
        {"free-semigroup obstruction on F_2", c3},
        {"Kesten criterion on Z^2 and F_2", c4},
        {"subexponential weight probe", c5},
        {"control criterion on Z, Z^2 and 2x2 matrices", c6},
        {"holomorphic functional calculus", c7},
        {"spectral K-theory counts", c8},
        {"stable-rank tables", c9},
        {"property suites", c10},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Criterion c;
        auto t0 = Clock::now();
        try {
            c = run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.why = std::string("exception: ") + e.what();
        }
        double dt = seconds_since(t0);
        if (!c.ok) ++failures;
        std::string info = c.info.str();
        while (!info.empty() && (info.back() == ' ' || info.back() == ';')) info.pop_back();
        std::printf("%s %2d  %s  (%.2fs)  %s\n", c.ok ? "PASS" : "FAIL", index, name, dt,
                    c.ok ? info.c_str() : c.why.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
