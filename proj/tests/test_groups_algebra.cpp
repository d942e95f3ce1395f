#include <gtest/gtest.h>

#include "oracles.hpp"
#include "properties.hpp"
#include "spectral_gamma/algebra.hpp"
#include "spectral_gamma/fourier.hpp"
#include "spectral_gamma/groups.hpp"
#include "spectral_gamma/radial.hpp"

using namespace sgamma;

namespace {

GroupPtr G(const char* spec) { return make_group(GroupSpec::parse(spec)); }

AlgElement E(const GroupPtr& g, std::vector<std::pair<const char*, Complex>> terms) {
    std::vector<AlgElement::Term> t;
    for (auto& [w, c] : terms) t.emplace_back(g->parse(w), c);
    return AlgElement::from_terms(g, std::move(t));
}

const Complex I(0, 1);

}  // namespace

TEST(GroupSpec, ParseAndFormatRoundTrip) {
    for (const char* s : {"lattice:2", "free:3", "heisenberg", "cyclic:7", "lattice:1*free:2"})
        EXPECT_EQ(GroupSpec::parse(s).to_string(), s);
    EXPECT_THROW(GroupSpec::parse("bogus:2"), ParseError);
    EXPECT_THROW(GroupSpec::parse("free:0"), Error);
    EXPECT_THROW(GroupSpec::parse("cyclic:0"), Error);
}

TEST(Groups, FreeGroupReducesWords) {
    auto g = G("free:2");
    EXPECT_EQ(g->multiply(g->parse("x y"), g->parse("y^-1 x^-1")), g->identity());
    EXPECT_EQ(g->format(g->parse("x x y^-1 y^-1")), "x^2 y^-2");
    EXPECT_EQ(g->word_length(g->parse("x^3 y^-1")), 4u);
    EXPECT_EQ(g->inverse(g->parse("x y")), g->parse("y^-1 x^-1"));
}

TEST(Groups, LatticeAndCyclicArithmetic) {
    auto z2 = G("lattice:2");
    EXPECT_EQ(z2->multiply(z2->parse("(1,2)"), z2->parse("(-1,3)")), z2->parse("(0,5)"));
    EXPECT_EQ(z2->word_length(z2->parse("(3,-4)")), 7u);
    auto c5 = G("cyclic:5");
    EXPECT_EQ(c5->power(c5->parse("g"), 5), c5->identity());
    EXPECT_EQ(c5->word_length(c5->parse("g^4")), 1u);
}

TEST(Groups, HeisenbergCommutatorIsCentral) {
    auto h = G("heisenberg");
    auto x = h->parse("X"), y = h->parse("Y");
    auto comm = h->multiply(h->multiply(x, y), h->multiply(h->inverse(x), h->inverse(y)));
    EXPECT_EQ(comm, h->parse("Z"));
    EXPECT_EQ(h->multiply(comm, x), h->multiply(x, comm));
    EXPECT_FALSE(h->is_abelian());
}

TEST(Groups, BallVolumesMatchOracles) {
    for (int d = 1; d <= 3; ++d) {
        auto g = make_group(GroupSpec::lattice(d));
        for (int r = 0; r <= 6; ++r) {
            EXPECT_EQ(g->ball(static_cast<std::size_t>(r)).volume, oracle::lattice_ball_bruteforce(d, r));
            EXPECT_EQ(g->ball_volume(static_cast<std::size_t>(r)), oracle::lattice_ball_bruteforce(d, r));
        }
    }
    for (int k = 1; k <= 3; ++k) {
        auto g = make_group(GroupSpec::free(k));
        for (int r = 0; r <= 5; ++r) {
            EXPECT_EQ(static_cast<long double>(g->ball(static_cast<std::size_t>(r)).volume), oracle::free_ball_volume(k, r));
            EXPECT_EQ(g->ball_volume(static_cast<std::size_t>(r)), oracle::free_ball_volume(k, r));
        }
    }
    EXPECT_EQ(G("free:2")->ball(2).volume, 17u);
}

TEST(Groups, HeisenbergSpheresMatchIndependentBfs) {
    auto h = G("heisenberg");
    auto want = oracle::heisenberg_spheres(8);
    auto got = h->sphere_sizes(8);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t r = 0; r < want.size(); ++r) EXPECT_EQ(static_cast<std::size_t>(got[r]), want[r]) << "r=" << r;
    EXPECT_EQ(want[1], 4u);
    EXPECT_EQ(want[2], 12u);
}

TEST(Groups, GrowthClassification) {
    EXPECT_TRUE(G("free:2")->has_exponential_growth());
    EXPECT_FALSE(G("lattice:3")->has_exponential_growth());
    EXPECT_FALSE(G("heisenberg")->has_exponential_growth());
    EXPECT_TRUE(G("lattice:1*free:2")->has_exponential_growth());
    EXPECT_FALSE(G("free:1")->has_exponential_growth());
}

TEST(Groups, BallCapIsAResourceError) {
    EXPECT_THROW(G("free:3")->ball(12, 1000), ResourceError);
}

TEST(Groups, ProductGroupFactorsAct) {
    auto g = G("lattice:1*free:2");
    auto a = g->parse("(1) | x"), b = g->parse("(2) | y");
    EXPECT_EQ(g->format(g->multiply(a, b)), "(3) | x y");
    EXPECT_EQ(g->word_length(g->multiply(a, b)), 5u);
}

TEST(Algebra, ProductExample) {
    // (1 + ix + ix^{-1})* (1 + ix + ix^{-1}) = 3 + x^2 + x^{-2} (cross terms cancel)
    auto g = G("free:2");
    auto a = E(g, {{"e", 1}, {"x", I}, {"x^-1", I}});
    auto b = a.involution() * a;
    auto want = E(g, {{"e", 3}, {"x^2", 1}, {"x^-2", 1}});
    EXPECT_LT(props::max_coeff_diff(b, want), 1e-15);
    EXPECT_DOUBLE_EQ(a.l1(), 3.0);
}

TEST(Algebra, ConvolutionMatchesLaurentOracle) {
    Rng rng(11);
    auto g = G("lattice:2");
    for (int t = 0; t < 200; ++t) {
        auto a = random_element(g, rng), b = random_element(g, rng);
        oracle::Laurent la, lb;
        for (const auto& [x, c] : a.terms()) la[{x.code[0], x.code[1]}] += c;
        for (const auto& [x, c] : b.terms()) lb[{x.code[0], x.code[1]}] += c;
        auto want = oracle::laurent_mul(la, lb);
        auto got = a * b;
        for (const auto& [k, c] : want)
            EXPECT_NEAR(std::abs(got.coeff(g->parse("(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ")")) - c),
                        0.0, 1e-12);
    }
}

TEST(Algebra, ExactModeAgreesWithFloatingPoint) {
    auto g = G("free:2");
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        auto a = random_element(g, rng, {4, 2, true}), b = random_element(g, rng, {4, 2, true});
        auto exact = to_float(convolve(to_exact(a), to_exact(b)));
        EXPECT_EQ(props::max_coeff_diff(exact, a * b), 0.0);
    }
}

TEST(Algebra, TreeWalkCountsMatchExactMoments) {
    // τ(χ_S^n) counts closed walks of length n on the 4-regular tree.
    auto g = G("free:2");
    auto chi = indicator(g->generators(), g);
    auto ex = to_exact(chi);
    auto p = ExactElement::unit(g);
    for (unsigned n = 1; n <= 10; ++n) {
        p = convolve(p, ex);
        auto tau = p.coeff(g->identity());
        EXPECT_EQ(tau.im, 0);
        EXPECT_EQ(static_cast<long double>(tau.re.convert_to<double>()), oracle::tree_closed_walks(2, n)) << "n=" << n;
    }
}

TEST(Algebra, NormsAndWeightedNorm) {
    auto g = G("lattice:1");
    auto a = E(g, {{"x", 3}, {"x^-2", Complex(0, 4)}});
    auto n = norms(a, 1.0);
    EXPECT_DOUBLE_EQ(n.l1, 7.0);
    EXPECT_DOUBLE_EQ(n.l2, 5.0);
    EXPECT_DOUBLE_EQ(n.weighted_l2, std::sqrt(9.0 * 4 + 16.0 * 9));
}

TEST(Algebra, SupportCapIsAResourceError) {
    auto g = G("free:2");
    auto chi = indicator(g->generators(), g);
    auto p = power(chi, 4);
    EXPECT_THROW(convolve(p, p, 100), ResourceError);
}

TEST(Algebra, MatrixElementsUseSummedNorms) {
    auto g = G("lattice:1");
    MatrixAlgElement m(g, 2);
    m.set(0, 0, E(g, {{"x", 3}}));
    m.set(1, 1, E(g, {{"x", Complex(0, 4)}, {"e", 1}}));
    auto n = m.summed_norms(0);
    EXPECT_DOUBLE_EQ(n.l1, 8.0);
    EXPECT_DOUBLE_EQ(n.l2, 3.0 + std::sqrt(17.0));
    EXPECT_EQ(m.support().size(), 2u);
}

TEST(Algebra, MixingGroupsIsStructuralError) {
    auto a = AlgElement::unit(G("free:2"));
    auto b = AlgElement::unit(G("lattice:2"));
    EXPECT_THROW(a * b, StructuralError);
}

TEST(Fourier, GridSupMatchesOracle) {
    auto g = G("lattice:2");
    auto chi = indicator(g->generators(), g);
    auto f = fourier_sup(abelianize(chi), 256);
    EXPECT_NEAR(f.lower, 4.0, 1e-12);
    EXPECT_GE(f.upper, 4.0 - 1e-12);
    oracle::Laurent l{{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, Complex(0, 1)}, {{0, 2}, 0.5}};
    auto a = E(g, {{"(1,0)", 1}, {"(-1,0)", 1}, {"(0,1)", I}, {"(0,2)", 0.5}});
    auto fa = fourier_sup(abelianize(a), 128);
    EXPECT_NEAR(fa.lower, oracle::fourier_grid_max(l, 2, 128), 1e-12);
}

TEST(Radial, RecognizesRadialElements) {
    auto g = G("free:2");
    auto chi = indicator(g->generators(), g);
    auto r = as_radial(chi);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->values.size(), 2u);
    EXPECT_FALSE(as_radial(E(g, {{"x", 1}})).has_value());
}

TEST(Properties, AssociativityInvolutionSupport) {
    auto a = props::associativity(2000, 1);
    EXPECT_TRUE(a.ok()) << a.first_failure;
    auto b = props::involution(2000, 2);
    EXPECT_TRUE(b.ok()) << b.first_failure;
    auto c = props::support_growth(1000, 3);
    EXPECT_TRUE(c.ok()) << c.first_failure;
}
