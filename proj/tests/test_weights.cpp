#include <gtest/gtest.h>

#include "spectral_gamma/sampling.hpp"
#include "spectral_gamma/weights.hpp"

using namespace sgamma;

namespace {

GroupPtr G(const char* spec) { return make_group(GroupSpec::parse(spec)); }

std::vector<GroupElement> words(const GroupPtr& g, std::initializer_list<const char*> ws) {
    std::vector<GroupElement> out;
    for (auto w : ws) out.push_back(g->parse(w));
    return out;
}

}  // namespace

TEST(Weight, ParseAndFormat) {
    for (const char* s : {"growth-sqrt", "poly:2", "const:3"}) EXPECT_EQ(Weight::parse(s).to_string(), s);
    EXPECT_THROW(Weight::parse("const:0.5"), Error);
    EXPECT_THROW(Weight::parse("poly:-1"), Error);
    EXPECT_THROW(Weight::parse("exp"), ParseError);
}

TEST(Weight, EvaluateExamples) {
    auto z2 = G("lattice:2");
    auto f2 = G("free:2");
    EXPECT_DOUBLE_EQ(evaluate(Weight::polynomial(0), z2->generators(), *z2), 1.0);
    EXPECT_DOUBLE_EQ(evaluate(Weight::growth_sqrt(), z2->generators(), *z2), std::sqrt(5.0));
    EXPECT_DOUBLE_EQ(evaluate(Weight::polynomial(2), words(f2, {"x", "y"}), *f2), 4.0);
    EXPECT_DOUBLE_EQ(evaluate(Weight::constant(3), words(f2, {"x"}), *f2), 3.0);
    EXPECT_THROW(evaluate(Weight::growth_sqrt(), {}, *f2), DomainError);
}

TEST(Weight, MonotoneOnNestedRandomSubsets) {
    Rng rng(17);
    for (const char* s : {"lattice:2", "free:2", "heisenberg"}) {
        auto g = G(s);
        for (int t = 0; t < 200; ++t) {
            std::vector<GroupElement> small, big;
            for (int i = 0; i < 3; ++i) small.push_back(random_group_element(*g, rng, 3));
            big = small;
            for (int i = 0; i < 3; ++i) big.push_back(random_group_element(*g, rng, 4));
            for (auto w : {Weight::growth_sqrt(), Weight::polynomial(1.5), Weight::constant(2)}) {
                double a = evaluate(w, small, *g), b = evaluate(w, big, *g);
                EXPECT_GE(a, 1.0);
                EXPECT_LE(a, b) << s << " " << w.to_string();
            }
        }
    }
}

TEST(Probe, GrowthSqrtOnLatticeDecreasesBelowThreshold) {
    auto z2 = G("lattice:2");
    auto p = subexponentiality_probe(Weight::growth_sqrt(), z2->generators(), *z2, 64);
    ASSERT_EQ(p.points.back().n, 64u);
    EXPECT_LE(p.points.back().value, 1.1);
    EXPECT_NEAR(p.points.back().value, std::pow(8321.0, 1.0 / 128), 1e-12);
    EXPECT_EQ(p.trend, Trend::Decreasing);
    EXPECT_TRUE(p.subexponential);
}

TEST(Probe, PolynomialMatchesClosedForm) {
    auto z1 = G("lattice:1");
    for (double s : {0.5, 1.0, 2.0}) {
        auto p = subexponentiality_probe(Weight::polynomial(s), z1->generators(), *z1, 64);
        for (const auto& pt : p.points) {
            double n = static_cast<double>(pt.n);
            EXPECT_NEAR(pt.value, std::pow(1 + n, s / n), 1e-12);
        }
    }
}

TEST(Probe, ConstantWeightTendsToOne) {
    auto f2 = G("free:2");
    auto p = subexponentiality_probe(Weight::constant(5), f2->generators(), *f2, 32);
    for (const auto& pt : p.points) EXPECT_NEAR(pt.value, std::pow(5.0, 1.0 / pt.n), 1e-12);
}

TEST(Probe, GrowthSqrtOnFreeGroupIsNotSubexponential) {
    auto f2 = G("free:2");
    auto p = subexponentiality_probe(Weight::growth_sqrt(), f2->generators(), *f2, 32, 100000);
    EXPECT_FALSE(p.subexponential);
    EXPECT_GT(p.points.back().value, 1.6);  // sqrt(3) in the limit
    bool ball_mode = false;
    for (const auto& pt : p.points) ball_mode = ball_mode || pt.mode == PowerSetMode::BallBound;
    EXPECT_TRUE(ball_mode);
}

TEST(Control, CauchySchwarzOnLattice) {
    Rng rng(1);
    auto z = G("lattice:1");
    std::vector<AlgElement> samples;
    for (int i = 0; i < 500; ++i) samples.push_back(random_element(z, rng));
    auto r = control_check(samples, NormSelector::parse("l2"), NormSelector::parse("l1"), 1.0, Weight::growth_sqrt());
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.passes, 500u);
    EXPECT_GE(r.min_margin, 0.0);
}

TEST(Control, OperatorNormBelowL1) {
    Rng rng(2);
    auto z2 = G("lattice:2");
    std::vector<AlgElement> samples;
    for (int i = 0; i < 50; ++i) samples.push_back(random_element(z2, rng));
    auto r = control_check(samples, NormSelector::parse("l1"), NormSelector::parse("opnorm"), 1.0,
                           Weight::constant(1));
    EXPECT_EQ(r.violations, 0u);
}

TEST(Control, RapidDecayStyleWeightedL2) {
    Rng rng(3);
    auto z = G("lattice:1");
    std::vector<AlgElement> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(random_element(z, rng));
    auto r = control_check(samples, NormSelector::parse("l2"), NormSelector::parse("l2w:1"), 1.0,
                           Weight::polynomial(1));
    EXPECT_TRUE(r.ok());
}

TEST(Control, DetectsViolations) {
    auto z = G("lattice:1");
    std::vector<AlgElement> samples{AlgElement::from_terms(z, {{z->parse("x"), 1.0}, {z->parse("x^-1"), 1.0}})};
    // ‖a‖₁ = 2 > 1·1·‖a‖₂ = √2
    auto r = control_check(samples, NormSelector::parse("l2"), NormSelector::parse("l1"), 1.0, Weight::constant(1));
    EXPECT_EQ(r.violations, 1u);
    ASSERT_EQ(r.violating().size(), 1u);
    EXPECT_NEAR(r.violating()[0].margin, std::sqrt(2.0) - 2.0, 1e-12);
}

TEST(Control, OperatorNormOnFreeGroupIsCapabilityError) {
    auto f2 = G("free:2");
    std::vector<AlgElement> samples{AlgElement::unit(f2)};
    EXPECT_THROW(
        control_check(samples, NormSelector::parse("l1"), NormSelector::parse("opnorm"), 1.0, Weight::constant(1)),
        CapabilityError);
}

TEST(MatrixControl, SummedCauchySchwarz) {
    Rng rng(4);
    auto z = G("lattice:1");
    std::vector<MatrixAlgElement> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(random_matrix_element(z, rng, 2));
    auto r = matrix_control_check(samples, NormSelector::parse("l2"), NormSelector::parse("l1"), 2.0,
                                  Weight::growth_sqrt());
    EXPECT_TRUE(r.ok());
}

TEST(MatrixControl, DiagonalEmbeddingKeepsScalarMargins) {
    Rng rng(5);
    auto z = G("lattice:1");
    std::vector<AlgElement> scalars;
    std::vector<MatrixAlgElement> mats;
    for (int i = 0; i < 50; ++i) {
        scalars.push_back(random_element(z, rng));
        mats.push_back(MatrixAlgElement::diagonal({scalars.back(), AlgElement(z)}));
    }
    auto l2 = NormSelector::parse("l2"), l1 = NormSelector::parse("l1");
    auto rs = control_check(scalars, l2, l1, 1.0, Weight::growth_sqrt());
    auto rm = matrix_control_check(mats, l2, l1, 1.0, Weight::growth_sqrt());
    for (std::size_t i = 0; i < scalars.size(); ++i) EXPECT_NEAR(rs.samples[i].margin, rm.samples[i].margin, 1e-12);
}

TEST(MatrixControl, SupportOfPowersInsidePowersOfSupport) {
    Rng rng(6);
    for (const char* s : {"lattice:2", "free:2", "heisenberg"}) {
        auto g = G(s);
        auto m = random_matrix_element(g, rng, 2, {3, 1, false});
        for (const auto& row : matrix_support_power_check(m, Weight::growth_sqrt(), 4)) {
            EXPECT_TRUE(row.inclusion) << s << " n=" << row.n;
            EXPECT_LE(row.omega_power_support, row.omega_support_power * (1 + 1e-12)) << s;
        }
    }
}
