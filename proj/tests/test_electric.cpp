#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gsusy/electric.hpp"
#include "support/oracles.hpp"

using namespace gsusy;
using namespace gsusy::electric;

namespace {
const HalfInteger kHalf = HalfInteger::from_twice(1);
HalfInteger half_odd(int twice) { return HalfInteger::from_twice(twice); }
} // namespace

TEST(Classify, ThreeRegimes) {
    EXPECT_EQ(classify(ElectricImpurity::with_charge(0.3), kHalf).classification, Criticality::subcritical);
    EXPECT_EQ(classify(ElectricImpurity::with_charge(0.5), kHalf).classification, Criticality::critical);
    EXPECT_EQ(classify(ElectricImpurity::with_charge(0.6), kHalf).classification, Criticality::supercritical);
    EXPECT_EQ(classify(ElectricImpurity::with_charge(1.5), half_odd(3)).classification, Criticality::critical);
    EXPECT_EQ(classify(ElectricImpurity::with_charge(1.2), half_odd(-3)).classification, Criticality::subcritical);
}

TEST(Classify, RotationAngle) {
    const auto sub = classify(ElectricImpurity::with_charge(0.3), kHalf);
    EXPECT_TRUE(sub.rotation_unitary());
    EXPECT_NEAR(sub.eta, std::asin(0.6), 1e-15);
    EXPECT_NEAR(sub.nu_sq, 0.16, 1e-15);
    const auto crit = classify(ElectricImpurity::with_charge(0.5), kHalf);
    EXPECT_NEAR(crit.eta, 0.5 * std::numbers::pi, 1e-15);
    const auto sup = classify(ElectricImpurity::with_charge(0.6), kHalf);
    EXPECT_FALSE(sup.rotation_unitary());
    EXPECT_NEAR(sup.nu_sq, -0.11, 1e-15);
    EXPECT_NEAR(std::cosh(sup.eta_imag_part), 1.2, 1e-14);
}

TEST(Classify, IntegerJRejected) {
    EXPECT_THROW(classify(ElectricImpurity::with_charge(0.3), HalfInteger::from_twice(2)), InvalidQuantumNumbers);
    EXPECT_THROW(ElectricImpurity::with_charge(0.0), DomainError);
    EXPECT_THROW(ElectricImpurity::with_charge(-1.0), DomainError);
}

TEST(BoundEnergy, GroundAndFirstExcited) {
    const auto imp = ElectricImpurity::with_charge(0.3);
    EXPECT_NEAR(bound_energy(imp, {kHalf, 0}).value, 0.8, 1e-15);
    EXPECT_NEAR(bound_energy(imp, {kHalf, 1}).value, 0.977802414077409, 1e-14);
}

TEST(BoundEnergy, MonotoneInsideGap) {
    for (double g : {0.05, 0.3, 0.49}) {
        const auto imp = ElectricImpurity::with_charge(g);
        double prev = 0.0;
        for (int n = 0; n <= 40; ++n) {
            const double e = bound_energy(imp, {kHalf, n}).value;
            EXPECT_GT(e, prev);
            EXPECT_LT(e, 1.0);
            prev = e;
        }
    }
}

TEST(BoundEnergy, CollapseCarriesNuSquared) {
    try {
        bound_energy(ElectricImpurity::with_charge(0.6), {kHalf, 0});
        FAIL() << "expected collapse";
    } catch (const CollapseRegimeError& e) {
        EXPECT_NEAR(e.nu_sq(), -0.11, 1e-15);
    }
    EXPECT_THROW(bound_energy(ElectricImpurity::with_charge(0.5), {kHalf, 0}), CollapseRegimeError);
}

TEST(SusyEigenvalue, GroundStateIsZero) {
    EXPECT_NEAR(susy_eigenvalue(ElectricImpurity::with_charge(0.3), {kHalf, 0}), 0.0, 1e-15);
    EXPECT_NEAR(susy_eigenvalue(ElectricImpurity::with_charge(0.3), {kHalf, 1}), 0.49390243902439, 1e-13);
}

TEST(SusyEigenvalue, BothFormsAgreeOnRandomCases) {
    auto g = oracles::rng(53);
    for (int i = 0; i < 200; ++i) {
        const int tj = 1 + 2 * static_cast<int>(oracles::uniform(g, 0.0, 5.0));
        const double jv = 0.5 * tj;
        const double coupling = oracles::uniform(g, 0.01, 0.99) * jv;
        const int n = static_cast<int>(oracles::uniform(g, 0.0, 20.0));
        const auto imp = ElectricImpurity::with_charge(coupling);
        const QuantumNumbers q{half_odd(tj), n};
        const double a = susy_eigenvalue(imp, q), b = susy_eigenvalue_from_energy(imp, q);
        EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(b))) << coupling << " " << jv << " " << n;
        EXPECT_GE(a, -1e-15);
    }
}

TEST(Superpotential, GroundStateCoefficients) {
    const auto w = superpotential(ElectricImpurity::with_charge(0.3), {kHalf, 0});
    ASSERT_TRUE(w.is_real());
    EXPECT_NEAR(w.inverse_coeff.real(), 0.4, 1e-15);
    EXPECT_NEAR(w.constant_term.real(), 0.6, 1e-15);
}

TEST(Superpotential, CriticalThrowsSupercriticalIsComplex) {
    EXPECT_THROW(superpotential(ElectricImpurity::with_charge(0.5), {kHalf, 0}), CollapseRegimeError);
    EXPECT_FALSE(superpotential(ElectricImpurity::with_charge(0.6), {kHalf, 0}).is_real());
    EXPECT_FALSE(superpotential(ElectricImpurity::with_charge(2.0), {half_odd(3), 0}).is_real());
}

TEST(MatchingRatio, KnownValueAndSmallCouplingLimit) {
    EXPECT_NEAR(matching_inner_ratio(ElectricImpurity::with_charge(0.3), kHalf), 0.1517132102358, 1e-12);
    EXPECT_NEAR(matching_inner_ratio(ElectricImpurity::with_charge(0.3), kHalf),
                oracles::frozen::bessel_ratio_j1_j0_at_0_3, 1e-14);
    for (double g : {1e-3, 1e-4, 1e-5})
        EXPECT_NEAR(matching_inner_ratio(ElectricImpurity::with_charge(g), kHalf) / (0.5 * g), 1.0, g);
}

TEST(MatchingRatio, PositiveThroughoutSubcriticalDomain) {
    for (int tj = 1; tj <= 9; tj += 2)
        for (double f = 0.05; f < 1.0; f += 0.05) {
            const double g = f * 0.5 * tj;
            EXPECT_GT(matching_inner_ratio(ElectricImpurity::with_charge(g), half_odd(tj)), 0.0) << g;
        }
}

TEST(MatchingRatio, DomainErrors) {
    EXPECT_THROW(matching_inner_ratio(ElectricImpurity::with_charge(0.3), half_odd(-1)), DomainError);
    EXPECT_THROW(matching_inner_ratio(ElectricImpurity::with_charge(0.7), kHalf), CollapseRegimeError);
}

TEST(Matching, RecoversClosedFormLevels) {
    auto g = oracles::rng(59);
    for (int i = 0; i < 50; ++i) {
        const int tj = 1 + 2 * static_cast<int>(oracles::uniform(g, 0.0, 4.0));
        const double coupling = oracles::uniform(g, 0.02, 0.98) * 0.5 * tj;
        const int n = static_cast<int>(oracles::uniform(g, 0.0, 8.0));
        const auto imp = ElectricImpurity::with_charge(coupling);
        const double closed = bound_energy(imp, {half_odd(tj), n}).value;
        EXPECT_LE(oracles::rel(eigenvalue_from_matching(imp, half_odd(tj), n).value, closed), 1e-10);
    }
}

TEST(DecayRate, MatchesGapDistance) {
    EXPECT_NEAR(decay_rate(0.8), 0.6, 1e-15);
    EXPECT_EQ(decay_rate(1.0), 0.0);
}
