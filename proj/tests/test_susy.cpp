#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

#include "gsusy/electric.hpp"
#include "gsusy/magnetic.hpp"
#include "gsusy/oracle.hpp"
#include "gsusy/susy.hpp"
#include "support/oracles.hpp"

using namespace gsusy;

namespace {

const HalfInteger kHalf = HalfInteger::from_twice(1);

Eigen::MatrixXd dense(const SymTridiagonal& t) {
    const int n = t.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = t.diag()[i];
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = t.off()[i];
    return m;
}

} // namespace

TEST(PartnerPotentials, PureCentrifugal) {
    const auto p = partner_potentials(RadialSuperpotential::real(1.0, 0.0));
    const auto v1 = p.v1_real(), v2 = p.v2_real();
    EXPECT_DOUBLE_EQ(v1.c2, 2.0);
    EXPECT_DOUBLE_EQ(v1.c1, 0.0);
    EXPECT_DOUBLE_EQ(v1.c0, 0.0);
    EXPECT_DOUBLE_EQ(v2.c2, 0.0);
    EXPECT_DOUBLE_EQ(v2.c0, 0.0);
}

TEST(PartnerPotentials, ElectricGroundStateCoefficients) {
    const auto v1 = partner_potentials(RadialSuperpotential::real(0.4, 0.6)).v1_real();
    EXPECT_NEAR(v1.c2, 0.56, 1e-15);
    EXPECT_NEAR(v1.c1, -0.48, 1e-15);
    EXPECT_NEAR(v1.c0, 0.36, 1e-15);
}

TEST(PartnerPotentials, RiccatiDifferenceAndDerivative) {
    auto g = oracles::rng(31);
    for (int i = 0; i < 100; ++i) {
        const double a = oracles::uniform(g, -3.0, 3.0), b = oracles::uniform(g, -2.0, 2.0);
        const RadialSuperpotential w = RadialSuperpotential::real(a, b);
        const auto p = partner_potentials(w);
        const double r = oracles::uniform(g, 0.1, 20.0);
        const double wr = w(r).real();
        const double h = 1e-5 * r;
        const double dw = (w(r + h).real() - w(r - h).real()) / (2 * h);
        EXPECT_NEAR(p.v1_real()(r), wr * wr - dw, 1e-6 * std::max(1.0, std::abs(wr * wr)));
        EXPECT_NEAR(p.v2_real()(r), wr * wr + dw, 1e-6 * std::max(1.0, std::abs(wr * wr)));
        EXPECT_NEAR(p.v2_real()(r) - p.v1_real()(r), -2 * a / (r * r), 1e-12 * std::max(1.0, std::abs(a / (r * r))));
    }
}

TEST(PartnerPotentials, ComplexCoefficientsRefuseRealView) {
    const auto w = electric::superpotential(electric::ElectricImpurity::with_charge(0.6), {kHalf, 0});
    EXPECT_FALSE(w.is_real());
    EXPECT_THROW(partner_potentials(w).v1_real(), NonHermitianFactorization);
}

TEST(Ladder, FreeCaseOnThreeNodes) {
    const auto grid = RadialGrid::from_nodes({1.0, 1.5, 3.0});
    const auto ops = ladder_matrices(RadialSuperpotential::real(0.0, 0.0), grid);
    ASSERT_EQ(ops.lowering.rows(), 2);
    ASSERT_EQ(ops.lowering.cols(), 1);
    const double m = std::sqrt(grid.node_weight(1));
    // Forward difference in the symmetric (weighted) representation.
    EXPECT_NEAR(ops.lowering.coeff(0, 0), 1.0 / std::sqrt(0.5) / m, 1e-15);
    EXPECT_NEAR(ops.lowering.coeff(1, 0), -1.0 / std::sqrt(1.5) / m, 1e-15);
    EXPECT_EQ(Eigen::MatrixXd(ops.raising), Eigen::MatrixXd(ops.lowering).transpose());
    EXPECT_EQ(ops.partner1.size(), 1);
    EXPECT_EQ(ops.partner2.size(), 2);
    EXPECT_NEAR(ops.partner2.off()[0], ops.lowering.coeff(0, 0) * ops.lowering.coeff(1, 0), 1e-15);
}

TEST(Ladder, PartnersEqualDenseProducts) {
    const auto grid = RadialGrid::sinh(1e-3, 30.0, 2.0, 300);
    const auto ops = ladder_matrices(RadialSuperpotential::real(1.3, 0.7), grid);
    const Eigen::MatrixXd a(ops.lowering);
    const Eigen::MatrixXd at(ops.raising);
    EXPECT_EQ(at, a.transpose());
    const Eigen::MatrixXd p1 = at * a, p2 = a * at;
    EXPECT_LE((dense(ops.partner1) - p1).cwiseAbs().maxCoeff(), 1e-14 * p1.cwiseAbs().maxCoeff());
    EXPECT_LE((dense(ops.partner2) - p2).cwiseAbs().maxCoeff(), 1e-14 * p2.cwiseAbs().maxCoeff());
}

TEST(Ladder, ComplexSuperpotentialRefused) {
    const auto w = electric::superpotential(electric::ElectricImpurity::with_charge(0.6), {kHalf, 0});
    EXPECT_THROW(ladder_matrices(w, oracle::default_grid(1.0)), NonHermitianFactorization);
}

TEST(Ladder, ContinuumLimitOfFirstPartner) {
    // Lowest eigenvalue of A^dagger A approaches the lowest eigenvalue of -d^2 + V1.
    const auto imp = electric::ElectricImpurity::with_charge(0.3);
    const QuantumNumbers q{kHalf, 1};
    const auto w = electric::superpotential(imp, q);
    const auto grid = oracle::default_grid(electric::decay_rate(electric::bound_energy(imp, q).value));
    const auto ops = ladder_matrices(w, grid);
    const auto direct = oracle::schrodinger_eigen(partner_potentials(w).v1_real(), grid, 1).front().eigenvalue;
    EXPECT_LE(oracles::rel(ops.partner1.eigenvalue(0), direct), 1e-4);
}

TEST(SusyAlgebra, ResidualsAtRoundingLevel) {
    auto g = oracles::rng(37);
    for (int i = 0; i < 12; ++i) {
        const double a = oracles::uniform(g, 0.05, 4.0), b = oracles::uniform(g, 0.05, 2.0);
        const int points = 1000 + 500 * (i % 4);
        const auto ops = ladder_matrices(RadialSuperpotential::real(a, b), RadialGrid::sinh(1e-4, 40.0 / b, 3.0, points));
        const auto r = susy_algebra_check(ops, 1e-12);
        EXPECT_TRUE(r.passed) << a << " " << b << ": " << r.nilpotency << " " << r.anticommutator << " " << r.commutator;
        EXPECT_EQ(r.nilpotency, 0.0);
    }
}

TEST(SusyAlgebra, DimensionMismatchDetected) {
    auto ops = ladder_matrices(RadialSuperpotential::real(1.0, 1.0), RadialGrid::uniform(0.1, 10.0, 120));
    ops.partner2 = ops.partner1;
    EXPECT_THROW(susy_algebra_check(ops, 1e-12), DimensionMismatch);
}

TEST(Isospectrality, NonzeroSpectraPair) {
    auto g = oracles::rng(41);
    for (int i = 0; i < 10; ++i) {
        const double a = oracles::uniform(g, 0.1, 3.0), b = oracles::uniform(g, 0.1, 2.0);
        const auto ops = ladder_matrices(RadialSuperpotential::real(a, b), RadialGrid::sinh(1e-4, 40.0 / b, 3.0, 1500));
        const auto r = isospectrality_check(ops, 5);
        EXPECT_LE(r.max_relative_mismatch, 1e-10) << a << " " << b;
        ASSERT_TRUE(r.extra_zero_mode.has_value());
        EXPECT_EQ(*r.extra_zero_mode, PartnerSector::second);
    }
}

TEST(Isospectrality, ElectricGroundStateZeroMode) {
    const auto imp = electric::ElectricImpurity::with_charge(0.3);
    const QuantumNumbers q{kHalf, 0};
    const auto ops = ladder_matrices(electric::superpotential(imp, q),
                                     oracle::default_grid(electric::decay_rate(electric::bound_energy(imp, q).value)));
    const auto r = isospectrality_check(ops, 4);
    ASSERT_TRUE(r.extra_zero_mode.has_value());
    EXPECT_EQ(*r.extra_zero_mode, PartnerSector::second);
    EXPECT_LE(std::abs(r.zero_mode_eigenvalue), 1e-6);
    EXPECT_TRUE(r.zero_mode_normalizable);
    EXPECT_LE(r.max_relative_mismatch, 1e-10);
    // The unpaired state is node-free and annihilated by A^dagger.
    const auto lvl = oracle::factorized_level(ops, PartnerSector::second, 0);
    EXPECT_EQ(lvl.nodes, 0);
    EXPECT_LE(annihilation_residual(ops), 1e-8);
}

TEST(Isospectrality, MagneticPairing) {
    const auto imp = magnetic::MagneticImpurity::from_beta(1.0);
    const auto ops = ladder_matrices(magnetic::superpotential(imp, kHalf), oracle::default_grid(0.14));
    const auto r = isospectrality_check(ops, 4);
    EXPECT_LE(r.max_relative_mismatch, 1e-10);
    ASSERT_TRUE(r.extra_zero_mode.has_value());
    EXPECT_TRUE(r.zero_mode_normalizable);
}

TEST(HermiticityDefect, ZeroIffSuperpotentialReal) {
    const auto grid = RadialGrid::sinh(1e-4, 40.0, 3.0, 1000);
    for (double g : {0.05, 0.3, 0.45, 0.55, 0.6, 0.9}) {
        const auto imp = electric::ElectricImpurity::with_charge(g);
        const auto w = electric::superpotential(imp, {kHalf, 0});
        const double defect = hermiticity_defect(w, grid);
        if (w.is_real())
            EXPECT_LE(defect, 1e-14) << g;
        else
            EXPECT_GT(defect, 0.1) << g;
    }
    for (double beta : {0.1, 1.0, 10.0})
        for (int tj : {1, 3, 7})
            EXPECT_EQ(hermiticity_defect(magnetic::superpotential(magnetic::MagneticImpurity::from_beta(beta),
                                                                  HalfInteger::from_twice(tj)),
                                         grid),
                      0.0);
}

TEST(Superpotential, SignedSquareOfInverseCoefficient) {
    const auto sub = electric::superpotential(electric::ElectricImpurity::with_charge(0.3), {kHalf, 0});
    const auto sup = electric::superpotential(electric::ElectricImpurity::with_charge(0.6), {kHalf, 0});
    EXPECT_NEAR(sub.inverse_coeff_sq(), 0.16, 1e-15);
    EXPECT_NEAR(sup.inverse_coeff_sq(), -0.11, 1e-15);
    EXPECT_NEAR(sup(2.0).real(), 0.0, 1e-15);
    EXPECT_NE(sup(2.0).imag(), 0.0);
}
