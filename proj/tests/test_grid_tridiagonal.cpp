#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "gsusy/grid.hpp"
#include "gsusy/tridiagonal.hpp"
#include "support/oracles.hpp"

using namespace gsusy;

TEST(RadialGrid, FactoriesRespectInvariants) {
    for (const auto& g : {RadialGrid::uniform(0.1, 5.0, 100), RadialGrid::logarithmic(1e-4, 50.0, 250),
                          RadialGrid::sinh(1e-4, 80.0, 3.0, 400)}) {
        EXPECT_GE(g.size(), RadialGrid::kMinPoints);
        EXPECT_EQ(g.interior_size(), g.size() - 2);
        for (int i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
    }
    EXPECT_DOUBLE_EQ(RadialGrid::logarithmic(1e-4, 50.0, 250).r_max(), 50.0);
    EXPECT_DOUBLE_EQ(RadialGrid::sinh(1e-4, 80.0, 3.0, 400).r_min(), 1e-4);
}

TEST(RadialGrid, RejectsBadInput) {
    EXPECT_THROW(RadialGrid::uniform(0.1, 5.0, 99), DomainError);
    EXPECT_THROW(RadialGrid::uniform(0.0, 5.0, 200), DomainError);
    EXPECT_THROW(RadialGrid::logarithmic(5.0, 5.0, 200), DomainError);
    EXPECT_THROW(RadialGrid::sinh(1e-4, 5.0, 0.0, 200), DomainError);
    EXPECT_THROW(RadialGrid::from_nodes({1.0, 2.0}), DomainError);
    EXPECT_THROW(RadialGrid::from_nodes({1.0, 3.0, 2.0}), DomainError);
    EXPECT_NO_THROW(RadialGrid::from_nodes({1.0, 2.0, 3.0}));
}

TEST(RadialGrid, RefinementHalvesEverySpacing) {
    for (const auto& g : {RadialGrid::uniform(0.1, 5.0, 120), RadialGrid::logarithmic(1e-3, 20.0, 120),
                          RadialGrid::sinh(1e-4, 40.0, 3.0, 120), RadialGrid::from_nodes({0.5, 1.0, 4.0})}) {
        const auto f = g.refined();
        ASSERT_EQ(f.size(), 2 * g.size() - 1);
        for (int i = 0; i < g.size(); ++i) EXPECT_NEAR(f[2 * i], g[i], 1e-12 * g[i]);
        EXPECT_EQ(f.spacing(), g.spacing());
    }
}

TEST(RadialGrid, CellAndDualWidths) {
    const auto g = RadialGrid::from_nodes({1.0, 2.0, 4.0, 8.0});
    EXPECT_DOUBLE_EQ(g.cell_width(1), 2.0);
    EXPECT_DOUBLE_EQ(g.cell_center(2), 6.0);
    EXPECT_DOUBLE_EQ(g.node_weight(1), 1.5);
    EXPECT_DOUBLE_EQ(g.node_weight(2), 3.0);
}

namespace {

SymTridiagonal random_tridiagonal(int n, unsigned long long seed) {
    auto g = oracles::rng(seed);
    std::vector<double> d(n), e(n - 1);
    for (auto& v : d) v = oracles::uniform(g, -5.0, 5.0);
    for (auto& v : e) v = oracles::uniform(g, -2.0, 2.0);
    return SymTridiagonal(d, e);
}

Eigen::VectorXd dense_spectrum(const SymTridiagonal& t) {
    const int n = t.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = t.diag()[i];
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = t.off()[i];
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
}

} // namespace

TEST(SymTridiagonal, BisectionMatchesDenseSolver) {
    for (unsigned long long seed = 1; seed <= 5; ++seed) {
        const auto t = random_tridiagonal(60, seed);
        const auto ref = dense_spectrum(t);
        for (int k = 0; k < t.size(); ++k) EXPECT_NEAR(t.eigenvalue(k), ref(k), 1e-12 * std::max(1.0, std::abs(ref(k))));
    }
}

TEST(SymTridiagonal, CountBelowIsSturmCount) {
    const auto t = random_tridiagonal(40, 9);
    const auto ref = dense_spectrum(t);
    for (double x : {-6.0, -1.0, 0.0, 0.3, 2.0, 7.0}) {
        const int expected = static_cast<int>(std::count_if(ref.begin(), ref.end(), [x](double v) { return v < x; }));
        EXPECT_EQ(t.count_below(x), expected) << x;
    }
}

TEST(SymTridiagonal, InverseIterationGivesEigenvectors) {
    const auto t = random_tridiagonal(80, 4);
    for (int k : {0, 1, 40, 79}) {
        const double lambda = t.eigenvalue(k);
        const auto v = t.eigenvector(lambda);
        const auto tv = t.apply(v);
        double res = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            res = std::max(res, std::abs(tv[i] - lambda * v[i]));
            norm += v[i] * v[i];
        }
        EXPECT_NEAR(norm, 1.0, 1e-12);
        EXPECT_LE(res, 1e-10 * t.max_abs_entry());
    }
}

TEST(SymTridiagonal, DimensionChecks) {
    EXPECT_THROW(SymTridiagonal({1.0, 2.0}, {1.0, 1.0}), DimensionMismatch);
    EXPECT_THROW(SymTridiagonal({}, {}), DimensionMismatch);
    SymTridiagonal t({1.0, 2.0}, {0.5});
    EXPECT_THROW(t.apply({1.0}), DimensionMismatch);
    EXPECT_THROW(t.eigenvalue(2), DomainError);
}

TEST(SignChanges, IgnoresTinyTails) {
    EXPECT_EQ(count_sign_changes({1.0, 0.5, -0.5, -1.0, 0.2}), 2);
    EXPECT_EQ(count_sign_changes({1.0, 0.5, 1e-12, -1e-12, 1e-13}), 0);
    EXPECT_EQ(count_sign_changes({0.0, 0.0}), 0);
}
