#pragma once

// Independent numerical checks of the closed-form levels:
//  * three-point finite-volume discretization of -d^2/dr^2 + V(r) (Dirichlet ends),
//    solved by Sturm bisection;
//  * eigenvalues of the discrete factorized partners A^dagger A, A A^dagger;
//  * grid doubling with Richardson extrapolation;
//  * RK4 shooting of the first-order radial Dirac system in s = ln r.

#include <boost/math/tools/roots.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gsusy/electric.hpp"
#include "gsusy/error.hpp"
#include "gsusy/grid.hpp"
#include "gsusy/magnetic.hpp"
#include "gsusy/susy.hpp"
#include "gsusy/tridiagonal.hpp"

namespace gsusy::oracle {

struct EigenSolveResult {
    double eigenvalue = 0.0;
    std::vector<double> r;   ///< sample positions
    std::vector<double> psi; ///< wavefunction samples, unit norm in the grid inner product
    int nodes = 0;           ///< interior sign changes
    int level = 0;           ///< 0-based index within the solved operator
    double error_estimate = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr int kDefaultPoints = 4000;

/// r in [1e-4, span / decay], sinh-graded: logarithmic up to r ~ 3 and nearly uniform
/// beyond, where the bound states carry most of their weight.
inline RadialGrid default_grid(double decay_rate, int points = kDefaultPoints, double span = 40.0) {
    if (!(decay_rate > 0.0)) throw DomainError("default_grid: decay rate must be positive");
    const double r_max = span / decay_rate;
    return RadialGrid::sinh(1e-4, r_max, std::min(3.0, 0.1 * r_max), points);
}

/// Symmetric form of -d^2/dr^2 + V on the interior nodes (unknowns scaled by sqrt of
/// the dual-cell widths).
template <class Potential>
SymTridiagonal schrodinger_operator(const Potential& v, const RadialGrid& grid) {
    const int n = grid.interior_size();
    std::vector<double> d(n), e(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i) {
        const int node = i + 1;
        const double vi = static_cast<double>(v(grid[node]));
        if (!std::isfinite(vi))
            throw GridUnderflow("grid underflow: potential not finite at r = " + std::to_string(grid[node]));
        const double m = grid.node_weight(node);
        d[i] = (1.0 / grid.cell_width(node - 1) + 1.0 / grid.cell_width(node)) / m + vi;
        if (i + 1 < n) e[i] = -1.0 / (grid.cell_width(node) * std::sqrt(m * grid.node_weight(node + 1)));
    }
    return SymTridiagonal(std::move(d), std::move(e));
}

namespace detail {

inline EigenSolveResult make_result(const SymTridiagonal& t, int level, std::vector<double> r,
                                    const std::function<std::vector<double>(const std::vector<double>&)>& unscale) {
    EigenSolveResult res;
    res.level = level;
    res.eigenvalue = t.eigenvalue(level);
    res.r = std::move(r);
    res.psi = unscale(t.eigenvector(res.eigenvalue));
    res.nodes = count_sign_changes(res.psi);
    return res;
}

} // namespace detail

/// Lowest k levels of -d^2/dr^2 + V(r).
template <class Potential>
std::vector<EigenSolveResult> schrodinger_eigen(const Potential& v, const RadialGrid& grid, int k) {
    if (k < 1 || k > grid.interior_size()) throw DomainError("schrodinger_eigen: bad level count");
    const auto t = schrodinger_operator(v, grid);
    std::vector<double> r(grid.nodes().begin() + 1, grid.nodes().end() - 1);
    auto unscale = [&grid](const std::vector<double>& x) {
        std::vector<double> u(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) u[i] = x[i] / std::sqrt(grid.node_weight(int(i) + 1));
        return u;
    };
    std::vector<EigenSolveResult> out;
    for (int level = 0; level < k; ++level) out.push_back(detail::make_result(t, level, r, unscale));
    return out;
}

/// Single level of a factorized partner.
inline EigenSolveResult factorized_level(const LadderOperators& ops, PartnerSector sector, int level) {
    if (sector == PartnerSector::first) {
        std::vector<double> r(ops.grid.nodes().begin() + 1, ops.grid.nodes().end() - 1);
        return detail::make_result(ops.partner1, level, std::move(r),
                                   [&ops](const std::vector<double>& x) { return ops.node_samples(x); });
    }
    std::vector<double> r;
    for (int k = 0; k < ops.cell_dim(); ++k) r.push_back(ops.grid.cell_center(k));
    return detail::make_result(ops.partner2, level, std::move(r),
                               [&ops](const std::vector<double>& x) { return ops.cell_samples(x); });
}

inline std::vector<EigenSolveResult> factorized_eigen(const LadderOperators& ops, PartnerSector sector, int k) {
    std::vector<EigenSolveResult> out;
    for (int level = 0; level < k; ++level) out.push_back(factorized_level(ops, sector, level));
    return out;
}

using EigenTask = std::function<EigenSolveResult(const RadialGrid&)>;

struct RefinedEigen {
    EigenSolveResult result;   ///< finest-grid solve, error_estimate = last change
    double extrapolated = 0.0; ///< Richardson value assuming O(h^2)
    bool converged = false;
    int doublings = 0;
    int points = 0;
    std::vector<double> history;
};

/// Halves the spacing until two successive eigenvalues differ by at most tol.
/// Non-convergence is reported through the flag, never thrown.
inline RefinedEigen refine_until(const EigenTask& task, const RadialGrid& initial, double tol, int max_doublings) {
    if (!(tol > 0.0)) throw DomainError("refine_until: tol must be positive");
    RefinedEigen out;
    RadialGrid grid = initial;
    EigenSolveResult prev = task(grid);
    out.history.push_back(prev.eigenvalue);
    out.result = prev;
    out.extrapolated = prev.eigenvalue;
    out.points = grid.size();
    for (int d = 1; d <= max_doublings; ++d) {
        grid = grid.refined();
        EigenSolveResult cur = task(grid);
        out.history.push_back(cur.eigenvalue);
        const double change = cur.eigenvalue - prev.eigenvalue;
        cur.error_estimate = std::abs(change);
        out.result = cur;
        out.extrapolated = cur.eigenvalue + change / 3.0;
        out.doublings = d;
        out.points = grid.size();
        if (std::abs(change) <= tol) {
            out.converged = true;
            break;
        }
        prev = std::move(cur);
    }
    return out;
}

/// y' = (K/r + N(eps)) y for the spinor y = (upper, lower). K carries every 1/r term,
/// N the constant terms at the trial energy.
struct FirstOrderSystem {
    using Mat = std::array<std::array<double, 2>, 2>;
    Mat origin;                              ///< K
    std::function<Mat(double)> far_field;    ///< eps -> N(eps)
    std::function<double(double)> decay;     ///< eps -> decay rate at infinity
    double energy_floor = 0.0;               ///< admissible bracket is inside (floor, ceiling)
    double energy_ceiling = 1.0;
};

/// Coulomb problem: G' = -(j/r) G + (eps + g/r - 1) F, F' = (j/r) F - (eps + g/r + 1) G.
inline FirstOrderSystem electric_system(const electric::ElectricImpurity& imp, HalfInteger j) {
    auto rot = electric::classify(imp, j);
    if (rot.classification != electric::Criticality::subcritical) throw CollapseRegimeError(rot.nu_sq);
    const double jv = j.value();
    FirstOrderSystem s;
    s.origin = {{{-jv, imp.g}, {-imp.g, jv}}};
    s.far_field = [](double eps) { return FirstOrderSystem::Mat{{{0.0, eps - 1.0}, {-(eps + 1.0), 0.0}}}; };
    s.decay = [](double eps) { return electric::decay_rate(eps); };
    s.energy_floor = 0.0;
    s.energy_ceiling = 1.0;
    return s;
}

/// Magnetic problem: g' = -(j/r - beta) g + (eps - 1) h, h' = (j/r - beta) h - (eps + 1) g.
inline FirstOrderSystem magnetic_system(const magnetic::MagneticImpurity& imp, HalfInteger j) {
    if (!j.is_half_odd() || !j.positive())
        throw InvalidQuantumNumbers("unsupported sector: magnetic shooting requires half-integer j > 0");
    const double jv = j.value();
    const double beta = imp.beta();
    FirstOrderSystem s;
    s.origin = {{{-jv, 0.0}, {0.0, jv}}};
    s.far_field = [beta](double eps) {
        return FirstOrderSystem::Mat{{{beta, eps - 1.0}, {-(eps + 1.0), -beta}}};
    };
    s.decay = [imp](double eps) { return magnetic::decay_rate(imp, eps); };
    s.energy_floor = 1.0;
    s.energy_ceiling = std::sqrt(1.0 + beta * beta);
    return s;
}

struct ShootingOptions {
    double r_start = 1e-8;      ///< outward start radius
    double decay_lengths = 30.0; ///< r_max = decay_lengths / k at the bracket's slowest decay
    double step = 1e-3;          ///< RK4 step in s = ln r
    int samples = 16;            ///< bracket subdivisions when searching for a sign change
};

namespace detail {

using Vec2 = std::array<double, 2>;

inline Vec2 eigenvector_2x2(const FirstOrderSystem::Mat& m, double lambda) {
    Vec2 v;
    if (std::abs(m[0][1]) > 0.0)
        v = {m[0][1], lambda - m[0][0]};
    else if (std::abs(m[1][0]) > 0.0)
        v = {lambda - m[1][1], m[1][0]};
    else
        v = std::abs(lambda - m[0][0]) < std::abs(lambda - m[1][1]) ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    const double norm = std::hypot(v[0], v[1]);
    return {v[0] / norm, v[1] / norm};
}

// Larger eigenvalue of a 2x2 matrix with real spectrum.
inline double upper_eigenvalue(const FirstOrderSystem::Mat& m) {
    const double tr = m[0][0] + m[1][1];
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    const double disc = 0.25 * tr * tr - det;
    if (disc < 0.0) throw DomainError("shooting: complex indicial exponents (fall to centre)");
    return 0.5 * tr + std::sqrt(disc);
}

// dy/ds = (K + r N) y integrated in s = ln r from s0 to s1 with n steps.
inline Vec2 integrate(const FirstOrderSystem::Mat& k, const FirstOrderSystem::Mat& nf, Vec2 y, double s0,
                      double s1, int steps) {
    const double ds = (s1 - s0) / steps;
    auto rhs = [&](double s, const Vec2& v) {
        const double r = std::exp(s);
        return Vec2{(k[0][0] + r * nf[0][0]) * v[0] + (k[0][1] + r * nf[0][1]) * v[1],
                    (k[1][0] + r * nf[1][0]) * v[0] + (k[1][1] + r * nf[1][1]) * v[1]};
    };
    double s = s0;
    for (int i = 0; i < steps; ++i) {
        const Vec2 k1 = rhs(s, y);
        const Vec2 k2 = rhs(s + 0.5 * ds, {y[0] + 0.5 * ds * k1[0], y[1] + 0.5 * ds * k1[1]});
        const Vec2 k3 = rhs(s + 0.5 * ds, {y[0] + 0.5 * ds * k2[0], y[1] + 0.5 * ds * k2[1]});
        const Vec2 k4 = rhs(s + ds, {y[0] + ds * k3[0], y[1] + ds * k3[1]});
        y[0] += ds / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += ds / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        s += ds;
        const double norm = std::hypot(y[0], y[1]);
        if (norm > 1e150) y = {y[0] / norm, y[1] / norm};
    }
    return y;
}

} // namespace detail

/// Normalised spinor mismatch at the matching radius,
/// (y_out x y_in) / (|y_out| |y_in|): the difference of lower/upper ratios with the
/// denominators cleared, so it has no poles in eps.
struct ShootingMismatch {
    FirstOrderSystem system;
    double r_start, r_match, r_max, step;

    double operator()(double eps) const {
        const auto nf = system.far_field(eps);
        const double lam = detail::upper_eigenvalue(system.origin);
        detail::Vec2 out = detail::eigenvector_2x2(system.origin, lam);
        const double k = system.decay(eps);
        detail::Vec2 in = detail::eigenvector_2x2(nf, -k);
        const double s0 = std::log(r_start), sm = std::log(r_match), s1 = std::log(r_max);
        const int n_out = std::max(1, int(std::ceil((sm - s0) / step)));
        const int n_in = std::max(1, int(std::ceil((s1 - sm) / step)));
        out = detail::integrate(system.origin, nf, out, s0, sm, n_out);
        in = detail::integrate(system.origin, nf, in, s1, sm, n_in);
        return (out[0] * in[1] - out[1] * in[0]) / (std::hypot(out[0], out[1]) * std::hypot(in[0], in[1]));
    }
};

inline ShootingMismatch make_mismatch(const FirstOrderSystem& sys, double lo, double hi, const ShootingOptions& opt) {
    const double k_slow = std::min(sys.decay(lo), sys.decay(hi));
    const double k_mid = sys.decay(0.5 * (lo + hi));
    if (!(k_slow > 0.0)) throw DomainError("shooting: bracket touches the continuum edge");
    const double r_max = opt.decay_lengths / k_slow;
    const double r_match = std::clamp(1.0 / k_mid, 10.0 * opt.r_start, 0.5 * r_max);
    return ShootingMismatch{sys, opt.r_start, r_match, r_max, opt.step};
}

/// Bound level inside (lo, hi) located by the sign change of the spinor mismatch.
inline ScaledEnergy shoot(const FirstOrderSystem& sys, double lo, double hi, const ShootingOptions& opt = {}) {
    if (!(lo < hi) || lo <= sys.energy_floor || hi >= sys.energy_ceiling)
        throw DomainError("shooting: bracket must lie strictly inside the gap");
    const auto f = make_mismatch(sys, lo, hi, opt);
    double a = lo, fa = f(lo);
    for (int i = 1; i <= opt.samples; ++i) {
        const double b = lo + (hi - lo) * i / opt.samples;
        const double fb = f(b);
        if (fa == 0.0) return ScaledEnergy{a, true, 0.0};
        if ((fa < 0.0) != (fb < 0.0)) {
            std::uintmax_t max_iter = 200;
            auto [x0, x1] = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                              boost::math::tools::eps_tolerance<double>(48), max_iter);
            return ScaledEnergy{0.5 * (x0 + x1), true, 0.0};
        }
        a = b;
        fa = fb;
    }
    throw NoLevelInBracket("no level in bracket (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
}

inline ScaledEnergy shoot_first_order(const electric::ElectricImpurity& imp, HalfInteger j, double lo, double hi,
                                      const ShootingOptions& opt = {}) {
    return shoot(electric_system(imp, j), lo, hi, opt);
}

inline ScaledEnergy shoot_first_order(const magnetic::MagneticImpurity& imp, HalfInteger j, double lo, double hi,
                                      const ShootingOptions& opt = {}) {
    return shoot(magnetic_system(imp, j), lo, hi, opt);
}

} // namespace gsusy::oracle
