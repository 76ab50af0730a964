#pragma once

// Coulomb (electric monopole) impurity in internal units: effective charge g,
// nu^2 = j^2 - g^2, bound energies in (0, 1).

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "gsusy/error.hpp"
#include "gsusy/model.hpp"
#include "gsusy/specfun.hpp"
#include "gsusy/susy.hpp"

namespace gsusy::electric {

struct ElectricImpurity {
    double g = 0.0;

    static ElectricImpurity with_charge(double g) {
        if (!std::isfinite(g) || g <= 0.0) throw DomainError("ElectricImpurity: g must be positive and finite");
        return ElectricImpurity{g};
    }
};

enum class Criticality { subcritical, critical, supercritical };

inline std::string to_string(Criticality c) {
    switch (c) {
    case Criticality::subcritical: return "subcritical";
    case Criticality::critical: return "critical";
    case Criticality::supercritical: return "supercritical";
    }
    return "?";
}

/// Decoupling rotation U(eta) = exp(i eta sigma_y / 2) with sin(eta) = g/j.
struct RotationData {
    HalfInteger j;
    double g = 0.0;
    double nu_sq = 0.0;
    double sin_eta = 0.0;
    bool eta_is_real = true;
    double eta = 0.0;           ///< valid when eta_is_real
    double eta_imag_part = 0.0; ///< |Im eta| when sin(eta) exceeds 1 (Re eta = +-pi/2)
    Criticality classification = Criticality::subcritical;

    bool rotation_unitary() const noexcept { return eta_is_real; }
    double nu() const { return std::sqrt(nu_sq); }
};

inline RotationData classify(const ElectricImpurity& imp, HalfInteger j) {
    if (!j.is_half_odd()) throw InvalidQuantumNumbers("not half-integer: j = " + j.to_string());
    const double jv = j.value();
    const double aj = std::abs(jv);
    RotationData d;
    d.j = j;
    d.g = imp.g;
    d.nu_sq = (aj - imp.g) * (aj + imp.g);
    d.sin_eta = imp.g / jv;
    if (d.nu_sq > 0.0)
        d.classification = Criticality::subcritical;
    else if (d.nu_sq == 0.0)
        d.classification = Criticality::critical;
    else
        d.classification = Criticality::supercritical;
    d.eta_is_real = d.classification != Criticality::supercritical;
    if (d.eta_is_real) {
        d.eta = std::asin(d.sin_eta);
    } else {
        // sin(pi/2 + i t) = cosh t
        d.eta = std::copysign(0.5 * std::numbers::pi, d.sin_eta);
        d.eta_imag_part = std::acosh(std::abs(d.sin_eta));
    }
    return d;
}

namespace detail {

inline RotationData require_subcritical(const ElectricImpurity& imp, HalfInteger j) {
    auto rot = classify(imp, j);
    if (rot.classification != Criticality::subcritical) throw CollapseRegimeError(rot.nu_sq);
    return rot;
}

} // namespace detail

/// eps = [1 + g^2/(nu+n)^2]^{-1/2}.
inline ScaledEnergy bound_energy(const ElectricImpurity& imp, const QuantumNumbers& q) {
    validate_quantum_numbers(q, ImpurityKind::electric);
    auto rot = detail::require_subcritical(imp, q.j);
    const double s = rot.nu() + q.n;
    return ScaledEnergy{s / std::hypot(s, imp.g), true, 0.0};
}

/// SUSY eigenvalue in units of (n_g lambda_bar)^{-2}, explicit closed form
/// g^2 [(nu+n)^2 - nu^2] / ([(nu + n/2)^2 - n^2/4]^2 + (g nu)^2).
inline double susy_eigenvalue(const ElectricImpurity& imp, const QuantumNumbers& q) {
    validate_quantum_numbers(q, ImpurityKind::electric);
    auto rot = detail::require_subcritical(imp, q.j);
    const double nu = rot.nu();
    const double n = q.n;
    const double g2 = imp.g * imp.g;
    const double half = nu + 0.5 * n;
    const double inner = half * half - 0.25 * n * n;
    return g2 * ((nu + n) * (nu + n) - nu * nu) / (inner * inner + g2 * nu * nu);
}

/// The same eigenvalue through the energy: (eps j / nu)^2 - 1.
inline double susy_eigenvalue_from_energy(const ElectricImpurity& imp, const QuantumNumbers& q) {
    auto rot = detail::require_subcritical(imp, q.j);
    const double eps = bound_energy(imp, q).value;
    const double ratio = eps * q.j.value() / rot.nu();
    return ratio * ratio - 1.0;
}

/// W = nu/r - g eps/nu at a given scaled energy. For nu^2 < 0, nu = i sqrt(-nu^2)
/// and W is purely imaginary.
inline RadialSuperpotential superpotential_at(const ElectricImpurity& imp, HalfInteger j, double eps) {
    auto rot = classify(imp, j);
    if (rot.classification == Criticality::critical)
        throw CollapseRegimeError(rot.nu_sq);
    if (rot.nu_sq > 0.0) {
        const double nu = rot.nu();
        return RadialSuperpotential::real(nu, imp.g * eps / nu);
    }
    const complex nu{0.0, std::sqrt(-rot.nu_sq)};
    return RadialSuperpotential{nu, imp.g * eps / nu};
}

/// Superpotential at the level's own energy. Supercritical input has no bound energy;
/// the gap edge eps = 1 is used as reference and the result is flagged non-real.
inline RadialSuperpotential superpotential(const ElectricImpurity& imp, const QuantumNumbers& q) {
    validate_quantum_numbers(q, ImpurityKind::electric);
    auto rot = classify(imp, q.j);
    if (rot.classification == Criticality::subcritical)
        return superpotential_at(imp, q.j, bound_energy(imp, q).value);
    return superpotential_at(imp, q.j, 1.0);
}

/// C_in = J_{j+1/2}(g) / J_{j-1/2}(g), the R -> 0 limit of the inner spinor ratio.
inline double matching_inner_ratio(const ElectricImpurity& imp, HalfInteger j) {
    if (!j.positive()) throw DomainError("matching_inner_ratio: requires j > 0");
    detail::require_subcritical(imp, j);
    const double jv = j.value();
    const double den = specfun::bessel_j(jv - 0.5, imp.g);
    if (std::abs(den) < 1e-14) throw ResonantRegulatorError("resonant regulator: J_{j-1/2}(g) vanishes");
    return specfun::bessel_j(jv + 0.5, imp.g) / den;
}

/// Solves the pole condition g eps / omega = nu + n, omega = sqrt(1 - eps^2), on (0, 1).
inline ScaledEnergy eigenvalue_from_matching(const ElectricImpurity& imp, HalfInteger j, int n) {
    QuantumNumbers q{j, n};
    validate_quantum_numbers(q, ImpurityKind::electric);
    auto rot = detail::require_subcritical(imp, j);
    const double target = rot.nu() + n;
    // Cleared of the omega denominator: g eps - (nu+n) sqrt(1 - eps^2).
    auto f = [&](double eps) { return imp.g * eps - target * std::sqrt((1.0 - eps) * (1.0 + eps)); };
    double lo = 0.0, hi = 1.0;
    if (!(f(lo) < 0.0 && f(hi) > 0.0)) throw std::logic_error("eigenvalue_from_matching: bracket failure");
    std::uintmax_t max_iter = 200;
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f(lo), f(hi),
                                                    boost::math::tools::eps_tolerance<double>(52), max_iter);
    return ScaledEnergy{0.5 * (a + b), true, 0.0};
}

/// Exponential decay rate of a level, omega = sqrt(1 - eps^2).
inline double decay_rate(double eps) { return std::sqrt((1.0 - eps) * (1.0 + eps)); }

} // namespace gsusy::electric
