#pragma once

// Magnetic monopole impurity A_theta = lambda. Magnetic length ell = 2 phi_b / lambda,
// dimensionless coupling beta = n_g lambda_bar / ell. Gapped levels lie in (1, sqrt(1+beta^2)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "gsusy/error.hpp"
#include "gsusy/model.hpp"
#include "gsusy/specfun.hpp"
#include "gsusy/susy.hpp"

namespace gsusy::magnetic {

class MagneticImpurity {
public:
    static MagneticImpurity from_lambda(double lam, const MediumParams& medium = {}) {
        medium.validate();
        if (!std::isfinite(lam) || lam <= 0.0) throw DomainError("MagneticImpurity: lambda must be positive");
        return MagneticImpurity(lam, medium);
    }

    static MagneticImpurity from_beta(double beta, const MediumParams& medium = {}) {
        medium.validate();
        if (!std::isfinite(beta) || beta <= 0.0) throw DomainError("MagneticImpurity: beta must be positive");
        return MagneticImpurity(2.0 * medium.phi_b * beta / medium.length_unit(), medium);
    }

    double lambda() const noexcept { return lam_; }
    const MediumParams& medium() const noexcept { return medium_; }
    /// ell = 2 phi_b / lambda in physical length units.
    double magnetic_length() const noexcept { return 2.0 * medium_.phi_b / lam_; }
    double beta() const noexcept { return medium_.length_unit() / magnetic_length(); }

private:
    MagneticImpurity(double lam, const MediumParams& m) : lam_(lam), medium_(m) {}

    double lam_;
    MediumParams medium_;
};

/// sqrt(mass^2 + inv_ell^2 [1 - (j/(j+nb))^2]) in any consistent units.
inline double gapped_energy(double mass, double inv_ell, double j, int n_breve) {
    const double ratio = j / (j + n_breve);
    return std::sqrt(mass * mass + inv_ell * inv_ell * (1.0 - ratio) * (1.0 + ratio));
}

inline ScaledEnergy bound_energy_gapped(const MagneticImpurity& imp, const QuantumNumbers& q) {
    validate_quantum_numbers(q, ImpurityKind::magnetic);
    return ScaledEnergy{gapped_energy(1.0, imp.beta(), q.j.value(), q.n), true, 0.0};
}

/// w^2 = eps^2 - 1 = beta^2 [1 - (j/(j+nb))^2], eigenvalue of the factorized radial operator.
inline double susy_eigenvalue(const MagneticImpurity& imp, const QuantumNumbers& q) {
    validate_quantum_numbers(q, ImpurityKind::magnetic);
    const double ratio = q.j.value() / (q.j.value() + q.n);
    const double beta = imp.beta();
    return beta * beta * (1.0 - ratio) * (1.0 + ratio);
}

enum class Branch { positive, negative };

struct MasslessLevel {
    double energy_per_inverse_ell = 0.0; ///< eps * ell_lambda
    bool gap_edge_state = false;         ///< n = m + 1: zero energy, n-breve = 0
    int n = 0;
    int m = 0;

    /// Energy in internal units (1/ell = beta).
    double scaled(const MagneticImpurity& imp) const { return energy_per_inverse_ell * imp.beta(); }
};

/// eps_{n,m} = +-(1/ell) sqrt(1 - (2m+1)^2/(2n-1)^2), n > m >= 0.
inline MasslessLevel bound_energy_massless(int n, int m, Branch branch = Branch::positive) {
    if (m < 0 || n <= m) throw DomainError("bound_energy_massless: need n > m >= 0");
    const double ratio = (2.0 * m + 1.0) / (2.0 * n - 1.0);
    MasslessLevel lvl;
    lvl.energy_per_inverse_ell = std::sqrt((1.0 - ratio) * (1.0 + ratio));
    if (branch == Branch::negative) lvl.energy_per_inverse_ell = -lvl.energy_per_inverse_ell;
    lvl.gap_edge_state = (n == m + 1);
    lvl.n = n;
    lvl.m = m;
    return lvl;
}

/// Maps (n, m) to the gapped labels j = m + 1/2, n-breve = n - m - 1.
inline QuantumNumbers gapped_labels(int n, int m) {
    return QuantumNumbers{HalfInteger::from_twice(2 * m + 1), n - m - 1};
}

inline RadialSuperpotential superpotential(const MagneticImpurity& imp, HalfInteger j) {
    if (!j.is_half_odd()) throw InvalidQuantumNumbers("not half-integer: j = " + j.to_string());
    if (!j.positive()) throw InvalidQuantumNumbers("unsupported sector: magnetic impurity requires j > 0");
    return RadialSuperpotential::real(j.value(), imp.beta());
}

/// Decay rate k = sqrt(1 + beta^2 - eps^2) of a gapped level.
inline double decay_rate(const MagneticImpurity& imp, double eps) {
    const double beta = imp.beta();
    return std::sqrt(std::max(1.0 + beta * beta - eps * eps, 0.0));
}

/// W_{kappa, j+1/2}(x) / W_{kappa, j-1/2}(x) with kappa = j/(k ell). As x -> 0 it
/// vanishes like x when k ell = j/(j + n-breve) and grows like 1/x (1/(x ln x) for
/// j = 1/2) otherwise.
inline double whittaker_pole_ratio(HalfInteger j, double kappa, double x) {
    const double jv = j.value();
    return specfun::whittaker_w({kappa, jv + 0.5, x}) / specfun::whittaker_w({kappa, jv - 0.5, x});
}

struct RealityAudit {
    int evaluated = 0;
    int non_real = 0;
    int out_of_band = 0;
    double min_energy = std::numeric_limits<double>::infinity();
    double max_energy = -std::numeric_limits<double>::infinity();
    QuantumNumbers argmin{};
    QuantumNumbers argmax{};
    double band_top = 0.0; ///< sqrt(1 + beta^2)
};

/// Evaluates every admissible level with j <= j_max and n-breve <= n_max. The radicand
/// is taken through a complex square root so an imaginary part would be detected.
inline RealityAudit spectrum_reality_audit(const MagneticImpurity& imp, HalfInteger j_max, int n_max) {
    if (!j_max.is_half_odd() || !j_max.positive() || n_max < 1)
        throw DomainError("spectrum_reality_audit: need j_max >= 1/2 and n_max >= 1");
    RealityAudit a;
    const double beta = imp.beta();
    a.band_top = std::sqrt(1.0 + beta * beta);
    for (int tj = 1; tj <= j_max.twice; tj += 2) {
        for (int nb = 1; nb <= n_max; ++nb) {
            const double j = 0.5 * tj;
            const double ratio = j / (j + nb);
            const std::complex<double> radicand{1.0 + beta * beta * (1.0 - ratio * ratio), 0.0};
            const auto eps = std::sqrt(radicand);
            ++a.evaluated;
            if (eps.imag() != 0.0) {
                ++a.non_real;
                continue;
            }
            const double e = eps.real();
            if (!(e > 1.0 && e < a.band_top)) ++a.out_of_band;
            QuantumNumbers q{HalfInteger::from_twice(tj), nb};
            if (e < a.min_energy) {
                a.min_energy = e;
                a.argmin = q;
            }
            if (e > a.max_energy) {
                a.max_energy = e;
                a.argmax = q;
            }
        }
    }
    return a;
}

} // namespace gsusy::magnetic
