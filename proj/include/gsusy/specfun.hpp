#pragma once

// Special functions used by the matching conditions: gamma, Bessel J of real order,
// spherical Bessel j_l, Tricomi U and the Whittaker function W.
//
// Gamma and the Bessel functions are thin checked wrappers over the C++17
// mathematical special functions. Tricomi U is computed from its Laplace
// integral (a > 0) and extended to a <= 0 with the contiguity recurrence in a,
// which covers integer b without a separate logarithmic series.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "gsusy/error.hpp"

namespace gsusy::specfun {

namespace detail {

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite argument");
}

} // namespace detail

inline double gamma_fn(double x) {
    detail::require_finite(x, "gamma_fn");
    if (detail::is_nonpositive_integer(x)) throw GammaPoleError(static_cast<int>(-x));
    return std::tgamma(x);
}

/// 1/Gamma(x), zero at the poles.
inline double reciprocal_gamma(double x) {
    detail::require_finite(x, "reciprocal_gamma");
    if (detail::is_nonpositive_integer(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

inline double bessel_j(double order, double x) {
    detail::require_finite(order, "bessel_j");
    detail::require_finite(x, "bessel_j");
    if (order < 0.0 || x < 0.0) throw DomainError("bessel_j: order and argument must be non-negative");
    return std::cyl_bessel_j(order, x);
}

inline double spherical_bessel_j(int l, double x) {
    detail::require_finite(x, "spherical_bessel_j");
    if (l < 0 || x <= 0.0) throw DomainError("spherical_bessel_j: need l >= 0 and x > 0");
    return std::sph_bessel(static_cast<unsigned>(l), x);
}

namespace detail {

// U(a,b,x) for a > 0 from
//   U = 1/Gamma(a) * int_0^inf exp(-x t) t^(a-1) (1+t)^(b-a-1) dt.
// The segment touching t = 0 carries the algebraic endpoint behaviour and goes to
// tanh-sinh (in s = t^a when a < 1, which removes the singularity). The rest is
// accumulated over doubling segments [T_k, 2 T_k] with Gauss-Kronrod until a segment
// adds less than 1e-18 of the running total past the bulk of the mass.
inline double tricomi_u_laplace(double a, double b, double x) {
    using boost::math::quadrature::gauss_kronrod;
    constexpr double rel_tol = 1e-13;

    auto integrand_t = [=](double t) {
        if (t <= 0.0) return a == 1.0 ? 1.0 : 0.0;
        return std::exp(-x * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t));
    };
    auto integrand_s = [=](double s) {
        if (s <= 0.0) return 1.0 / a;
        const double t = std::pow(s, 1.0 / a);
        return std::exp(-x * t + (b - a - 1.0) * std::log1p(t)) / a;
    };

    // Mass sits at t ~ max(1, |b|+|a|)/x; do not stop before passing it.
    const double bulk = (2.0 + std::abs(a) + std::abs(b)) / x;
    double t_hi = std::min(1.0, bulk);
    boost::math::quadrature::tanh_sinh<double> origin;
    double total = a < 1.0 ? origin.integrate(integrand_s, 0.0, std::pow(t_hi, a), rel_tol)
                           : origin.integrate(integrand_t, 0.0, t_hi, rel_tol);
    for (int k = 0; k < 200; ++k) {
        const double t_next = 2.0 * t_hi;
        const double piece = gauss_kronrod<double, 31>::integrate(integrand_t, t_hi, t_next, 15, rel_tol);
        total += piece;
        t_hi = t_next;
        if (t_hi > bulk && std::abs(piece) <= 1e-18 * std::abs(total)) break;
    }
    return total * reciprocal_gamma(a);
}

} // namespace detail

/// Tricomi confluent hypergeometric function U(a, b, x), x > 0.
inline double tricomi_u(double a, double b, double x) {
    detail::require_finite(a, "tricomi_u");
    detail::require_finite(b, "tricomi_u");
    detail::require_finite(x, "tricomi_u");
    if (x <= 0.0) throw DomainError("tricomi_u: x must be positive");
    if (a == 0.0) return 1.0;
    if (a > 0.0) return detail::tricomi_u_laplace(a, b, x);
    if (a == std::floor(a)) {
        // Polynomial case: U(-m, b, x) = (-1)^m sum_s C(m,s) (b+s)_{m-s} (-x)^s.
        const int m = static_cast<int>(-a);
        double sum = 0.0;
        double binom = 1.0;
        for (int s = 0; s <= m; ++s) {
            double rising = 1.0;
            for (int i = 0; i < m - s; ++i) rising *= b + s + i;
            sum += binom * rising * std::pow(-x, s);
            binom = binom * (m - s) / (s + 1);
        }
        return (m % 2 == 0) ? sum : -sum;
    }

    // Shift to a' = a + K > 0 and recur downward:
    //   U(c-1) = (x + 2c - b) U(c) - c (c - b + 1) U(c+1).
    // U is minimal as a -> +inf, so decreasing a is the stable direction.
    const int shift = static_cast<int>(std::floor(-a)) + 1;
    double c = a + shift;
    double u_next = detail::tricomi_u_laplace(c + 1.0, b, x);
    double u_curr = detail::tricomi_u_laplace(c, b, x);
    for (int k = 0; k < shift; ++k) {
        double u_prev = (x + 2.0 * c - b) * u_curr - c * (c - b + 1.0) * u_next;
        u_next = u_curr;
        u_curr = u_prev;
        c -= 1.0;
    }
    return u_curr;
}

struct WhittakerParams {
    double kappa = 0.0;
    double mu = 0.0;
    double x = 1.0;

    void validate() const {
        detail::require_finite(kappa, "WhittakerParams");
        detail::require_finite(mu, "WhittakerParams");
        detail::require_finite(x, "WhittakerParams");
        if (x <= 0.0) throw DomainError("WhittakerParams: x must be positive");
    }
};

/// W_{kappa,mu}(x) = exp(-x/2) x^(mu+1/2) U(mu - kappa + 1/2, 1 + 2 mu, x).
inline double whittaker_w(const WhittakerParams& p) {
    p.validate();
    return std::exp(-0.5 * p.x) * std::pow(p.x, p.mu + 0.5) *
           tricomi_u(p.mu - p.kappa + 0.5, 1.0 + 2.0 * p.mu, p.x);
}

/// Small-argument form of W_{kappa,mu}: the two power branches x^(1/2 -+ mu) with
/// their Gamma-ratio weights, each carrying the first-order Kummer correction
/// 1 + (a/b - 1/2) x of its exp(-x/2) M(a, b, x) factor.
inline double whittaker_small_x(const WhittakerParams& p) {
    p.validate();
    const double two_mu = 2.0 * p.mu;
    if (two_mu == std::round(two_mu))
        throw LogarithmicCaseError("whittaker_small_x: 2*mu is an integer (logarithmic case)");
    const double k = p.kappa, m = p.mu, x = p.x;

    auto branch = [&](double sign) {
        // sign = -1: x^(1/2 - mu) branch with weight Gamma(2mu)/Gamma(1/2 - kappa + mu).
        double weight = std::tgamma(-sign * two_mu) * reciprocal_gamma(0.5 - k - sign * m);
        double a = 0.5 + sign * m - k;
        double b = 1.0 + sign * two_mu;
        double correction = 1.0 + (a / b - 0.5) * x;
        return weight * std::pow(x, 0.5 + sign * m) * correction;
    };
    return branch(-1.0) + branch(+1.0);
}

/// Leading two-term form exactly as the bare asymptotic expansion (no O(x) corrections).
inline double whittaker_two_term(const WhittakerParams& p) {
    p.validate();
    const double two_mu = 2.0 * p.mu;
    if (two_mu == std::round(two_mu))
        throw LogarithmicCaseError("whittaker_two_term: 2*mu is an integer (logarithmic case)");
    return std::tgamma(two_mu) * reciprocal_gamma(0.5 - p.kappa + p.mu) * std::pow(p.x, 0.5 - p.mu) +
           std::tgamma(-two_mu) * reciprocal_gamma(0.5 - p.kappa - p.mu) * std::pow(p.x, 0.5 + p.mu);
}

} // namespace gsusy::specfun
