#pragma once

// Physical parameters, the dimensionless unit system and quantum-number rules.
//
// Internal units: lengths in n_g * lambda_bar, energies in 1/(n_g * lambda_bar),
// so the electric spectrum reads eps = [1 + g^2/(nu+n)^2]^{-1/2} and the gap edge is 1.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>

#include "gsusy/error.hpp"

namespace gsusy {

/// Half-integer stored as twice its value so parity checks are exact.
struct HalfInteger {
    int twice = 1;

    constexpr double value() const noexcept { return 0.5 * twice; }
    constexpr bool is_half_odd() const noexcept { return twice % 2 != 0; }
    constexpr bool positive() const noexcept { return twice > 0; }

    static constexpr HalfInteger from_twice(int t) noexcept { return HalfInteger{t}; }

    std::string to_string() const {
        if (twice % 2 == 0) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }

    /// Parses "1/2", "-3/2" or a plain integer "2" (which is later rejected as not half-integer).
    static HalfInteger parse(std::string_view text) {
        auto to_int = [&](std::string_view s) {
            int v = 0;
            if (!s.empty() && s.front() == '+') s.remove_prefix(1);
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size())
                throw DomainError("cannot parse half-integer '" + std::string(text) + "'");
            return v;
        };
        auto slash = text.find('/');
        if (slash == std::string_view::npos) return HalfInteger{2 * to_int(text)};
        if (to_int(text.substr(slash + 1)) != 2)
            throw DomainError("half-integer denominator must be 2 in '" + std::string(text) + "'");
        return HalfInteger{to_int(text.substr(0, slash))};
    }

    friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
};

/// Material constants. n_g = c/v_F, lambda_bar the reduced Compton wavelength,
/// phi_b the reduced flux quantum, hbar_vf converts energy to inverse length.
struct MediumParams {
    double n_g = 300.0;
    double lambda_bar = 1.0;
    double phi_b = 1.0;
    double hbar_vf = 1.0;

    /// Internal length unit n_g * lambda_bar.
    double length_unit() const noexcept { return n_g * lambda_bar; }
    /// Gap scale hbar v_F / (n_g lambda_bar): physical energy of eps_tilde = 1.
    double energy_unit() const noexcept { return hbar_vf / length_unit(); }

    void validate() const {
        auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!ok(n_g)) throw DomainError("MediumParams: n_g must be positive and finite");
        if (!ok(lambda_bar)) throw DomainError("MediumParams: lambda_bar must be positive and finite");
        if (!ok(phi_b)) throw DomainError("MediumParams: phi_b must be positive and finite");
        if (!ok(hbar_vf)) throw DomainError("MediumParams: hbar_vf must be positive and finite");
    }
};

enum class ImpurityKind { electric, magnetic };

inline std::string_view to_string(ImpurityKind k) {
    return k == ImpurityKind::electric ? "electric" : "magnetic";
}

/// Total angular momentum j and radial index (n for electric, n-breve for magnetic).
struct QuantumNumbers {
    HalfInteger j;
    int n = 0;

    double j_value() const noexcept { return j.value(); }
};

/// Energy in units of the gap scale. Non-real values only appear in supercritical diagnostics.
struct ScaledEnergy {
    double value = 0.0;
    bool is_real = true;
    double imaginary_part = 0.0;
};

inline ScaledEnergy to_dimensionless(double energy, const MediumParams& m) {
    m.validate();
    if (!std::isfinite(energy)) throw DomainError("to_dimensionless: non-finite energy");
    return ScaledEnergy{energy / m.energy_unit(), true, 0.0};
}

inline double from_dimensionless(const ScaledEnergy& e, const MediumParams& m) {
    m.validate();
    if (!std::isfinite(e.value)) throw DomainError("from_dimensionless: non-finite energy");
    return e.value * m.energy_unit();
}

inline double length_to_dimensionless(double r, const MediumParams& m) {
    m.validate();
    if (!std::isfinite(r)) throw DomainError("length_to_dimensionless: non-finite length");
    return r / m.length_unit();
}

/// Electric: n >= 0 for j > 0 and n >= 1 for j < 0 (the ground state is n = 0, j = 1/2).
/// Magnetic: only j > 0 and n-breve >= 1 are admissible.
inline QuantumNumbers validate_quantum_numbers(const QuantumNumbers& q, ImpurityKind kind) {
    if (!q.j.is_half_odd()) throw InvalidQuantumNumbers("not half-integer: j = " + q.j.to_string());
    if (kind == ImpurityKind::electric) {
        int n_min = q.j.positive() ? 0 : 1;
        if (q.n < n_min)
            throw InvalidQuantumNumbers("invalid radial index: n = " + std::to_string(q.n) +
                                        " for j = " + q.j.to_string());
    } else {
        if (!q.j.positive())
            throw InvalidQuantumNumbers("unsupported sector: magnetic impurity requires j > 0, got j = " +
                                        q.j.to_string());
        if (q.n < 1)
            throw InvalidQuantumNumbers("invalid radial index: magnetic n-breve must be >= 1, got " +
                                        std::to_string(q.n));
    }
    return q;
}

} // namespace gsusy
