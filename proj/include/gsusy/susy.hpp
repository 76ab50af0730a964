#pragma once

// Supersymmetric factorization of radial operators built from W(r) = a/r - b.
//
// Discretization: wavefunctions of the first partner live on the interior nodes,
// those of the second partner on the cells between nodes. A = d/dr + W maps nodes
// to cells with an exponentially fitted forward difference; A^dagger is
// its exact transpose in the grid-weighted inner products. With n interior nodes,
// A is (n+1) x n, so A A^dagger carries exactly one more eigenvalue than A^dagger A:
// the zero mode annihilated by A^dagger.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "gsusy/error.hpp"
#include "gsusy/grid.hpp"
#include "gsusy/tridiagonal.hpp"

namespace gsusy {

using complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// W(r) = a/r - b. Only real coefficients (subcritical) or the purely imaginary
/// pair produced by nu^2 < 0 occur in practice.
struct RadialSuperpotential {
    complex inverse_coeff{0.0, 0.0};
    complex constant_term{0.0, 0.0};

    static RadialSuperpotential real(double a, double b) { return {complex{a, 0.0}, complex{b, 0.0}}; }

    bool is_real() const noexcept { return inverse_coeff.imag() == 0.0 && constant_term.imag() == 0.0; }
    /// Signed square of the 1/r coefficient (nu^2 in the electric case).
    double inverse_coeff_sq() const { return (inverse_coeff * inverse_coeff).real(); }

    complex operator()(double r) const { return inverse_coeff / r - constant_term; }
    complex derivative(double r) const { return -inverse_coeff / (r * r); }
};

/// c2/r^2 + c1/r + c0.
template <class Scalar>
struct RationalPotential {
    Scalar c2{};
    Scalar c1{};
    Scalar c0{};

    Scalar operator()(double r) const { return c2 / (r * r) + c1 / r + c0; }
};

/// V1 = W^2 - W', V2 = W^2 + W'.
struct PartnerPotentials {
    RationalPotential<complex> v1;
    RationalPotential<complex> v2;

    bool is_real() const noexcept {
        auto re = [](const RationalPotential<complex>& v) {
            return v.c2.imag() == 0.0 && v.c1.imag() == 0.0 && v.c0.imag() == 0.0;
        };
        return re(v1) && re(v2);
    }

    static RationalPotential<double> real_part(const RationalPotential<complex>& v) {
        return {v.c2.real(), v.c1.real(), v.c0.real()};
    }
    RationalPotential<double> v1_real() const { return require_real(v1); }
    RationalPotential<double> v2_real() const { return require_real(v2); }

private:
    RationalPotential<double> require_real(const RationalPotential<complex>& v) const {
        if (!is_real()) throw NonHermitianFactorization("partner potential has complex coefficients");
        return real_part(v);
    }
};

inline PartnerPotentials partner_potentials(const RadialSuperpotential& w) {
    const complex a = w.inverse_coeff;
    const complex b = w.constant_term;
    PartnerPotentials p;
    p.v1 = {a * (a + 1.0), -2.0 * a * b, b * b};
    p.v2 = {a * (a - 1.0), -2.0 * a * b, b * b};
    return p;
}

/// Weighted lower-bidiagonal representation of A: an (n+1) x n matrix with
/// A(i, i) = diag[i] and A(i+1, i) = sub[i].
template <class Scalar>
struct BidiagonalLadder {
    std::vector<Scalar> diag;
    std::vector<Scalar> sub;

    int cols() const noexcept { return static_cast<int>(diag.size()); }
    int rows() const noexcept { return cols() + 1; }
};

namespace detail {

// Exponentially fitted difference: with Phi' = W, A u = exp(-Phi) d/dr (exp(Phi) u),
// so on cell k with centre c
//   (A u)_k = [exp(Phi(r_{k+1}) - Phi(c)) u_{k+1} - exp(Phi(r_k) - Phi(c)) u_k] / h_k,
// Phi(r) = a ln r - b r integrated exactly. Second order on smooth meshes, and the two
// entries keep opposite signs for any cell width.
template <class Scalar>
BidiagonalLadder<Scalar> build_ladder(Scalar a, Scalar b, const RadialGrid& grid) {
    const int n = grid.interior_size();
    auto phase = [&](double r, double c) { return std::exp(a * std::log(r / c) - b * (r - c)); };
    BidiagonalLadder<Scalar> lad;
    lad.diag.resize(n);
    lad.sub.resize(n);
    for (int i = 0; i < n; ++i) {
        const int node = i + 1;
        const double m = std::sqrt(grid.node_weight(node));
        // Cell i = [r_i, r_{i+1}]: node i+1 is its right end.
        const double h_left = grid.cell_width(i);
        lad.diag[i] = phase(grid[node], grid.cell_center(i)) / h_left * std::sqrt(h_left) / m;
        // Cell i+1 = [r_{i+1}, r_{i+2}]: node i+1 is its left end.
        const double h_right = grid.cell_width(i + 1);
        lad.sub[i] = -phase(grid[node], grid.cell_center(i + 1)) / h_right * std::sqrt(h_right) / m;
    }
    return lad;
}

// A^T A (n x n) and A A^T ((n+1) x (n+1)) from the bidiagonal entries; formal
// transposes, no complex conjugation.
template <class Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> gram_first(const BidiagonalLadder<Scalar>& a) {
    const int n = a.cols();
    std::vector<Scalar> d(n), e(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i) d[i] = a.diag[i] * a.diag[i] + a.sub[i] * a.sub[i];
    for (int i = 0; i + 1 < n; ++i) e[i] = a.sub[i] * a.diag[i + 1];
    return {d, e};
}

template <class Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> gram_second(const BidiagonalLadder<Scalar>& a) {
    const int n = a.cols();
    std::vector<Scalar> d(n + 1, Scalar{}), e(n);
    for (int k = 0; k <= n; ++k) {
        if (k < n) d[k] += a.diag[k] * a.diag[k];
        if (k >= 1) d[k] += a.sub[k - 1] * a.sub[k - 1];
    }
    for (int k = 0; k < n; ++k) e[k] = a.diag[k] * a.sub[k];
    return {d, e};
}

} // namespace detail

/// Discrete ladder pair plus the two factorized Hamiltonians assembled entry-wise.
struct LadderOperators {
    RadialGrid grid;
    BidiagonalLadder<double> bidiagonal;
    SparseMatrix lowering;  ///< A, (n+1) x n
    SparseMatrix raising;   ///< A^dagger, n x (n+1)
    SymTridiagonal partner1; ///< A^dagger A ~ -d^2 + W^2 - W', on nodes
    SymTridiagonal partner2; ///< A A^dagger ~ -d^2 + W^2 + W', on cells

    int node_dim() const noexcept { return bidiagonal.cols(); }
    int cell_dim() const noexcept { return bidiagonal.rows(); }

    /// Physical samples u(r_i) from a symmetric-form node vector.
    std::vector<double> node_samples(const std::vector<double>& v) const {
        std::vector<double> u(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i] / std::sqrt(grid.node_weight(int(i) + 1));
        return u;
    }
    std::vector<double> cell_samples(const std::vector<double>& v) const {
        std::vector<double> u(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) u[k] = v[k] / std::sqrt(grid.cell_width(int(k)));
        return u;
    }
};

inline SparseMatrix to_sparse(const BidiagonalLadder<double>& a) {
    SparseMatrix m(a.rows(), a.cols());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * a.cols());
    for (int i = 0; i < a.cols(); ++i) {
        t.emplace_back(i, i, a.diag[i]);
        t.emplace_back(i + 1, i, a.sub[i]);
    }
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

inline LadderOperators ladder_matrices(const RadialSuperpotential& w, const RadialGrid& grid) {
    if (!w.is_real())
        throw NonHermitianFactorization(
            "non-hermitian factorization: superpotential is complex (supercritical coupling)");
    auto bidiag = detail::build_ladder<double>(w.inverse_coeff.real(), w.constant_term.real(), grid);
    auto [d1, e1] = detail::gram_first(bidiag);
    auto [d2, e2] = detail::gram_second(bidiag);
    SparseMatrix lowering = to_sparse(bidiag);
    SparseMatrix raising = SparseMatrix(lowering.transpose());
    return LadderOperators{grid,
                           std::move(bidiag),
                           std::move(lowering),
                           std::move(raising),
                           SymTridiagonal(std::move(d1), std::move(e1)),
                           SymTridiagonal(std::move(d2), std::move(e2))};
}

struct SusyAlgebraReport {
    double nilpotency = 0.0;    ///< ||Q^2|| / ||H||
    double anticommutator = 0.0; ///< ||{Q, Q^dagger} - H|| / ||H||
    double commutator = 0.0;    ///< ||[Q, H]|| / ||H||^{3/2}
    double tolerance = 0.0;
    bool passed = false;
};

namespace detail {

inline double max_abs(const SparseMatrix& m) {
    double v = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

inline void append_block(std::vector<Eigen::Triplet<double>>& t, const SparseMatrix& m, int row0, int col0) {
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            t.emplace_back(row0 + int(it.row()), col0 + int(it.col()), it.value());
}

inline void append_block(std::vector<Eigen::Triplet<double>>& t, const SymTridiagonal& m, int offset) {
    for (int i = 0; i < m.size(); ++i) t.emplace_back(offset + i, offset + i, m.diag()[i]);
    for (int i = 0; i + 1 < m.size(); ++i) {
        t.emplace_back(offset + i, offset + i + 1, m.off()[i]);
        t.emplace_back(offset + i + 1, offset + i, m.off()[i]);
    }
}

} // namespace detail

/// Supercharges Q = [[0,0],[A,0]], Q^dagger = [[0,A^dagger],[0,0]] and the extended
/// Hamiltonian H = diag(A^dagger A, A A^dagger) taken from the entry-wise partner blocks.
/// [Q, H] is a product of three factors and is normalised by ||H||^{3/2}.
inline SusyAlgebraReport susy_algebra_check(const LadderOperators& ops, double tol) {
    const int n1 = ops.node_dim();
    const int n2 = ops.cell_dim();
    if (ops.lowering.rows() != n2 || ops.lowering.cols() != n1 || ops.raising.rows() != n1 ||
        ops.raising.cols() != n2 || ops.partner1.size() != n1 || ops.partner2.size() != n2)
        throw DimensionMismatch("susy_algebra_check: ladder blocks are not conformable");
    const int dim = n1 + n2;

    std::vector<Eigen::Triplet<double>> tq, tqd, th;
    detail::append_block(tq, ops.lowering, n1, 0);
    detail::append_block(tqd, ops.raising, 0, n1);
    detail::append_block(th, ops.partner1, 0);
    detail::append_block(th, ops.partner2, n1);
    SparseMatrix q(dim, dim), qd(dim, dim), h(dim, dim);
    q.setFromTriplets(tq.begin(), tq.end());
    qd.setFromTriplets(tqd.begin(), tqd.end());
    h.setFromTriplets(th.begin(), th.end());

    const double h_norm = std::max(detail::max_abs(h), std::numeric_limits<double>::min());
    SparseMatrix q2 = q * q;
    SparseMatrix anti = SparseMatrix(q * qd) + SparseMatrix(qd * q) - h;
    SparseMatrix comm = SparseMatrix(q * h) - SparseMatrix(h * q);

    SusyAlgebraReport r;
    r.nilpotency = detail::max_abs(q2) / h_norm;
    r.anticommutator = detail::max_abs(anti) / h_norm;
    r.commutator = detail::max_abs(comm) / std::pow(h_norm, 1.5);
    r.tolerance = tol;
    r.passed = r.nilpotency <= tol && r.anticommutator <= tol && r.commutator <= tol;
    return r;
}

enum class PartnerSector { first, second };

struct IsospectralityReport {
    std::vector<double> first;        ///< lowest eigenvalues of A^dagger A
    std::vector<double> second;       ///< lowest eigenvalues of A A^dagger (paired, extra mode removed)
    double max_relative_mismatch = 0.0;
    std::optional<PartnerSector> extra_zero_mode; ///< which partner holds the unpaired mode
    double zero_mode_eigenvalue = 0.0;
    double zero_mode_edge_fraction = 0.0; ///< |psi| at the outer grid edge relative to max |psi|
    bool zero_mode_normalizable = false;
};

/// Pairs the lowest k eigenvalues of the two partners. Because A is (n+1) x n the
/// second partner always holds one unpaired eigenvalue; it is reported as a zero mode
/// when it is below zero_tol relative to the first paired level.
inline IsospectralityReport isospectrality_check(const LadderOperators& ops, int k, double zero_tol = 1e-6) {
    if (k < 1 || k >= ops.node_dim()) throw DomainError("isospectrality_check: need 1 <= k < n");
    IsospectralityReport r;
    r.first = ops.partner1.lowest_eigenvalues(k);
    auto second_all = ops.partner2.lowest_eigenvalues(k + 1);

    // Drop whichever eigenvalue of the larger partner has no counterpart. The
    // unpaired one is the smallest unless the spectra are interleaved differently;
    // choose the split that minimises the mismatch.
    double best = std::numeric_limits<double>::infinity();
    int drop = 0;
    for (int cand = 0; cand <= k; ++cand) {
        double worst = 0.0;
        for (int i = 0, j = 0; i < k; ++i, ++j) {
            if (j == cand) ++j;
            worst = std::max(worst, std::abs(second_all[j] - r.first[i]) / std::max(std::abs(r.first[i]), 1e-300));
        }
        if (worst < best) {
            best = worst;
            drop = cand;
        }
    }
    r.second.clear();
    for (int j = 0; j <= k; ++j)
        if (j != drop) r.second.push_back(second_all[j]);
    r.max_relative_mismatch = best;
    r.zero_mode_eigenvalue = second_all[drop];

    const double ref = std::abs(r.first.front());
    if (std::abs(r.zero_mode_eigenvalue) <= zero_tol * std::max(ref, 1e-300)) {
        r.extra_zero_mode = PartnerSector::second;
        auto v = ops.cell_samples(ops.partner2.eigenvector(r.zero_mode_eigenvalue));
        double amax = 0.0;
        for (double x : v) amax = std::max(amax, std::abs(x));
        r.zero_mode_edge_fraction = std::abs(v.back()) / amax;
        r.zero_mode_normalizable = r.zero_mode_edge_fraction < 1e-6;
    }
    return r;
}

/// ||A^dagger psi0|| / (max|A| ||psi0||) for the lowest state psi0 of A A^dagger: how well the
/// unpaired ground state is annihilated.
inline double annihilation_residual(const LadderOperators& ops) {
    const auto v = ops.partner2.eigenvector(ops.partner2.eigenvalue(0));
    Eigen::Map<const Eigen::VectorXd> psi(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::VectorXd image = ops.raising * psi;
    const double scale = std::max(detail::max_abs(ops.raising), std::numeric_limits<double>::min());
    return image.norm() / (scale * psi.norm());
}

/// Non-hermiticity of the factorized Hamiltonians built formally from W (A^dagger taken
/// as the plain transpose): max |H - H^H| over both partners, relative to the size of
/// the W-dependent part max |H - H_free|. Exactly zero for real W.
inline double hermiticity_defect(const RadialSuperpotential& w, const RadialGrid& grid) {
    auto lad = detail::build_ladder<complex>(w.inverse_coeff, w.constant_term, grid);
    auto free = detail::build_ladder<complex>(complex{}, complex{}, grid);

    double skew = 0.0, scale = 0.0;
    auto accumulate = [&](const std::vector<complex>& h, const std::vector<complex>& h0) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            // Complex symmetric, so (H - H^H)_{ij} = 2i Im H_ij.
            skew = std::max(skew, 2.0 * std::abs(h[i].imag()));
            scale = std::max(scale, std::abs(h[i] - h0[i]));
        }
    };
    auto [d1, e1] = detail::gram_first(lad);
    auto [f1, g1] = detail::gram_first(free);
    auto [d2, e2] = detail::gram_second(lad);
    auto [f2, g2] = detail::gram_second(free);
    accumulate(d1, f1);
    accumulate(e1, g1);
    accumulate(d2, f2);
    accumulate(e2, g2);
    if (skew == 0.0) return 0.0;
    return skew / scale;
}

} // namespace gsusy
