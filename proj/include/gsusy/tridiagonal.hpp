#pragma once

// Real symmetric tridiagonal matrices: Sturm-sequence bisection for selected
// eigenvalues and inverse iteration for the matching eigenvectors.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "gsusy/error.hpp"

namespace gsusy {

class SymTridiagonal {
public:
    SymTridiagonal() = default;
    SymTridiagonal(std::vector<double> diag, std::vector<double> off)
        : diag_(std::move(diag)), off_(std::move(off)) {
        if (diag_.empty() || off_.size() + 1 != diag_.size())
            throw DimensionMismatch("SymTridiagonal: off-diagonal must have size n - 1");
    }

    int size() const noexcept { return static_cast<int>(diag_.size()); }
    const std::vector<double>& diag() const noexcept { return diag_; }
    const std::vector<double>& off() const noexcept { return off_; }

    /// Gershgorin interval containing the whole spectrum.
    std::pair<double, double> gershgorin() const {
        double lo = std::numeric_limits<double>::max();
        double hi = std::numeric_limits<double>::lowest();
        const int n = size();
        for (int i = 0; i < n; ++i) {
            double radius = (i > 0 ? std::abs(off_[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off_[i]) : 0.0);
            lo = std::min(lo, diag_[i] - radius);
            hi = std::max(hi, diag_[i] + radius);
        }
        return {lo, hi};
    }

    double max_abs_entry() const {
        double m = 0.0;
        for (double d : diag_) m = std::max(m, std::abs(d));
        for (double e : off_) m = std::max(m, std::abs(e));
        return m;
    }

    /// Number of eigenvalues strictly below x (negative pivots of the LDL^T of T - x).
    int count_below(double x) const {
        const double pivmin = pivot_floor();
        int count = 0;
        double q = diag_[0] - x;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
        for (int i = 1; i < size(); ++i) {
            q = (diag_[i] - x) - off_[i - 1] * (off_[i - 1] / q);
            if (std::abs(q) < pivmin) q = -pivmin;
            if (q < 0.0) ++count;
        }
        return count;
    }

    /// k-th smallest eigenvalue (0-based) by bisection to full working precision.
    double eigenvalue(int k) const {
        if (k < 0 || k >= size()) throw DomainError("SymTridiagonal::eigenvalue: index out of range");
        auto [lo, hi] = gershgorin();
        const double span = std::max(std::abs(lo), std::abs(hi));
        lo -= 2.0 * std::numeric_limits<double>::epsilon() * span + pivot_floor();
        hi += 2.0 * std::numeric_limits<double>::epsilon() * span + pivot_floor();
        for (int it = 0; it < 2000; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (count_below(mid) > k)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    }

    std::vector<double> lowest_eigenvalues(int count) const {
        std::vector<double> out;
        out.reserve(count);
        for (int k = 0; k < std::min(count, size()); ++k) out.push_back(eigenvalue(k));
        return out;
    }

    /// Eigenvector for a (converged) eigenvalue by inverse iteration, unit 2-norm,
    /// sign fixed so the largest-magnitude component near the origin side is positive.
    std::vector<double> eigenvector(double lambda) const {
        const int n = size();
        const double shift = lambda;
        std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
        for (int i = 0; i < n; ++i) x[i] *= 1.0 + 0.1 * std::sin(1.0 + i);
        for (int it = 0; it < 4; ++it) {
            x = solve_shifted(shift, x);
            double norm = 0.0;
            for (double v : x) norm += v * v;
            norm = std::sqrt(norm);
            for (double& v : x) v /= norm;
        }
        int first_big = 0;
        double amax = 0.0;
        for (double v : x) amax = std::max(amax, std::abs(v));
        for (int i = 0; i < n; ++i)
            if (std::abs(x[i]) > 1e-3 * amax) {
                first_big = i;
                break;
            }
        if (x[first_big] < 0.0)
            for (double& v : x) v = -v;
        return x;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        const int n = size();
        if (static_cast<int>(x.size()) != n) throw DimensionMismatch("SymTridiagonal::apply");
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) {
            double s = diag_[i] * x[i];
            if (i > 0) s += off_[i - 1] * x[i - 1];
            if (i + 1 < n) s += off_[i] * x[i + 1];
            y[i] = s;
        }
        return y;
    }

private:
    double pivot_floor() const {
        double m = 0.0;
        for (double e : off_) m = std::max(m, e * e);
        return std::max(m, 1.0) * std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    }

    // (T - shift) y = rhs by Gaussian elimination with partial pivoting.
    std::vector<double> solve_shifted(double shift, const std::vector<double>& rhs) const {
        const int n = size();
        const double tiny = std::numeric_limits<double>::epsilon() * std::max(max_abs_entry(), 1e-300);
        // Row i holds (sub, main, sup, sup2) relative to column i after elimination.
        std::vector<double> d(n), u1(n, 0.0), u2(n, 0.0), b = rhs;
        std::vector<double> lower(n, 0.0);
        for (int i = 0; i < n; ++i) {
            d[i] = diag_[i] - shift;
            if (i + 1 < n) u1[i] = off_[i];
            if (i > 0) lower[i] = off_[i - 1];
        }
        for (int i = 0; i + 1 < n; ++i) {
            // Candidate pivots: d[i] (row i) and lower[i+1] (row i+1).
            if (std::abs(lower[i + 1]) > std::abs(d[i])) {
                std::swap(d[i], lower[i + 1]);
                std::swap(u1[i], d[i + 1]);
                std::swap(u2[i], u1[i + 1]);
                std::swap(b[i], b[i + 1]);
            }
            if (std::abs(d[i]) < tiny) d[i] = tiny;
            double f = lower[i + 1] / d[i];
            d[i + 1] -= f * u1[i];
            u1[i + 1] -= f * u2[i];
            b[i + 1] -= f * b[i];
            lower[i + 1] = 0.0;
        }
        if (std::abs(d[n - 1]) < tiny) d[n - 1] = tiny;
        std::vector<double> y(n);
        for (int i = n - 1; i >= 0; --i) {
            double s = b[i];
            if (i + 1 < n) s -= u1[i] * y[i + 1];
            if (i + 2 < n) s -= u2[i] * y[i + 2];
            y[i] = s / d[i];
        }
        return y;
    }

    std::vector<double> diag_;
    std::vector<double> off_;
};

/// Interior sign changes of a sampled function, ignoring entries below
/// rel_floor * max|v| (exponentially small tails carry rounding noise).
inline int count_sign_changes(const std::vector<double>& v, double rel_floor = 1e-8) {
    double amax = 0.0;
    for (double x : v) amax = std::max(amax, std::abs(x));
    int changes = 0;
    int last_sign = 0;
    for (double x : v) {
        if (std::abs(x) <= rel_floor * amax) continue;
        int s = x > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++changes;
        last_sign = s;
    }
    return changes;
}

} // namespace gsusy
