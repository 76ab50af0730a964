#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "gsusy/error.hpp"

namespace gsusy {

enum class Spacing { uniform, logarithmic, sinh, custom };

/// Radial mesh r_0 < r_1 < ... < r_{N-1}. Wavefunctions vanish at both end nodes,
/// so the unknowns live on the N-2 interior nodes.
class RadialGrid {
public:
    static constexpr int kMinPoints = 100;

    static RadialGrid uniform(double r_min, double r_max, int points) {
        check(r_min, r_max, points);
        std::vector<double> r(points);
        const double h = (r_max - r_min) / (points - 1);
        for (int i = 0; i < points; ++i) r[i] = r_min + h * i;
        r.back() = r_max;
        return RadialGrid(std::move(r), Spacing::uniform);
    }

    static RadialGrid logarithmic(double r_min, double r_max, int points) {
        check(r_min, r_max, points);
        std::vector<double> r(points);
        const double lo = std::log(r_min);
        const double step = (std::log(r_max) - lo) / (points - 1);
        for (int i = 0; i < points; ++i) r[i] = std::exp(lo + step * i);
        r.front() = r_min;
        r.back() = r_max;
        return RadialGrid(std::move(r), Spacing::logarithmic);
    }

    /// r = r0 sinh(s) with s uniform: logarithmic below r0, close to uniform above.
    static RadialGrid sinh(double r_min, double r_max, double r0, int points) {
        check(r_min, r_max, points);
        if (!(r0 > 0.0)) throw DomainError("RadialGrid: sinh scale must be positive");
        std::vector<double> r(points);
        const double lo = std::asinh(r_min / r0);
        const double step = (std::asinh(r_max / r0) - lo) / (points - 1);
        for (int i = 0; i < points; ++i) r[i] = r0 * std::sinh(lo + step * i);
        r.front() = r_min;
        r.back() = r_max;
        RadialGrid g(std::move(r), Spacing::sinh);
        g.scale_ = r0;
        return g;
    }

    /// Arbitrary strictly increasing positive nodes (at least 3). Used for hand-sized
    /// operator checks; production solves go through the factories above.
    static RadialGrid from_nodes(std::vector<double> nodes) {
        if (nodes.size() < 3) throw DomainError("RadialGrid: need at least 3 nodes");
        if (!(nodes.front() > 0.0)) throw DomainError("RadialGrid: r_min must be positive");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1])) throw DomainError("RadialGrid: nodes must be strictly increasing");
        return RadialGrid(std::move(nodes), Spacing::custom);
    }

    /// Same rule and end points with 2N - 1 nodes (every spacing halved).
    RadialGrid refined() const {
        switch (spacing_) {
        case Spacing::uniform: return uniform(r_min(), r_max(), 2 * size() - 1);
        case Spacing::logarithmic: return logarithmic(r_min(), r_max(), 2 * size() - 1);
        case Spacing::sinh: return sinh(r_min(), r_max(), scale_, 2 * size() - 1);
        case Spacing::custom: break;
        }
        std::vector<double> r;
        r.reserve(2 * nodes_.size() - 1);
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            r.push_back(nodes_[i]);
            r.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
        }
        r.push_back(nodes_.back());
        return RadialGrid(std::move(r), Spacing::custom);
    }

    RadialGrid with_points(int points) const {
        switch (spacing_) {
        case Spacing::uniform: return uniform(r_min(), r_max(), points);
        case Spacing::logarithmic: return logarithmic(r_min(), r_max(), points);
        case Spacing::sinh: return sinh(r_min(), r_max(), scale_, points);
        case Spacing::custom: break;
        }
        throw DomainError("RadialGrid: custom grids cannot be resampled");
    }

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    int interior_size() const noexcept { return size() - 2; }
    double r_min() const noexcept { return nodes_.front(); }
    double r_max() const noexcept { return nodes_.back(); }
    Spacing spacing() const noexcept { return spacing_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    double operator[](int i) const { return nodes_[i]; }

    /// Width of cell k = [r_k, r_{k+1}], k = 0..N-2.
    double cell_width(int k) const { return nodes_[k + 1] - nodes_[k]; }
    double cell_center(int k) const { return 0.5 * (nodes_[k] + nodes_[k + 1]); }
    /// Dual-cell width attached to interior node i (1 <= i <= N-2).
    double node_weight(int i) const { return 0.5 * (nodes_[i + 1] - nodes_[i - 1]); }

private:
    RadialGrid(std::vector<double> r, Spacing s) : nodes_(std::move(r)), spacing_(s) {}

    static void check(double r_min, double r_max, int points) {
        if (!(std::isfinite(r_min) && std::isfinite(r_max)))
            throw DomainError("RadialGrid: non-finite bounds");
        if (!(r_min > 0.0)) throw DomainError("RadialGrid: r_min must be positive");
        if (!(r_min < r_max)) throw DomainError("RadialGrid: r_min must be below r_max");
        if (points < kMinPoints)
            throw DomainError("RadialGrid: at least " + std::to_string(kMinPoints) + " points required");
    }

    std::vector<double> nodes_;
    Spacing spacing_;
    double scale_ = 0.0;
};

} // namespace gsusy
