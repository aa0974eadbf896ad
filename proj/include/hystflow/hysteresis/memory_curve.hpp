#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/hysteresis/density.hpp"

namespace hystflow {

struct Corner {
    double r = 0.0;
    double xi = 0.0;

    friend bool operator==(const Corner&, const Corner&) = default;
};

/// State of every play operator at one material point: the map r -> xi^r.
///
/// Stored as corners of a piecewise-linear curve starting at r = 0. Beyond
/// the last corner the curve is constant (zero for admissible memories).
/// The value at r = 0 is the last input seen by the point.
class MemoryCurve {
  public:
    /// Virgin memory, xi == 0.
    explicit MemoryCurve(double lambda_max = 1.0) : corners_{{0.0, 0.0}}, lambda_max_(lambda_max) {}

    MemoryCurve(std::vector<Corner> corners, double lambda_max)
        : corners_(std::move(corners)), lambda_max_(lambda_max) {
        if (corners_.empty()) throw DomainError("memory curve: no corners");
        if (corners_.front().r != 0.0) throw DomainError("memory curve: first corner must sit at r = 0");
        for (std::size_t i = 1; i < corners_.size(); ++i)
            if (!(corners_[i].r > corners_[i - 1].r))
                throw DomainError("memory curve: corner thresholds must increase strictly");
        for (const auto& c : corners_)
            if (!std::isfinite(c.r) || !std::isfinite(c.xi)) throw DomainError("memory curve: non-finite corner");
        if (!(lambda_max_ > 0.0)) throw DomainError("memory curve: lambda_max must be positive");
    }

    const std::vector<Corner>& corners() const noexcept { return corners_; }
    double lambda_max() const noexcept { return lambda_max_; }

    /// xi(0), the input the curve is band-compatible with.
    double input() const noexcept { return corners_.front().xi; }
    double tail() const noexcept { return corners_.back().xi; }
    double last_corner() const noexcept { return corners_.back().r; }

    bool is_virgin() const noexcept {
        return std::all_of(corners_.begin(), corners_.end(), [](const Corner& c) { return c.xi == 0.0; });
    }

    double operator()(double r) const {
        if (r <= 0.0) return corners_.front().xi;
        if (r >= corners_.back().r) return corners_.back().xi;
        auto it = std::upper_bound(corners_.begin(), corners_.end(), r,
                                   [](double v, const Corner& c) { return v < c.r; });
        const Corner& b = *it;
        const Corner& a = *(it - 1);
        return a.xi + (b.xi - a.xi) * (r - a.r) / (b.r - a.r);
    }

    std::size_t segment_count() const noexcept { return corners_.size() - 1; }

    Segment segment(std::size_t i) const {
        return {corners_[i].r, corners_[i].xi, corners_[i + 1].r, corners_[i + 1].xi};
    }

    friend bool operator==(const MemoryCurve&, const MemoryCurve&) = default;

  private:
    std::vector<Corner> corners_;
    double lambda_max_;
};

}  // namespace hystflow
