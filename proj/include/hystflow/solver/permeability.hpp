#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "hystflow/errors.hpp"

namespace hystflow {

/// kappa(x, theta) = k(x) (1 + beta theta), with k constant or piecewise
/// linear in |x| (held constant outside the table).
class Permeability {
  public:
    enum class Kind { constant, function_of_x, function_of_x_and_theta };

    static Permeability constant(double k) { return Permeability({0.0}, {k}, 0.0); }

    static Permeability piecewise_x(std::vector<double> xs, std::vector<double> ks, double beta = 0.0) {
        return Permeability(std::move(xs), std::move(ks), beta);
    }

    Permeability with_saturation_factor(double beta) const {
        Permeability k = *this;
        k.beta_ = beta;
        return k;
    }

    Kind kind() const noexcept {
        if (beta_ != 0.0) return Kind::function_of_x_and_theta;
        return xs_.size() > 1 ? Kind::function_of_x : Kind::constant;
    }
    bool depends_on_theta() const noexcept { return beta_ != 0.0; }
    double beta() const noexcept { return beta_; }
    const std::vector<double>& x_table() const noexcept { return xs_; }
    const std::vector<double>& k_table() const noexcept { return ks_; }

    double base(double x) const {
        const double r = std::abs(x);
        if (xs_.size() == 1 || r <= xs_.front()) return ks_.front();
        if (r >= xs_.back()) return ks_.back();
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), r);
        const auto i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        const double w = (r - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return (1 - w) * ks_[i] + w * ks_[i + 1];
    }

    double operator()(double x, double theta) const { return base(x) * (1.0 + beta_ * theta); }
    double d_theta(double x, double /*theta*/) const { return base(x) * beta_; }

    /// (kappa_*, kappa^*) over all x and theta in [theta_lo, theta_hi].
    std::pair<double, double> bounds(double theta_lo, double theta_hi) const {
        const auto [kmin, kmax] = std::minmax_element(ks_.begin(), ks_.end());
        const double f1 = 1.0 + beta_ * theta_lo;
        const double f2 = 1.0 + beta_ * theta_hi;
        const double lo = std::min({*kmin * f1, *kmin * f2});
        const double hi = std::max({*kmax * f1, *kmax * f2});
        if (!(lo > 0.0))
            throw DomainError("permeability: not bounded away from zero on the reachable saturation range");
        return {lo, hi};
    }

    /// Lipschitz constant in (x, theta) over the given saturation range.
    double lipschitz(double theta_lo, double theta_hi) const {
        double slope = 0.0;
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
            slope = std::max(slope, std::abs(ks_[i + 1] - ks_[i]) / (xs_[i + 1] - xs_[i]));
        const double f = std::max(std::abs(1.0 + beta_ * theta_lo), std::abs(1.0 + beta_ * theta_hi));
        const double kmax = *std::max_element(ks_.begin(), ks_.end());
        return std::max(slope * f, kmax * std::abs(beta_));
    }

  private:
    Permeability(std::vector<double> xs, std::vector<double> ks, double beta)
        : xs_(std::move(xs)), ks_(std::move(ks)), beta_(beta) {
        if (xs_.empty() || xs_.size() != ks_.size()) throw DomainError("permeability: table sizes differ");
        for (std::size_t i = 0; i < ks_.size(); ++i) {
            if (!(ks_[i] > 0.0) || !std::isfinite(ks_[i])) throw DomainError("permeability: values must be > 0");
            if (i > 0 && !(xs_[i] > xs_[i - 1])) throw DomainError("permeability: x table must increase");
        }
        if (!std::isfinite(beta_)) throw DomainError("permeability: beta must be finite");
    }

    std::vector<double> xs_, ks_;
    double beta_ = 0.0;
};

}  // namespace hystflow
