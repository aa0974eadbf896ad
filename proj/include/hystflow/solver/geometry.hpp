#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "hystflow/errors.hpp"

namespace hystflow {

enum class GeometryKind { interval, radial };

/// Interval [-L, L] with 2M-1 nodes, or a ball of radius L in N dimensions
/// reduced to M radial nodes on [0, L].
struct Geometry {
    GeometryKind kind = GeometryKind::interval;
    double L = 1.0;
    int dimension = 1;  // radial only
    std::size_t M = 101;

    double spacing() const { return L / static_cast<double>(M - 1); }
};

inline const char* to_string(GeometryKind k) { return k == GeometryKind::interval ? "interval" : "radial"; }

/// Node-centred finite-volume mesh: node positions, control volumes, face
/// areas between consecutive nodes, and the outer boundary nodes.
class Mesh {
  public:
    explicit Mesh(const Geometry& g) : geometry_(g) {
        if (!(g.L > 0.0) || !std::isfinite(g.L)) throw DomainError("geometry: L must be positive");
        if (g.M < 2) throw DomainError("geometry: need at least 2 nodes per half-extent");
        dx_ = g.spacing();
        if (g.kind == GeometryKind::interval) {
            const std::size_t n = 2 * g.M - 1;
            x_.resize(n);
            volume_.assign(n, dx_);
            for (std::size_t j = 0; j < n; ++j) x_[j] = -g.L + static_cast<double>(j) * dx_;
            x_.back() = g.L;
            volume_.front() = volume_.back() = 0.5 * dx_;
            face_area_.assign(n - 1, 1.0);
            boundary_ = {0, n - 1};
            boundary_area_ = {1.0, 1.0};
        } else {
            if (g.dimension < 1) throw DomainError("geometry: radial dimension must be >= 1");
            const double N = g.dimension;
            const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N);
            const std::size_t n = g.M;
            x_.resize(n);
            volume_.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                x_[j] = static_cast<double>(j) * dx_;
                const double a = j == 0 ? 0.0 : x_[j] - 0.5 * dx_;
                const double b = j + 1 == n ? g.L : x_[j] + 0.5 * dx_;
                volume_[j] = sphere / N * (std::pow(b, N) - std::pow(a, N));
            }
            x_.back() = g.L;
            face_area_.resize(n - 1);
            for (std::size_t j = 0; j + 1 < n; ++j) face_area_[j] = sphere * std::pow(x_[j] + 0.5 * dx_, N - 1);
            boundary_ = {n - 1};
            boundary_area_ = {sphere * std::pow(g.L, N - 1)};
        }
        is_boundary_.assign(x_.size(), false);
        for (std::size_t b : boundary_) is_boundary_[b] = true;
    }

    const Geometry& geometry() const noexcept { return geometry_; }
    std::size_t size() const noexcept { return x_.size(); }
    double dx() const noexcept { return dx_; }
    const std::vector<double>& x() const noexcept { return x_; }
    double x(std::size_t j) const { return x_[j]; }
    /// Distance from the origin (|x| or r).
    double radius(std::size_t j) const { return std::abs(x_[j]); }
    double volume(std::size_t j) const { return volume_[j]; }
    const std::vector<double>& volumes() const noexcept { return volume_; }
    /// Area of the face between nodes j and j+1.
    double face_area(std::size_t j) const { return face_area_[j]; }
    std::size_t face_count() const noexcept { return face_area_.size(); }
    const std::vector<std::size_t>& boundary_nodes() const noexcept { return boundary_; }
    double boundary_area(std::size_t k) const { return boundary_area_[k]; }
    bool is_boundary(std::size_t j) const { return is_boundary_[j]; }

    /// Outward normal sign at a boundary node along the grid direction.
    double outward_sign(std::size_t j) const { return j == 0 ? -1.0 : 1.0; }

    double total_volume() const {
        double s = 0.0;
        for (double v : volume_) s += v;
        return s;
    }

  private:
    Geometry geometry_;
    double dx_ = 0.0;
    std::vector<double> x_, volume_, face_area_, boundary_area_;
    std::vector<std::size_t> boundary_;
    std::vector<bool> is_boundary_;
};

/// omega in [0, 1]: 0 Dirichlet, 1 Neumann, otherwise Robin with
/// gamma = (1 - omega) / omega.
struct BoundaryCondition {
    double omega = 0.0;

    BoundaryCondition() = default;
    explicit BoundaryCondition(double w) : omega(w) {
        if (!(w >= 0.0 && w <= 1.0)) throw DomainError("boundary condition: omega must lie in [0, 1]");
    }

    bool dirichlet() const noexcept { return omega == 0.0; }
    bool neumann() const noexcept { return omega == 1.0; }
    bool robin() const noexcept { return !dirichlet() && !neumann(); }
    double gamma() const noexcept { return robin() ? (1.0 - omega) / omega : 0.0; }
};

}  // namespace hystflow
