#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hystflow/errors.hpp"
#include "hystflow/numerics/quadrature.hpp"

namespace hystflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Straight piece of a curve v = xi(r) between two endpoints.
struct Segment {
    double r1, x1, r2, x2;

    double at(double r) const {
        if (r2 == r1) return x1;
        return x1 + (x2 - x1) * (r - r1) / (r2 - r1);
    }
    double slope() const { return r2 > r1 ? (x2 - x1) / (r2 - r1) : 0.0; }
};

namespace detail {

/// Clip `seg` to r <= r_cut and split it where it crosses the given levels
/// in v, so that every emitted piece stays on one side of each level.
template<std::size_t N, class Fn>
void for_each_piece(Segment seg, double r_cut, const std::array<double, N>& levels, Fn&& fn) {
    if (!(seg.r2 > seg.r1)) return;
    if (seg.r1 >= r_cut) return;
    if (seg.r2 > r_cut) seg = {seg.r1, seg.x1, r_cut, seg.at(r_cut)};

    std::array<double, N + 2> cuts{};
    std::size_t n = 0;
    cuts[n++] = seg.r1;
    for (double level : levels) {
        const double lo = std::min(seg.x1, seg.x2);
        const double hi = std::max(seg.x1, seg.x2);
        if (level > lo && level < hi) {
            const double r = seg.r1 + (level - seg.x1) / (seg.x2 - seg.x1) * (seg.r2 - seg.r1);
            if (r > seg.r1 && r < seg.r2) cuts[n++] = r;
        }
    }
    std::sort(cuts.begin() + 1, cuts.begin() + static_cast<std::ptrdiff_t>(n));
    cuts[n++] = seg.r2;

    double ra = seg.r1;
    double xa = seg.x1;
    for (std::size_t i = 1; i < n; ++i) {
        const double rb = cuts[i];
        if (!(rb > ra)) continue;
        double xb = i + 1 == n ? seg.x2 : seg.at(rb);
        // snap crossings onto the level they were computed from
        for (double level : levels)
            if (std::isfinite(level) && std::abs(xb - level) <= 1e-15 * (1.0 + std::abs(level))) xb = level;
        fn(Segment{ra, xa, rb, xb});
        ra = rb;
        xa = xb;
    }
}

/// (1 - exp(-z)) / z, finite at z = 0.
inline double phi1(double z) {
    if (std::abs(z) < 1e-10) return 1.0 - 0.5 * z;
    return -std::expm1(-z) / z;
}

/// \int_0^d exp(-k t) dt
inline double exp_integral(double k, double d) { return d * phi1(k * d); }

inline double clamp_sym(double x, double m) { return std::clamp(x, -m, m); }

}  // namespace detail

/// rho(r, v) = value on [0, r_max] x [-v_max, v_max], zero outside.
struct ConstantDensity {
    double value = 1.0;
    double r_max = kInf;
    double v_max = kInf;
};

/// rho(r, v) = amplitude * exp(-r / r_scale) * exp(-|v| / v_scale) on the box
/// [0, r_max] x [-v_max, v_max].
struct SeparableDensity {
    double amplitude = 1.0;
    double r_scale = 1.0;
    double v_scale = 1.0;
    double r_max = kInf;
    double v_max = kInf;
};

/// Bilinear interpolation of samples on a uniform grid over
/// [0, r_max] x [-v_max, v_max]; zero outside. Row-major, r outer.
class GridDensity {
  public:
    GridDensity(double r_max, double v_max, std::size_t nr, std::size_t nv, std::vector<double> values)
        : r_max_(r_max), v_max_(v_max), nr_(nr), nv_(nv), values_(std::move(values)) {
        if (!(r_max > 0.0) || !(v_max > 0.0) || !std::isfinite(r_max) || !std::isfinite(v_max))
            throw DomainError("grid density: extents must be positive and finite");
        if (nr < 2 || nv < 2 || values_.size() != nr * nv)
            throw DomainError("grid density: need at least 2x2 samples matching nr*nv");
        for (double v : values_)
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("grid density: samples must be finite and >= 0");
        hr_ = r_max_ / static_cast<double>(nr_ - 1);
        hv_ = 2.0 * v_max_ / static_cast<double>(nv_ - 1);
        cum_.assign(nr_ * nv_, 0.0);
        cum_moment_.assign(nr_ * nv_, 0.0);
        for (std::size_t i = 0; i < nr_; ++i) {
            for (std::size_t k = 1; k < nv_; ++k) {
                cum_[i * nv_ + k] = cum_[i * nv_ + k - 1] + cell_integral(i, k - 1, v_node(k));
                cum_moment_[i * nv_ + k] = cum_moment_[i * nv_ + k - 1] + cell_moment(i, k - 1, v_node(k));
            }
        }
    }

    double r_max() const noexcept { return r_max_; }
    double v_max() const noexcept { return v_max_; }
    std::size_t nr() const noexcept { return nr_; }
    std::size_t nv() const noexcept { return nv_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double r_spacing() const noexcept { return hr_; }

    double sample(std::size_t i, std::size_t k) const { return values_[i * nv_ + k]; }

    double operator()(double r, double v) const {
        if (r < 0.0 || r > r_max_ || v < -v_max_ || v > v_max_) return 0.0;
        const auto [i, w] = r_cell(r);
        const auto [k, s] = v_cell(v);
        const double a = (1 - s) * sample(i, k) + s * sample(i, k + 1);
        const double b = (1 - s) * sample(i + 1, k) + s * sample(i + 1, k + 1);
        return (1 - w) * a + w * b;
    }

    /// \int_0^xi rho(r, v) dv, exact for the bilinear interpolant.
    double inner(double r, double xi) const {
        if (r < 0.0 || r > r_max_) return 0.0;
        const auto [i, w] = r_cell(r);
        return (1 - w) * row_primitive(i, xi) + w * row_primitive(i + 1, xi);
    }

    double moment(double r, double xi) const {
        if (r < 0.0 || r > r_max_) return 0.0;
        const auto [i, w] = r_cell(r);
        return (1 - w) * row_moment(i, xi) + w * row_moment(i + 1, xi);
    }

    double min_over(double U) const {
        double m = kInf;
        for (std::size_t i = 0; i < nr_; ++i) {
            if (static_cast<double>(i) * hr_ > U + hr_) break;
            for (std::size_t k = 0; k < nv_; ++k)
                if (std::abs(v_node(k)) <= U + hv_) m = std::min(m, sample(i, k));
        }
        return m;
    }

    double max_value() const { return *std::max_element(values_.begin(), values_.end()); }

  private:
    double v_node(std::size_t k) const { return -v_max_ + static_cast<double>(k) * hv_; }

    std::pair<std::size_t, double> r_cell(double r) const {
        const double q = r / hr_;
        const auto i = std::min(static_cast<std::size_t>(q), nr_ - 2);
        return {i, q - static_cast<double>(i)};
    }

    std::pair<std::size_t, double> v_cell(double v) const {
        const double q = (v + v_max_) / hv_;
        const auto k = std::min(static_cast<std::size_t>(std::max(q, 0.0)), nv_ - 2);
        return {k, q - static_cast<double>(k)};
    }

    // \int_{v_k}^{v} of row i, v inside cell k
    double cell_integral(std::size_t i, std::size_t k, double v) const {
        const double t = v - v_node(k);
        const double slope = (sample(i, k + 1) - sample(i, k)) / hv_;
        return t * sample(i, k) + 0.5 * t * t * slope;
    }

    double cell_moment(std::size_t i, std::size_t k, double v) const {
        const double vk = v_node(k);
        const double slope = (sample(i, k + 1) - sample(i, k)) / hv_;
        const double base = sample(i, k) - slope * vk;  // rho = base + slope * v on the cell
        return base * 0.5 * (v * v - vk * vk) + slope * (v * v * v - vk * vk * vk) / 3.0;
    }

    // \int_{-v_max}^{v} row i
    double row_cumulative(std::size_t i, double v) const {
        v = detail::clamp_sym(v, v_max_);
        const auto [k, s] = v_cell(v);
        (void)s;
        return cum_[i * nv_ + k] + cell_integral(i, k, v);
    }

    double row_cumulative_moment(std::size_t i, double v) const {
        v = detail::clamp_sym(v, v_max_);
        const auto [k, s] = v_cell(v);
        (void)s;
        return cum_moment_[i * nv_ + k] + cell_moment(i, k, v);
    }

    double row_primitive(std::size_t i, double xi) const { return row_cumulative(i, xi) - row_cumulative(i, 0.0); }
    double row_moment(std::size_t i, double xi) const {
        return row_cumulative_moment(i, xi) - row_cumulative_moment(i, 0.0);
    }

    double r_max_, v_max_;
    std::size_t nr_, nv_;
    std::vector<double> values_;
    double hr_ = 0.0, hv_ = 0.0;
    std::vector<double> cum_, cum_moment_;
};

/// Preisach density rho(r, v) together with the offset G-bar and the
/// regularity bounds used by validation and the wave bounds.
class PreisachDensity {
  public:
    using Kind = std::variant<ConstantDensity, SeparableDensity, GridDensity>;

    /// Absolute tolerance of the composite trapezoid used for grid densities.
    static constexpr double grid_quadrature_tol = 1e-10;

    explicit PreisachDensity(Kind kind, double gbar = 0.0, std::optional<double> rho1 = std::nullopt,
                             bool saturation_required = false)
        : kind_(std::move(kind)), gbar_(gbar), saturation_required_(saturation_required) {
        if (!(gbar_ >= 0.0 && gbar_ <= 1.0)) throw DomainError("density: gbar must lie in [0, 1]");
        std::visit([](const auto& k) { check(k); }, kind_);
        rho1_ = rho1.value_or(2.0 * sup());
        if (!(rho1_ > 0.0)) throw DomainError("density: rho1 must be positive");
    }

    static PreisachDensity constant(double value, double gbar = 0.0, double r_max = kInf, double v_max = kInf) {
        return PreisachDensity(ConstantDensity{value, r_max, v_max}, gbar);
    }

    const Kind& kind() const noexcept { return kind_; }
    double gbar() const noexcept { return gbar_; }
    double rho1() const noexcept { return rho1_; }
    bool saturation_required() const noexcept { return saturation_required_; }

    std::string_view kind_name() const {
        switch (kind_.index()) {
        case 0: return "constant";
        case 1: return "separable";
        default: return "grid";
        }
    }

    /// Extent of the support in r (infinite for unbounded densities).
    double r_support() const { return extent().first; }
    double v_support() const { return extent().second; }

    double operator()(double r, double v) const {
        return std::visit(
            [&](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, GridDensity>) {
                    return k(r, v);
                } else {
                    if (r < 0.0 || r > k.r_max || std::abs(v) > k.v_max) return 0.0;
                    if constexpr (std::is_same_v<T, ConstantDensity>)
                        return k.value;
                    else
                        return k.amplitude * std::exp(-r / k.r_scale - std::abs(v) / k.v_scale);
                }
            },
            kind_);
    }

    /// \int_0^xi rho(r, v) dv (negative for xi < 0).
    double inner(double r, double xi) const {
        return std::visit(
            [&](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, GridDensity>) {
                    return k.inner(r, xi);
                } else {
                    if (r < 0.0 || r > k.r_max) return 0.0;
                    if constexpr (std::is_same_v<T, ConstantDensity>) {
                        return k.value * detail::clamp_sym(xi, k.v_max);
                    } else {
                        const double m = std::min(std::abs(xi), k.v_max);
                        const double g = k.v_scale * -std::expm1(-m / k.v_scale);
                        return std::copysign(k.amplitude * std::exp(-r / k.r_scale) * g, xi);
                    }
                }
            },
            kind_);
    }

    /// \int_0^xi v rho(r, v) dv (nonnegative).
    double moment(double r, double xi) const {
        return std::visit(
            [&](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, GridDensity>) {
                    return k.moment(r, xi);
                } else {
                    if (r < 0.0 || r > k.r_max) return 0.0;
                    const double m = std::min(std::abs(xi), k.v_max);
                    if constexpr (std::is_same_v<T, ConstantDensity>) {
                        return 0.5 * k.value * m * m;
                    } else {
                        const double l = k.v_scale;
                        const double h = l * l * (-std::expm1(-m / l)) - l * m * std::exp(-m / l);
                        return k.amplitude * std::exp(-r / k.r_scale) * h;
                    }
                }
            },
            kind_);
    }

    /// \int_{r1}^{r2} inner(r, xi(r)) dr along a straight segment.
    double segment_inner(const Segment& seg) const {
        return std::visit([&](const auto& k) { return segment_inner_impl(k, seg); }, kind_);
    }

    /// \int_{r1}^{r2} moment(r, xi(r)) dr along a straight segment.
    double segment_moment(const Segment& seg) const {
        return std::visit([&](const auto& k) { return segment_moment_impl(k, seg); }, kind_);
    }

    /// \int_{r1}^{r2} rho(r, xi(r)) dr along a straight segment.
    double line(const Segment& seg) const {
        return std::visit([&](const auto& k) { return line_impl(k, seg); }, kind_);
    }

    double sup() const {
        return std::visit(
            [](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, ConstantDensity>)
                    return k.value;
                else if constexpr (std::is_same_v<T, SeparableDensity>)
                    return k.amplitude;
                else
                    return k.max_value();
            },
            kind_);
    }

    /// Infimum of rho over (0, U) x (-U, U); zero when the box leaves the support.
    double inf_over(double U) const {
        return std::visit(
            [&](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, GridDensity>) {
                    if (U > k.r_max() || U > k.v_max()) return 0.0;
                    return k.min_over(U);
                } else {
                    if (U > k.r_max || U > k.v_max) return 0.0;
                    if constexpr (std::is_same_v<T, ConstantDensity>)
                        return k.value;
                    else
                        return k.amplitude * std::exp(-U / k.r_scale - U / k.v_scale);
                }
            },
            kind_);
    }

    /// Decreasing lower bound rho0(U) with 0 < rho0(U) < rho on (0,U)x(-U,U)
    /// whenever the density is positive there.
    double rho0(double U) const { return 0.5 * inf_over(U); }

    /// \int_0^inf \int_0^inf rho(r, v) dv dr
    double wetting_mass() const { return half_mass(+1.0); }
    /// \int_0^inf \int_0^inf rho(r, -v) dv dr
    double drying_mass() const { return half_mass(-1.0); }

  private:
    std::pair<double, double> extent() const {
        return std::visit(
            [](const auto& k) -> std::pair<double, double> {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, GridDensity>)
                    return {k.r_max(), k.v_max()};
                else
                    return {k.r_max, k.v_max};
            },
            kind_);
    }

    static void check(const ConstantDensity& k) {
        if (!(k.value >= 0.0) || !std::isfinite(k.value)) throw DomainError("constant density: value must be >= 0");
        if (!(k.r_max > 0.0) || !(k.v_max > 0.0)) throw DomainError("constant density: support must be positive");
    }
    static void check(const SeparableDensity& k) {
        if (!(k.amplitude >= 0.0) || !std::isfinite(k.amplitude))
            throw DomainError("separable density: amplitude must be >= 0");
        if (!(k.r_scale > 0.0) || !(k.v_scale > 0.0) || !std::isfinite(k.r_scale) || !std::isfinite(k.v_scale))
            throw DomainError("separable density: decay scales must be positive and finite");
        if (!(k.r_max > 0.0) || !(k.v_max > 0.0)) throw DomainError("separable density: support must be positive");
    }
    static void check(const GridDensity&) {}

    double half_mass(double sign) const {
        return std::visit(
            [&](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, ConstantDensity>) {
                    return k.value * k.r_max * k.v_max;
                } else if constexpr (std::is_same_v<T, SeparableDensity>) {
                    const double fr = std::isfinite(k.r_max) ? -std::expm1(-k.r_max / k.r_scale) : 1.0;
                    const double fv = std::isfinite(k.v_max) ? -std::expm1(-k.v_max / k.v_scale) : 1.0;
                    return k.amplitude * k.r_scale * fr * k.v_scale * fv;
                } else {
                    const double v = sign * k.v_max();
                    return sign * segment_inner_impl(k, Segment{0.0, v, k.r_max(), v});
                }
            },
            kind_);
    }

    // ---- constant ----
    static double segment_inner_impl(const ConstantDensity& k, const Segment& seg) {
        double sum = 0.0;
        detail::for_each_piece(seg, k.r_max, std::array<double, 2>{-k.v_max, k.v_max}, [&](const Segment& p) {
            sum += 0.5 * (p.r2 - p.r1)
                   * (detail::clamp_sym(p.x1, k.v_max) + detail::clamp_sym(p.x2, k.v_max));
        });
        return k.value * sum;
    }

    static double segment_moment_impl(const ConstantDensity& k, const Segment& seg) {
        double sum = 0.0;
        detail::for_each_piece(seg, k.r_max, std::array<double, 2>{-k.v_max, k.v_max}, [&](const Segment& p) {
            const double a = detail::clamp_sym(p.x1, k.v_max);
            const double b = detail::clamp_sym(p.x2, k.v_max);
            sum += (p.r2 - p.r1) * (a * a + a * b + b * b) / 3.0;
        });
        return 0.5 * k.value * sum;
    }

    static double line_impl(const ConstantDensity& k, const Segment& seg) {
        double len = 0.0;
        detail::for_each_piece(seg, k.r_max, std::array<double, 2>{-k.v_max, k.v_max}, [&](const Segment& p) {
            if (std::abs(0.5 * (p.x1 + p.x2)) <= k.v_max) len += p.r2 - p.r1;
        });
        return k.value * len;
    }

    // ---- separable exponential ----
    static double segment_inner_impl(const SeparableDensity& k, const Segment& seg) {
        const double A = k.amplitude;
        const double lr = k.r_scale;
        const double lv = k.v_scale;
        double sum = 0.0;
        detail::for_each_piece(seg, k.r_max, std::array<double, 3>{-k.v_max, 0.0, k.v_max}, [&](const Segment& p) {
            const double d = p.r2 - p.r1;
            const double mid = 0.5 * (p.x1 + p.x2);
            const double er = std::exp(-p.r1 / lr);
            const double base = detail::exp_integral(1.0 / lr, d);
            if (std::abs(mid) >= k.v_max) {
                const double g = lv * -std::expm1(-k.v_max / lv);
                sum += std::copysign(A * g * er * base, mid);
                return;
            }
            const double s = p.slope();
            if (mid >= 0.0) {
                sum += A * lv * er * (base - std::exp(-p.x1 / lv) * detail::exp_integral(1.0 / lr + s / lv, d));
            } else {
                sum -= A * lv * er * (base - std::exp(p.x1 / lv) * detail::exp_integral(1.0 / lr - s / lv, d));
            }
        });
        return sum;
    }

    double segment_moment_impl(const SeparableDensity& k, const Segment& seg) const {
        double sum = 0.0;
        detail::for_each_piece(seg, k.r_max, std::array<double, 3>{-k.v_max, 0.0, k.v_max}, [&](const Segment& p) {
            sum += numerics::adaptive_gauss([&](double r) { return moment(r, p.at(r)); }, p.r1, p.r2, 1e-16);
        });
        return sum;
    }

    static double line_impl(const SeparableDensity& k, const Segment& seg) {
        double sum = 0.0;
        detail::for_each_piece(seg, k.r_max, std::array<double, 3>{-k.v_max, 0.0, k.v_max}, [&](const Segment& p) {
            const double mid = 0.5 * (p.x1 + p.x2);
            if (std::abs(mid) > k.v_max) return;
            const double d = p.r2 - p.r1;
            const double s = p.slope();
            const double er = std::exp(-p.r1 / k.r_scale);
            if (mid >= 0.0)
                sum += k.amplitude * er * std::exp(-p.x1 / k.v_scale)
                       * detail::exp_integral(1.0 / k.r_scale + s / k.v_scale, d);
            else
                sum += k.amplitude * er * std::exp(p.x1 / k.v_scale)
                       * detail::exp_integral(1.0 / k.r_scale - s / k.v_scale, d);
        });
        return sum;
    }

    // ---- grid: composite trapezoid with Richardson check, per r-cell ----
    template<class F>
    static double grid_segment(const GridDensity& k, const Segment& seg, F&& integrand) {
        double sum = 0.0;
        detail::for_each_piece(seg, k.r_max(), std::array<double, 0>{}, [&](const Segment& p) {
            const double h = k.r_spacing();
            double a = p.r1;
            while (a < p.r2) {
                const double next_line = (std::floor(a / h + 1e-12) + 1.0) * h;
                const double b = std::min(p.r2, next_line);
                if (b > a)
                    sum += numerics::trapezoid_richardson([&](double r) { return integrand(r, p.at(r)); }, a, b,
                                                          grid_quadrature_tol);
                a = b;
            }
        });
        return sum;
    }

    static double segment_inner_impl(const GridDensity& k, const Segment& seg) {
        return grid_segment(k, seg, [&](double r, double x) { return k.inner(r, x); });
    }
    double segment_moment_impl(const GridDensity& k, const Segment& seg) const {
        return grid_segment(k, seg, [&](double r, double x) { return k.moment(r, x); });
    }
    static double line_impl(const GridDensity& k, const Segment& seg) {
        return grid_segment(k, seg, [&](double r, double x) { return k(r, x); });
    }

    Kind kind_;
    double gbar_;
    double rho1_ = 0.0;
    bool saturation_required_;
};

}  // namespace hystflow
