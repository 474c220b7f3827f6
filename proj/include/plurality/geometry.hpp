#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plurality/exact.hpp"

namespace plurality {

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A location in R^d: a voter, a proposal, or a competitor.
class Point {
public:
    Point() = default;
    explicit Point(std::vector<double> coords) : coords_(std::move(coords)) { validate(); }
    Point(std::initializer_list<double> coords) : coords_(coords) { validate(); }

    static Point zero(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    double x() const { return coords_[0]; }
    double y() const { return coords_[1]; }
    std::span<const double> coords() const noexcept { return coords_; }

    friend bool operator==(const Point&, const Point&) = default;

private:
    void validate() const {
        for (double c : coords_) {
            if (!std::isfinite(c)) throw std::invalid_argument("point coordinate is not finite");
        }
    }

    std::vector<double> coords_;
};

inline void require_same_dim(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
}

inline double squared_distance(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

inline double distance(const Point& a, const Point& b) {
    require_same_dim(a, b);
    // hypot-style scaling keeps tiny and huge coordinates accurate
    double scale = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) scale = std::max(scale, std::abs(a[i] - b[i]));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double t = (a[i] - b[i]) / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

/// a + t * (b - a)
inline Point lerp(const Point& a, const Point& b, double t) {
    require_same_dim(a, b);
    std::vector<double> c(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) c[i] = a[i] + t * (b[i] - a[i]);
    return Point(std::move(c));
}

/// origin + scale * direction
inline Point offset(const Point& origin, std::span<const double> direction, double scale) {
    if (direction.size() != origin.dim()) throw DimensionError("offset: dimension mismatch");
    std::vector<double> c(origin.dim());
    for (std::size_t i = 0; i < origin.dim(); ++i) c[i] = origin[i] + scale * direction[i];
    return Point(std::move(c));
}

/// Multiset of voters sharing one dimension. Input order is kept and is the tie-break key.
class VoterSet {
public:
    VoterSet(std::size_t dim, std::vector<Point> voters) : dim_(dim), voters_(std::move(voters)) { validate(); }

    explicit VoterSet(std::vector<Point> voters) : voters_(std::move(voters)) {
        dim_ = voters_.empty() ? 0 : voters_.front().dim();
        validate();
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return voters_.size(); }
    const Point& operator[](std::size_t i) const { return voters_[i]; }
    const std::vector<Point>& voters() const noexcept { return voters_; }
    auto begin() const { return voters_.begin(); }
    auto end() const { return voters_.end(); }

    /// Voter set used by balanced-line computations: the largest-index voter is
    /// dropped when n is even so that every orientation has a unique balanced line.
    VoterSet odd_reduced() const {
        if (voters_.size() % 2 == 1) return *this;
        std::vector<Point> kept(voters_.begin(), voters_.end() - 1);
        return VoterSet(dim_, std::move(kept));
    }

    /// Diameter of the axis-aligned bounding box, at least 1 for degenerate sets.
    double scale() const {
        double s = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            double lo = voters_[0][k], hi = voters_[0][k];
            for (const auto& v : voters_) {
                lo = std::min(lo, v[k]);
                hi = std::max(hi, v[k]);
            }
            s += (hi - lo) * (hi - lo);
        }
        s = std::sqrt(s);
        return s > 0.0 ? s : 1.0;
    }

private:
    void validate() const {
        if (dim_ == 0) throw std::invalid_argument("voter set dimension must be positive");
        if (voters_.empty()) throw std::invalid_argument("voter set must contain at least one voter");
        for (const auto& v : voters_) {
            if (v.dim() != dim_) throw DimensionError("voter dimension differs from voter set dimension");
        }
    }

    std::size_t dim_ = 0;
    std::vector<Point> voters_;
};

inline void require_dim(const VoterSet& voters, const Point& p) {
    if (p.dim() != voters.dim()) {
        throw DimensionError("point has dimension " + std::to_string(p.dim()) +
                             ", voter set has dimension " + std::to_string(voters.dim()));
    }
}

/// Diameter of the bounding box of voters plus any extra points; 1 if degenerate.
inline double instance_scale(const VoterSet& voters, std::initializer_list<const Point*> extra = {}) {
    const std::size_t d = voters.dim();
    std::vector<double> lo(voters[0].coords().begin(), voters[0].coords().end());
    std::vector<double> hi = lo;
    auto grow = [&](const Point& p) {
        for (std::size_t k = 0; k < d; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    };
    for (const auto& v : voters) grow(v);
    for (const Point* p : extra) grow(*p);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += (hi[k] - lo[k]) * (hi[k] - lo[k]);
    s = std::sqrt(s);
    return s > 0.0 ? s : 1.0;
}

// ---------------------------------------------------------------------------
// Planar lines

enum class Side { Left, On, Right };

/// Planar line with orientation theta in [0, pi), measured counterclockwise from
/// the positive y-axis. Direction (-sin theta, cos theta), normal (cos theta, sin theta).
struct Line2 {
    double theta = 0.0;
    Point anchor = Point::zero(2);

    double dir_x() const { return -std::sin(theta); }
    double dir_y() const { return std::cos(theta); }
    double normal_x() const { return std::cos(theta); }
    double normal_y() const { return std::sin(theta); }
    /// Signed offset of the line along its normal.
    double offset() const { return normal_x() * anchor.x() + normal_y() * anchor.y(); }
};

inline double normalize_orientation(double theta) {
    constexpr double pi = std::numbers::pi;
    theta = std::fmod(theta, pi);
    if (theta < 0.0) theta += pi;
    if (theta >= pi) theta -= pi;
    return theta;
}

/// Projection of v onto the unit normal of orientation theta.
inline double project(const Point& v, double theta) {
    return std::cos(theta) * v.x() + std::sin(theta) * v.y();
}

namespace detail {

/// Index of the lower median (rank ceil(k/2), 1-indexed) of keys, found by selection.
inline std::size_t lower_median_index(std::vector<std::pair<double, std::size_t>>& keyed) {
    const std::size_t k = (keyed.size() - 1) / 2;
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end());
    return keyed[k].second;
}

}  // namespace detail

/// Index of the voter through which the balanced line of orientation theta passes.
/// Expects an odd-reduced voter set for uniqueness; for even n returns the lower median.
inline std::size_t balanced_pivot(const VoterSet& voters, double theta) {
    std::vector<std::pair<double, std::size_t>> keyed;
    keyed.reserve(voters.size());
    const double c = std::cos(theta), s = std::sin(theta);
    for (std::size_t i = 0; i < voters.size(); ++i) {
        keyed.emplace_back(c * voters[i].x() + s * voters[i].y(), i);
    }
    return detail::lower_median_index(keyed);
}

/// Balanced line of orientation theta. Even-size sets are reduced first by
/// dropping their last voter.
inline Line2 balanced_line(const VoterSet& voters, double theta) {
    if (voters.dim() != 2) throw DimensionError("balanced_line requires planar voters");
    theta = normalize_orientation(theta);
    if (voters.size() % 2 == 0) return balanced_line(voters.odd_reduced(), theta);
    const std::size_t pivot = balanced_pivot(voters, theta);
    const double m = project(voters[pivot], theta);
    return Line2{theta, Point{m * std::cos(theta), m * std::sin(theta)}};
}

/// Relative band around a line inside which side_of reports On.
inline constexpr double kSideTolerance = 1e-9;

/// Side of p relative to the directed line. `scale` is the instance diameter used
/// to make the band relative. The direction comes from a rounded angle, so an
/// exact sign inside the band would only certify rounding noise.
inline Side side_of(const Line2& line, const Point& p, double scale = 1.0) {
    if (p.dim() != 2) throw DimensionError("side_of requires a planar point");
    const double dx = line.dir_x(), dy = line.dir_y();
    const double rx = p.x() - line.anchor.x(), ry = p.y() - line.anchor.y();
    const double cross = dx * ry - dy * rx;
    if (std::abs(cross) <= kSideTolerance * scale) return Side::On;
    return cross > 0.0 ? Side::Left : Side::Right;
}

/// Intersection of two non-parallel lines.
inline Point intersect(const Line2& a, const Line2& b) {
    // n_a . x = c_a, n_b . x = c_b
    const double a1 = a.normal_x(), b1 = a.normal_y(), c1 = a.offset();
    const double a2 = b.normal_x(), b2 = b.normal_y(), c2 = b.offset();
    const double det = a1 * b2 - a2 * b1;
    if (det == 0.0) throw std::domain_error("intersect: parallel lines");
    return Point{(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det};
}

/// Signed distance of p from the line, positive on the normal side.
inline double signed_distance(const Line2& line, const Point& p) {
    return line.normal_x() * p.x() + line.normal_y() * p.y() - line.offset();
}

// ---------------------------------------------------------------------------
// Cones and sphere coverings

/// Cone with apex, unit axis and half opening angle.
struct Cone {
    Point apex;
    std::vector<double> axis;
    double half_angle = 0.0;
};

inline double norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Angle between two nonzero vectors, robust near 0 and pi.
inline double angle_between(std::span<const double> a, std::span<const double> b) {
    double cross2 = 0.0;
    const double na = norm(a), nb = norm(b);
    // |a x b|^2 via Lagrange identity over all coordinate pairs
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double c = (a[i] / na) * (b[j] / nb) - (a[j] / na) * (b[i] / nb);
            cross2 += c * c;
        }
    }
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] / na) * (b[i] / nb);
    return std::atan2(std::sqrt(cross2), d);
}

namespace detail {

/// Deterministic orthonormal frame: identity for attempt 0, random rotation otherwise.
inline std::vector<std::vector<double>> rotation_frame(std::size_t d, std::uint64_t seed) {
    std::vector<std::vector<double>> rows(d, std::vector<double>(d, 0.0));
    if (seed == 0) {
        for (std::size_t i = 0; i < d; ++i) rows[i][i] = 1.0;
        return rows;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (;;) {
            for (auto& x : rows[i]) x = gauss(rng);
            for (std::size_t j = 0; j < i; ++j) {
                const double proj = dot(rows[i], rows[j]);
                for (std::size_t k = 0; k < d; ++k) rows[i][k] -= proj * rows[j][k];
            }
            const double len = norm(rows[i]);
            if (len > 1e-6) {
                for (auto& x : rows[i]) x /= len;
                break;
            }
        }
    }
    return rows;
}

}  // namespace detail

/// Partition of R^d into cones with apex at the origin such that any two directions
/// in one cone make an angle of at most `opening`. In the plane the cones are equal
/// sectors; for d >= 3 each face of the cube [-1,1]^d is split into a k^(d-1) grid
/// and each grid cell spans one cone. An optional rotation of the whole frame is
/// used to move cone boundaries away from given directions.
class ConePartition {
public:
    ConePartition(std::size_t dim, double opening, std::uint64_t rotation_seed = 0)
        : dim_(dim), opening_(opening), frame_(detail::rotation_frame(dim, rotation_seed)) {
        if (dim == 0) throw std::invalid_argument("cone partition: dimension must be positive");
        if (!(opening > 0.0 && opening < std::numbers::pi / 2)) {
            throw std::invalid_argument("cone partition: opening must lie in (0, pi/2)");
        }
        if (dim == 1) {
            sectors_ = 2;
        } else if (dim == 2) {
            sectors_ = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / opening - 1e-12));
            sectors_ = std::max<std::size_t>(sectors_, 3);
            start_angle_ = rotation_seed == 0 ? -std::numbers::pi / sectors_
                                              : std::atan2(frame_[0][1], frame_[0][0]);
        } else {
            // chord of a face cell is at most (2/k) sqrt(d-1), seen from distance >= 1
            cells_per_edge_ = static_cast<std::size_t>(
                std::ceil(std::sqrt(static_cast<double>(dim - 1)) / std::tan(opening / 2.0) - 1e-12));
            cells_per_edge_ = std::max<std::size_t>(cells_per_edge_, 1);
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    double opening() const noexcept { return opening_; }

    std::size_t size() const {
        if (dim_ <= 2) return sectors_;
        std::size_t per_face = 1;
        for (std::size_t i = 0; i + 1 < dim_; ++i) per_face *= cells_per_edge_;
        return 2 * dim_ * per_face;
    }

    /// Cone index containing direction u (u need not be normalized, must be nonzero).
    std::size_t locate(std::span<const double> u) const { return locate_impl(u, nullptr); }

    /// True when u lies within `tol` (angular, roughly) of a cone boundary.
    bool near_boundary(std::span<const double> u, double tol = 1e-12) const {
        double margin = 0.0;
        locate_impl(u, &margin);
        return margin <= tol;
    }

    /// Extreme rays of all cones of the frame, as unit vectors.
    std::vector<std::vector<double>> rays() const {
        std::vector<std::vector<double>> out;
        if (dim_ == 1) return {{1.0}, {-1.0}};
        if (dim_ == 2) {
            for (std::size_t j = 0; j < sectors_; ++j) {
                const double a = start_angle_ + 2.0 * std::numbers::pi * static_cast<double>(j) / sectors_;
                out.push_back({std::cos(a), std::sin(a)});
            }
            return out;
        }
        for (auto& local : cube_surface_lattice(dim_, cells_per_edge_)) out.push_back(to_world(local));
        return out;
    }

    /// Every cone of the frame with apex at the origin.
    std::vector<Cone> cones() const {
        std::vector<Cone> out;
        if (dim_ == 1) {
            out.push_back({Point{0.0}, {1.0}, 0.0});
            out.push_back({Point{0.0}, {-1.0}, 0.0});
            return out;
        }
        if (dim_ == 2) {
            const double w = 2.0 * std::numbers::pi / sectors_;
            for (std::size_t j = 0; j < sectors_; ++j) {
                const double a = start_angle_ + w * (static_cast<double>(j) + 0.5);
                out.push_back({Point::zero(2), {std::cos(a), std::sin(a)}, w / 2.0});
            }
            return out;
        }
        const std::size_t k = cells_per_edge_;
        const double h = 2.0 / static_cast<double>(k);
        const std::size_t per_face = size() / (2 * dim_);
        for (std::size_t face = 0; face < 2 * dim_; ++face) {
            const std::size_t axis = face / 2;
            const double sign = face % 2 == 0 ? 1.0 : -1.0;
            for (std::size_t cell = 0; cell < per_face; ++cell) {
                std::vector<double> lo(dim_), center(dim_);
                std::size_t rem = cell;
                for (std::size_t i = 0; i < dim_; ++i) {
                    if (i == axis) {
                        lo[i] = center[i] = sign;
                        continue;
                    }
                    const std::size_t idx = rem % k;
                    rem /= k;
                    lo[i] = -1.0 + h * static_cast<double>(idx);
                    center[i] = lo[i] + h / 2.0;
                }
                std::vector<double> axis_dir = center;
                const double len = norm(axis_dir);
                for (auto& x : axis_dir) x /= len;
                double half = 0.0;
                for (std::size_t corner = 0; corner < (std::size_t{1} << (dim_ - 1)); ++corner) {
                    std::vector<double> c = lo;
                    std::size_t bit = 0;
                    for (std::size_t i = 0; i < dim_; ++i) {
                        if (i == axis) continue;
                        if ((corner >> bit) & 1U) c[i] += h;
                        ++bit;
                    }
                    half = std::max(half, angle_between(axis_dir, c));
                }
                out.push_back({Point::zero(dim_), to_world(axis_dir), half});
            }
        }
        return out;
    }

    /// Lattice points on the surface of [-1,1]^d with k cells per edge.
    static std::vector<std::vector<double>> cube_surface_lattice(std::size_t d, std::size_t k) {
        std::vector<std::vector<double>> out;
        const double h = 2.0 / static_cast<double>(k);
        std::vector<std::size_t> idx(d, 0);
        for (;;) {
            bool on_surface = false;
            std::vector<double> v(d);
            for (std::size_t i = 0; i < d; ++i) {
                v[i] = idx[i] == k ? 1.0 : -1.0 + h * static_cast<double>(idx[i]);
                if (idx[i] == 0 || idx[i] == k) on_surface = true;
            }
            if (on_surface) {
                const double len = norm(v);
                for (auto& x : v) x /= len;
                out.push_back(std::move(v));
            }
            std::size_t i = 0;
            while (i < d && ++idx[i] > k) idx[i++] = 0;
            if (i == d) break;
        }
        return out;
    }

private:
    std::vector<double> to_local(std::span<const double> u) const {
        std::vector<double> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i) out[i] = dot(frame_[i], u);
        return out;
    }

    std::vector<double> to_world(std::span<const double> local) const {
        std::vector<double> out(dim_, 0.0);
        for (std::size_t i = 0; i < dim_; ++i) {
            for (std::size_t k = 0; k < dim_; ++k) out[k] += local[i] * frame_[i][k];
        }
        return out;
    }

    std::size_t locate_impl(std::span<const double> u, double* margin) const {
        if (u.size() != dim_) throw DimensionError("cone partition: direction dimension mismatch");
        if (dim_ == 1) {
            if (margin) *margin = std::abs(u[0]) / std::max(std::abs(u[0]), 1e-300);
            return u[0] >= 0.0 ? 0 : 1;
        }
        if (dim_ == 2) {
            const double w = 2.0 * std::numbers::pi / sectors_;
            double a = std::atan2(u[1], u[0]) - start_angle_;
            a = std::fmod(a, 2.0 * std::numbers::pi);
            if (a < 0.0) a += 2.0 * std::numbers::pi;
            std::size_t j = static_cast<std::size_t>(a / w);
            if (j >= sectors_) j = sectors_ - 1;
            if (margin) {
                const double frac = a - w * static_cast<double>(j);
                *margin = std::min(frac, w - frac);
            }
            return j;
        }
        const auto local = to_local(u);
        std::size_t axis = 0;
        for (std::size_t i = 1; i < dim_; ++i) {
            if (std::abs(local[i]) > std::abs(local[axis])) axis = i;
        }
        const double big = std::abs(local[axis]);
        const std::size_t face = 2 * axis + (local[axis] >= 0.0 ? 0 : 1);
        const std::size_t k = cells_per_edge_;
        const double h = 2.0 / static_cast<double>(k);
        std::size_t cell = 0, mult = 1;
        double m = 1.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (i == axis) continue;
            const double t = local[i] / big;  // in [-1, 1]
            m = std::min(m, (big - std::abs(local[i])) / big);
            double pos = (t + 1.0) / h;
            std::size_t idx = pos <= 0.0 ? 0 : static_cast<std::size_t>(pos);
            if (idx >= k) idx = k - 1;
            m = std::min(m, std::min(pos - static_cast<double>(idx), static_cast<double>(idx + 1) - pos) * h);
            cell += idx * mult;
            mult *= k;
        }
        if (margin) *margin = m;
        const std::size_t per_face = size() / (2 * dim_);
        return face * per_face + cell;
    }

    std::size_t dim_;
    double opening_;
    std::vector<std::vector<double>> frame_;
    std::size_t sectors_ = 0;
    double start_angle_ = 0.0;
    std::size_t cells_per_edge_ = 0;
};

inline std::vector<Cone> cone_partition(std::size_t d, double opening) {
    return ConePartition(d, opening).cones();
}

/// Number of equally spaced directions on the circle whose angular spacing is
/// 2 asin(r/2), i.e. adjacent samples are at chord distance r.
inline std::size_t circle_cover_count(double covering_radius) {
    const double half = std::min(covering_radius / 2.0, 1.0);
    const double spacing = 2.0 * std::asin(half);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / spacing - 1e-9)));
}

/// Unit vectors such that every point of the unit sphere is within
/// `covering_radius` of one of them.
inline std::vector<std::vector<double>> sphere_cover(std::size_t d, double covering_radius) {
    if (!(covering_radius > 0.0)) throw std::invalid_argument("sphere_cover: covering radius must be positive");
    if (d == 1) return {{1.0}, {-1.0}};
    std::vector<std::vector<double>> out;
    if (d == 2) {
        const std::size_t k = circle_cover_count(covering_radius);
        for (std::size_t j = 0; j < k; ++j) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k);
            out.push_back({std::cos(a), std::sin(a)});
        }
        return out;
    }
    // face lattice with spacing h has points within h sqrt(d-1)/2 of every face point;
    // radial projection onto the sphere does not increase distances outside the ball
    const auto k = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(d - 1)) / covering_radius - 1e-12));
    return ConePartition::cube_surface_lattice(d, std::max<std::size_t>(k, 1));
}

/// Number of points returned by sphere_cover, computed without building them.
inline double sphere_cover_size(std::size_t d, double covering_radius) {
    if (d == 1) return 2.0;
    if (d == 2) return static_cast<double>(circle_cover_count(covering_radius));
    const double k = std::max(1.0, std::ceil(std::sqrt(static_cast<double>(d - 1)) / covering_radius - 1e-12));
    return std::pow(k + 1.0, static_cast<double>(d)) - std::pow(k - 1.0, static_cast<double>(d));
}

// ---------------------------------------------------------------------------
// Convex hull membership

namespace detail {

inline bool in_hull_2d(const VoterSet& voters, const Point& p) {
    // monotone chain with exact orientation, then exact side tests
    std::vector<Point> pts(voters.begin(), voters.end());
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto orient = [](const Point& a, const Point& b, const Point& c) {
        return exact::orient2d(a.x(), a.y(), b.x(), b.y(), c.x(), c.y());
    };
    if (pts.size() == 1) return pts[0] == p;
    std::vector<Point> hull;
    for (int pass = 0; pass < 2; ++pass) {
        const std::size_t base = hull.size();
        for (const auto& q : pts) {
            while (hull.size() >= base + 2 && orient(hull[hull.size() - 2], hull.back(), q) <= 0) hull.pop_back();
            hull.push_back(q);
        }
        hull.pop_back();
        std::reverse(pts.begin(), pts.end());
    }
    if (hull.size() <= 2) {
        // collinear set: p must lie on the segment between the extremes
        const Point& a = pts.front();
        const Point& b = pts.back();
        if (orient(a, b, p) != 0) return false;
        return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
               std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
        if (orient(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
    }
    return true;
}

/// Phase-one simplex: is there lambda >= 0 with A lambda = b?
inline bool feasible_convex_combination(const VoterSet& voters, const Point& p) {
    const std::size_t d = voters.dim(), n = voters.size();
    const std::size_t rows = d + 1, cols = n + rows;  // structural + artificial
    std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols + 1, 0.0));
    double scale = instance_scale(voters, {&p});
    for (std::size_t r = 0; r < rows; ++r) {
        double rhs = r < d ? (p[r]) / scale : 1.0;
        double sign = rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) t[r][j] = sign * (r < d ? voters[j][r] / scale : 1.0);
        t[r][n + r] = 1.0;
        t[r][cols] = sign * rhs;
    }
    std::vector<std::size_t> basis(rows);
    for (std::size_t r = 0; r < rows; ++r) basis[r] = n + r;
    // objective: minimize sum of artificials -> reduced costs
    auto& obj = t[rows];
    for (std::size_t j = 0; j <= cols; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) s += t[r][j];
        obj[j] = (j >= n && j < cols) ? 0.0 : s;
    }
    constexpr double eps = 1e-12;
    for (std::size_t iter = 0; iter < 50 * (rows + cols); ++iter) {
        std::size_t enter = cols;
        for (std::size_t j = 0; j < cols; ++j) {
            if (obj[j] > eps) {  // Bland's rule: first improving column
                enter = j;
                break;
            }
        }
        if (enter == cols) break;
        std::size_t leave = rows;
        double best = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (t[r][enter] > eps) {
                const double ratio = t[r][cols] / t[r][enter];
                if (leave == rows || ratio < best - eps || (ratio <= best + eps && basis[r] < basis[leave])) {
                    best = ratio;
                    leave = r;
                }
            }
        }
        if (leave == rows) break;
        const double piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == leave) continue;
            const double f = t[r][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[r][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    return obj[cols] <= 1e-9;
}

}  // namespace detail

/// Closed convex hull membership: exact in the plane, linear feasibility otherwise.
inline bool in_convex_hull(const VoterSet& voters, const Point& p) {
    require_dim(voters, p);
    if (voters.dim() == 1) {
        double lo = voters[0][0], hi = lo;
        for (const auto& v : voters) {
            lo = std::min(lo, v[0]);
            hi = std::max(hi, v[0]);
        }
        return lo <= p[0] && p[0] <= hi;
    }
    if (voters.dim() == 2) return detail::in_hull_2d(voters, p);
    return detail::feasible_convex_combination(voters, p);
}

}  // namespace plurality
