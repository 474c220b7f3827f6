#pragma once

// Brute-force reference implementations. Slow on purpose; used to cross-check
// the real algorithms on small instances.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "plurality/approx_best.hpp"
#include "plurality/decision.hpp"
#include "plurality/geometry.hpp"

namespace plurality {

namespace detail {

struct Box {
    std::vector<double> lo, hi;
};

/// Bounding box of V and the extra points, scaled by `factor` about its centre.
inline Box scaled_box(const VoterSet& voters, std::initializer_list<const Point*> extra, double factor) {
    const std::size_t d = voters.dim();
    Box b{std::vector<double>(d, std::numeric_limits<double>::infinity()),
          std::vector<double>(d, -std::numeric_limits<double>::infinity())};
    auto grow = [&](const Point& p) {
        for (std::size_t k = 0; k < d; ++k) {
            b.lo[k] = std::min(b.lo[k], p[k]);
            b.hi[k] = std::max(b.hi[k], p[k]);
        }
    };
    for (const auto& v : voters) grow(v);
    for (const Point* p : extra) grow(*p);
    const double diam = instance_scale(voters, extra);
    for (std::size_t k = 0; k < d; ++k) {
        const double c = 0.5 * (b.lo[k] + b.hi[k]);
        const double half = std::max(0.5 * (b.hi[k] - b.lo[k]) * factor, 1e-3 * diam);
        b.lo[k] = c - half;
        b.hi[k] = c + half;
    }
    return b;
}

/// Calls f on every point of a res^d lattice spanning the box (corners included).
template <class F>
void for_each_lattice_point(const Box& box, std::size_t res, F&& f) {
    const std::size_t d = box.lo.size();
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> c(d);
    for (;;) {
        for (std::size_t k = 0; k < d; ++k) {
            const double t = res == 1 ? 0.5 : static_cast<double>(idx[k]) / static_cast<double>(res - 1);
            c[k] = box.lo[k] + t * (box.hi[k] - box.lo[k]);
        }
        f(Point(c));
        std::size_t k = 0;
        while (k < d && ++idx[k] == res) idx[k++] = 0;
        if (k == d) return;
    }
}

/// Points where two circles meet (empty, one or two points).
inline std::vector<Point> circle_intersections(const Point& c1, double r1, const Point& c2, double r2) {
    const double dx = c2.x() - c1.x(), dy = c2.y() - c1.y();
    const double d = std::hypot(dx, dy);
    if (d == 0.0 || d > r1 + r2 || d < std::abs(r1 - r2)) return {};
    const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    const double h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
    const double mx = c1.x() + a * dx / d, my = c1.y() + a * dy / d;
    if (h == 0.0) return {Point{mx, my}};
    return {Point{mx - h * dy / d, my + h * dx / d}, Point{mx + h * dy / d, my - h * dx / d}};
}

}  // namespace detail

/// Dense competitor search: a grid over 1.5x the bounding box of V and p, and the
/// voters themselves. In the plane also every circle-circle intersection point,
/// voter and p, each nudged in eight compass directions and into the lens at
/// intersection points.
inline Verdict oracle_decide(const VoterSet& voters, const Point& p, double beta, std::size_t grid_res) {
    require_beta(beta);
    require_dim(voters, p);
    if (grid_res < 8) throw std::invalid_argument("oracle_decide: grid_res must be at least 8");
    Verdict best;
    best.advantage = std::numeric_limits<long long>::min();
    auto consider = [&](const Point& q) {
        const long long adv = depth_at(voters, p, beta, q).advantage();
        if (adv > best.advantage) {
            best.advantage = adv;
            best.witness = q;
        }
    };
    detail::for_each_lattice_point(detail::scaled_box(voters, {&p}, 1.5), grid_res, consider);
    for (const auto& v : voters) consider(v);

    if (voters.dim() == 2) {
        const double diam = instance_scale(voters, {&p});
        const double delta = 1e-7 * diam;
        auto nudged = [&](const Point& q) {
            consider(q);
            for (int k = 0; k < 8; ++k) {
                const double a = k * std::numbers::pi / 4.0;
                consider(Point{q.x() + delta * std::cos(a), q.y() + delta * std::sin(a)});
            }
        };
        std::vector<double> radius(voters.size());
        for (std::size_t i = 0; i < voters.size(); ++i) radius[i] = beta * distance(p, voters[i]);
        nudged(p);
        for (const auto& v : voters) nudged(v);
        for (std::size_t i = 0; i < voters.size(); ++i) {
            if (radius[i] == 0.0) continue;
            for (std::size_t j = i + 1; j < voters.size(); ++j) {
                if (radius[j] == 0.0) continue;
                for (const auto& x : detail::circle_intersections(voters[i], radius[i], voters[j], radius[j])) {
                    nudged(x);
                    // step into the lens along the sum of the inward normals
                    const double ux = voters[i].x() - x.x(), uy = voters[i].y() - x.y();
                    const double wx = voters[j].x() - x.x(), wy = voters[j].y() - x.y();
                    const double nx = ux / std::hypot(ux, uy) + wx / std::hypot(wx, wy);
                    const double ny = uy / std::hypot(ux, uy) + wy / std::hypot(wx, wy);
                    const double len = std::hypot(nx, ny);
                    if (len > 0.0) consider(Point{x.x() + delta * nx / len, x.y() + delta * ny / len});
                }
            }
        }
    }
    if (best.advantage >= 1) {
        best.answer = Answer::No;
    } else {
        best.answer = Answer::Yes;
        best.witness.reset();
    }
    return best;
}

struct OracleBestOptions {
    /// Refinement passes around the best lattice point.
    std::size_t passes = 1;
    /// Lattice resolution used by oracle_decide when d >= 3.
    std::size_t decide_grid = 24;
};

/// beta(p, V) by bisection: exact decision in the plane, grid oracle otherwise.
inline BetaBracket oracle_beta_of_point(const VoterSet& voters, const Point& p, double tol,
                                        const OracleBestOptions& opt = {}) {
    if (voters.dim() == 2) return exact_beta_of_point_2d(voters, p, tol);
    auto yes = [&](double b) { return oracle_decide(voters, p, b, opt.decide_grid).yes(); };
    if (yes(1.0)) return {1.0, 1.0, false};
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (yes(mid) ? lo : hi) = mid;
    }
    return {lo, hi, false};
}

/// Best beta over a lattice covering the voters' bounding box, refined around
/// the best lattice point. Intended for small planar instances.
inline BestPointResult oracle_best_point(const VoterSet& voters, std::size_t point_grid_res, double beta_tol,
                                         const OracleBestOptions& opt = {}) {
    if (point_grid_res < 2) throw std::invalid_argument("oracle_best_point: resolution must be at least 2");
    BestPointResult best{voters[0], -1.0, {}, {}, 0, 0, 0};
    const double scan_tol = std::max(beta_tol, 1e-4);
    auto scan = [&](const detail::Box& box) {
        detail::for_each_lattice_point(box, point_grid_res, [&](const Point& q) {
            ++best.candidates;
            // beta(q) is at most the level at which the incumbent beats q
            if (best.beta_hat > 0.0 && competitor_upper_bound(voters, q, best.point) <= best.beta_hat) return;
            const BetaBracket br = oracle_beta_of_point(voters, q, scan_tol, opt);
            ++best.evaluated;
            if (br.lo > best.beta_hat) {
                best.beta_hat = br.lo;
                best.point = q;
                best.bracket = br;
            }
        });
    };
    detail::Box box = detail::scaled_box(voters, {}, 1.0);
    // voters themselves are candidates too: a duplicated majority can sit at one voter
    for (const auto& v : voters) {
        const BetaBracket br = oracle_beta_of_point(voters, v, scan_tol, opt);
        if (br.lo > best.beta_hat) {
            best.beta_hat = br.lo;
            best.point = v;
            best.bracket = br;
        }
    }
    scan(box);
    for (std::size_t pass = 0; pass < opt.passes; ++pass) {
        detail::Box next = box;
        for (std::size_t k = 0; k < voters.dim(); ++k) {
            const double cell = (box.hi[k] - box.lo[k]) / static_cast<double>(point_grid_res - 1);
            next.lo[k] = best.point[k] - cell;
            next.hi[k] = best.point[k] + cell;
        }
        box = next;
        scan(box);
    }
    best.bracket = oracle_beta_of_point(voters, best.point, beta_tol, opt);
    best.beta_hat = best.bracket.lo;
    return best;
}

}  // namespace plurality
