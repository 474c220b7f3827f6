#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "plurality/dual.hpp"
#include "plurality/geometry.hpp"

namespace plurality {

/// Three balanced lines at orientations theta_bar, theta_bar + pi/3, theta_bar + 2pi/3
/// through one common point.
struct BalancedTriple {
    std::array<Line2, 3> lines;
    Point point = Point::zero(2);
    double theta_bar = 0.0;
};

/// Raised when floating-point trouble breaks an invariant of the dual solver.
class SolverNumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PlanarOptions {
    std::uint64_t seed = 0;
    /// planar_point switches to the bisection solver if the dual solver fails.
    bool fallback_to_bisection = true;
    /// Width of the final orientation interval of the bisection solver.
    double tol_theta = 1e-13;
    /// Crossing-set size at or below which the dual solver stops cutting a region.
    std::size_t small_region = 16;
    std::size_t max_rounds = 200;
};

inline constexpr double kThird = std::numbers::pi / 3.0;

namespace detail {

/// Median of the projections of voters[ids] onto n(theta), skipping `below` lines
/// known to be under the median. Returns (value, voter index).
inline std::pair<double, std::size_t> median_projection(const VoterSet& voters, std::vector<std::size_t>& ids,
                                                        double theta, std::size_t rank) {
    if (rank >= ids.size()) throw SolverNumericalError("median rank outside the tracked line set");
    const double c = std::cos(theta), s = std::sin(theta);
    auto key = [&](std::size_t i) { return c * voters[i].x() + s * voters[i].y(); };
    const auto k = static_cast<std::ptrdiff_t>(rank);
    std::nth_element(ids.begin(), ids.begin() + k, ids.end(),
                     [&](std::size_t u, std::size_t v) { return key(u) < key(v) || (key(u) == key(v) && u < v); });
    const std::size_t idx = ids[static_cast<std::size_t>(k)];
    return {key(idx), idx};
}

/// Concurrency function m(t) - m(t + pi/3) + m(t + 2pi/3) over an odd voter set;
/// zero exactly when the three balanced lines meet in one point.
inline double concurrency_defect(const VoterSet& odd, double theta) {
    std::vector<std::size_t> ids(odd.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    const std::size_t rank = (odd.size() - 1) / 2;
    const double m1 = median_projection(odd, ids, theta, rank).first;
    const double m2 = median_projection(odd, ids, theta + kThird, rank).first;
    const double m3 = median_projection(odd, ids, theta + 2.0 * kThird, rank).first;
    return m1 - m2 + m3;
}

inline std::array<std::size_t, 3> pivots_at(const VoterSet& odd, double theta) {
    std::vector<std::size_t> ids(odd.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    const std::size_t rank = (odd.size() - 1) / 2;
    std::array<std::size_t, 3> out{};
    for (int k = 0; k < 3; ++k) out[k] = median_projection(odd, ids, theta + k * kThird, rank).second;
    return out;
}

inline Point rotate(const Point& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Point{c * v.x() - s * v.y(), s * v.x() + c * v.y()};
}

/// With each line pinned to one voter, the defect is n(theta) . w for a fixed
/// vector w; its zeros are theta = atan2(w) + pi/2 (mod pi). Returns the zero
/// inside [lo, hi] (with a little slack), if any.
inline std::optional<double> snap_orientation(const Point& v1, const Point& v2, const Point& v3, double lo,
                                              double hi, double scale) {
    const Point r2 = rotate(v2, -kThird), r3 = rotate(v3, -2.0 * kThird);
    const double wx = v1.x() - r2.x() + r3.x(), wy = v1.y() - r2.y() + r3.y();
    if (std::hypot(wx, wy) <= 1e-15 * scale) return 0.5 * (lo + hi);
    double t = normalize_orientation(std::atan2(wy, wx) + std::numbers::pi / 2.0);
    const double slack = 1e-9;
    for (double cand : {t, t - std::numbers::pi, t + std::numbers::pi}) {
        if (cand >= lo - slack && cand <= hi + slack) return std::clamp(cand, lo, hi);
    }
    return std::nullopt;
}

/// Builds the triple through the given pivots at orientation theta and checks it
/// against the true balanced lines of the odd voter set.
inline std::optional<BalancedTriple> assemble(const VoterSet& odd, double theta, const std::array<std::size_t, 3>& piv,
                                              double scale, double tol = 1e-9) {
    std::array<std::size_t, 3> p = piv;
    if (theta >= kThird) {
        // same three lines: the one at theta + 2pi/3 = pi becomes the first
        theta = std::max(0.0, theta - kThird);
        p = {piv[2], piv[0], piv[1]};
    }
    BalancedTriple t;
    t.theta_bar = theta;
    for (int k = 0; k < 3; ++k) t.lines[k] = Line2{normalize_orientation(theta + k * kThird), odd[p[k]]};
    try {
        t.point = intersect(t.lines[0], t.lines[1]);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    const std::size_t rank = (odd.size() - 1) / 2;
    std::vector<std::size_t> ids(odd.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    for (int k = 0; k < 3; ++k) {
        const double th = theta + k * kThird;
        const double med = median_projection(odd, ids, th, rank).first;
        const double at_point = std::cos(th) * t.point.x() + std::sin(th) * t.point.y();
        if (std::abs(med - at_point) > tol * scale) return std::nullopt;
    }
    return t;
}

inline std::optional<BalancedTriple> try_pivots_near(const VoterSet& odd, std::initializer_list<double> probes,
                                                     double lo, double hi, double scale) {
    for (double probe : probes) {
        const auto piv = pivots_at(odd, probe);
        const auto th = snap_orientation(odd[piv[0]], odd[piv[1]], odd[piv[2]], lo, hi, scale);
        if (!th) continue;
        // the pivots may change exactly at the snapped angle; take them there
        for (const auto& use : {piv, pivots_at(odd, *th)}) {
            if (auto t = assemble(odd, *th, use, scale)) return t;
        }
    }
    return std::nullopt;
}

inline BalancedTriple single_voter_triple(const Point& v) {
    BalancedTriple t;
    for (int k = 0; k < 3; ++k) t.lines[k] = Line2{k * kThird, v};
    t.point = v;
    t.theta_bar = 0.0;
    return t;
}

}  // namespace detail

/// Continuity solver: bisection on the concurrency defect over [0, pi/3], whose
/// value at pi/3 is minus its value at 0, followed by the exact snap.
inline BalancedTriple concurrent_triple_bisection(const VoterSet& voters, const PlanarOptions& opt = {}) {
    if (voters.dim() != 2) throw DimensionError("concurrent triple needs planar voters");
    const VoterSet odd = voters.odd_reduced();
    const double scale = odd.scale();
    if (odd.size() == 1) return detail::single_voter_triple(odd[0]);
    const double g0 = detail::concurrency_defect(odd, 0.0);
    if (std::abs(g0) <= 1e-12 * scale) {
        if (auto t = detail::assemble(odd, 0.0, detail::pivots_at(odd, 0.0), scale)) return *t;
    }
    double lo = 0.0, hi = kThird;
    const bool neg_lo = g0 < 0.0;
    for (int it = 0; it < 200 && hi - lo > opt.tol_theta; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = detail::concurrency_defect(odd, mid);
        if (g == 0.0) {
            lo = hi = mid;
            break;
        }
        ((g < 0.0) == neg_lo ? lo : hi) = mid;
    }
    const double mid = 0.5 * (lo + hi);
    if (auto t = detail::try_pivots_near(odd, {mid, lo, hi}, lo, hi, scale)) return *t;
    // no single pivot triple fits: use the balanced lines at the midpoint directly
    if (auto t = detail::assemble(odd, mid, detail::pivots_at(odd, mid), scale)) return *t;
    throw SolverNumericalError("bisection solver could not certify a concurrent triple");
}

namespace detail {

/// One of the three dual regions tracked by the fast solver: a trapezoid whose
/// interior holds the median level over its x-range, plus the lines crossing it.
struct TrackedRegion {
    Trapezoid cell;
    std::vector<std::size_t> ids;
};

class DualSolver {
public:
    DualSolver(const VoterSet& odd, const PlanarOptions& opt)
        : odd_(odd), lines_(dual_of(odd)), opt_(opt), rng_(opt.seed), rank_((odd.size() - 1) / 2),
          scale_(odd.scale()) {}

    BalancedTriple run() {
        lo_ = 0.0;
        hi_ = kThird;
        for (int k = 0; k < 3; ++k) {
            regions_[k].ids.resize(lines_.size());
            for (std::size_t i = 0; i < lines_.size(); ++i) regions_[k].ids[i] = i;
            regions_[k].cell.x_lo = dual_abscissa(hi_ + k * kThird);
            regions_[k].cell.x_hi = dual_abscissa(lo_ + k * kThird);
        }
        const double g0 = defect(0.0);
        if (std::abs(g0) <= 1e-12 * scale_) {
            if (auto t = assemble(odd_, 0.0, pivots_at(odd_, 0.0), scale_)) return *t;
        }
        neg_lo_ = g0 < 0.0;
        for (std::size_t round = 0; round < opt_.max_rounds; ++round) {
            bool any = false;
            for (const auto& r : regions_) any = any || distinct(r.ids).size() > opt_.small_region;
            if (!any) return finish();
            if (auto done = refine()) return *done;
        }
        throw SolverNumericalError("dual solver did not converge");
    }

    std::size_t rounds() const { return rounds_; }

private:
    double defect(double theta) {
        double g = 0.0;
        for (int k = 0; k < 3; ++k) g += (k == 1 ? -1.0 : 1.0) * median_of(k, theta + k * kThird).first;
        return g;
    }

    /// One representative per distinct dual line; duplicate voters give identical
    /// lines that no cutting can separate.
    std::vector<std::size_t> distinct(const std::vector<std::size_t>& ids) const {
        std::vector<std::size_t> out = ids;
        auto key = [&](std::size_t i) { return std::pair{lines_[i].a, lines_[i].b}; };
        std::sort(out.begin(), out.end(), [&](std::size_t u, std::size_t v) { return key(u) < key(v); });
        out.erase(std::unique(out.begin(), out.end(), [&](std::size_t u, std::size_t v) { return lines_[u] == lines_[v]; }),
                  out.end());
        return out;
    }

    std::pair<double, std::size_t> median_of(int k, double theta_k) {
        auto& r = regions_[k];
        if (rank_ < r.cell.below_count) throw SolverNumericalError("median level left its region");
        return median_projection(odd_, r.ids, theta_k, rank_ - r.cell.below_count);
    }

    /// Binary search over the sorted candidate orientations for a sign change.
    /// Returns a root if one is hit exactly.
    std::optional<double> narrow(std::vector<double>& cand) {
        cand.push_back(lo_);
        cand.push_back(hi_);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::size_t a = 0, b = cand.size() - 1;
        while (b - a > 1) {
            const std::size_t m = (a + b) / 2;
            const double g = defect(cand[m]);
            if (g == 0.0) return cand[m];
            ((g < 0.0) == neg_lo_ ? a : b) = m;
        }
        lo_ = cand[a];
        hi_ = cand[b];
        return std::nullopt;
    }

    std::optional<BalancedTriple> refine() {
        ++rounds_;
        std::array<std::optional<Cutting>, 3> cuts;
        std::vector<double> cand;
        for (int k = 0; k < 3; ++k) {
            auto& r = regions_[k];
            const auto reps = distinct(r.ids);
            if (reps.size() <= opt_.small_region) continue;
            CuttingOptions co;
            co.fill_crossing_lists = false;
            cuts[k] = build_cutting(lines_, reps, r.cell, 2, rng_, co);
            std::vector<double> xs = cuts[k]->walls;
            const std::size_t above = lines_.size() - r.cell.below_count - r.ids.size();
            for (const auto& c : cuts[k]->cut_lines) {
                auto hit = median_crossings_on(c, r.cell.x_lo, r.cell.x_hi, lines_, r.ids, r.cell.below_count, above);
                xs.insert(xs.end(), hit.begin(), hit.end());
            }
            for (double x : xs) {
                const double th = orientation_of_abscissa(x) - k * kThird;
                if (th > lo_ && th < hi_) cand.push_back(th);
            }
        }
        if (auto root = narrow(cand)) return certify(*root);
        for (int k = 0; k < 3; ++k) {
            auto& r = regions_[k];
            const double x_lo = dual_abscissa(hi_ + k * kThird), x_hi = dual_abscissa(lo_ + k * kThird);
            if (!cuts[k]) {
                r.cell.x_lo = x_lo;
                r.cell.x_hi = x_hi;
                continue;
            }
            const double x_mid = dual_abscissa(0.5 * (lo_ + hi_) + k * kThird);
            const auto [proj, piv] = median_of(k, 0.5 * (lo_ + hi_) + k * kThird);
            (void)proj;
            const double y_med = lines_[piv].at(x_mid);
            const Trapezoid* home = nullptr;
            for (const auto& t : cuts[k]->cells) {
                if (!(t.x_lo <= x_mid && x_mid <= t.x_hi)) continue;
                if (t.bottom && !(t.bottom->at(x_mid) < y_med)) continue;
                if (t.top && !(y_med < t.top->at(x_mid))) continue;
                home = &t;
                break;
            }
            if (!home) throw SolverNumericalError("median level point not inside any cutting cell");
            Trapezoid next = *home;
            next.x_lo = std::max(x_lo, home->x_lo);
            next.x_hi = std::min(x_hi, home->x_hi);
            next.below_count = r.cell.below_count;
            classify(next, lines_, r.ids);
            r.ids = std::move(next.crossing);
            next.crossing.clear();
            r.cell = std::move(next);
        }
        return std::nullopt;
    }

    BalancedTriple finish() {
        std::vector<double> cand;
        for (int k = 0; k < 3; ++k) {
            const auto reps = distinct(regions_[k].ids);
            for (std::size_t i = 0; i < reps.size(); ++i) {
                for (std::size_t j = i + 1; j < reps.size(); ++j) {
                    const DualLine& u = lines_[reps[i]];
                    const DualLine& v = lines_[reps[j]];
                    if (u.a == v.a) continue;
                    const double th = orientation_of_abscissa(crossing_x(u, v)) - k * kThird;
                    if (th > lo_ && th < hi_) cand.push_back(th);
                }
            }
        }
        if (auto root = narrow(cand)) return certify(*root);
        const double mid = 0.5 * (lo_ + hi_);
        std::array<std::size_t, 3> piv{};
        for (int k = 0; k < 3; ++k) piv[k] = median_of(k, mid + k * kThird).second;
        const auto th = snap_orientation(odd_[piv[0]], odd_[piv[1]], odd_[piv[2]], lo_, hi_, scale_);
        if (th) {
            if (auto t = assemble(odd_, *th, piv, scale_)) return *t;
            if (auto t = assemble(odd_, *th, pivots_at(odd_, *th), scale_)) return *t;
        }
        throw SolverNumericalError("dual solver could not certify the final triple");
    }

    BalancedTriple certify(double theta) {
        if (auto t = assemble(odd_, theta, pivots_at(odd_, theta), scale_)) return *t;
        throw SolverNumericalError("dual solver root failed verification");
    }

    const VoterSet& odd_;
    std::vector<DualLine> lines_;
    PlanarOptions opt_;
    std::mt19937_64 rng_;
    std::size_t rank_;
    double scale_;
    std::array<TrackedRegion, 3> regions_;
    double lo_ = 0.0, hi_ = kThird;
    bool neg_lo_ = false;
    std::size_t rounds_ = 0;
};

}  // namespace detail

/// Dual-plane solver: keeps three trapezoids holding the median level over the
/// x-ranges of the three lines, shrinks them with (1/2)-cuttings and a binary
/// search over the points where the median level meets cutting edges, and
/// solves the final constant-size problem exactly.
inline BalancedTriple concurrent_triple_fast(const VoterSet& voters, const PlanarOptions& opt = {}) {
    if (voters.dim() != 2) throw DimensionError("concurrent triple needs planar voters");
    const VoterSet odd = voters.odd_reduced();
    if (odd.size() == 1) return detail::single_voter_triple(odd[0]);
    detail::DualSolver solver(odd, opt);
    return solver.run();
}

/// Point with beta(p, V) >= sqrt(3)/2: the common point of a concurrent balanced triple.
inline Point planar_point(const VoterSet& voters, const PlanarOptions& opt = {}) {
    if (voters.dim() != 2) throw DimensionError("planar_point needs planar voters");
    try {
        return concurrent_triple_fast(voters, opt).point;
    } catch (const CuttingDegeneracyError&) {
        if (!opt.fallback_to_bisection) throw;
    } catch (const SolverNumericalError&) {
        if (!opt.fallback_to_bisection) throw;
    }
    return concurrent_triple_bisection(voters, opt).point;
}

}  // namespace plurality
