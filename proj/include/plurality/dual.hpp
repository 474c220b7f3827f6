#pragma once

// Point-line duality used by the planar solver: voter (a, b) maps to the line
// y = a x + b. A primal line of orientation theta in (0, pi) maps to a point with
// abscissa cot(theta), and the balanced line maps to the median level there.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "plurality/geometry.hpp"

namespace plurality {

struct DualLine {
    double a = 0.0;  // slope
    double b = 0.0;  // intercept

    double at(double x) const { return a * x + b; }
    friend bool operator==(const DualLine&, const DualLine&) = default;
};

inline DualLine dual_of(const Point& voter) { return {voter.x(), voter.y()}; }

inline std::vector<DualLine> dual_of(const VoterSet& voters) {
    if (voters.dim() != 2) throw DimensionError("duality needs planar voters");
    std::vector<DualLine> out;
    out.reserve(voters.size());
    for (const auto& v : voters) out.push_back(dual_of(v));
    return out;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sign of l1 - l2 at x, where x may be +-infinity.
inline int compare_at(const DualLine& l1, const DualLine& l2, double x) {
    if (x == kInf || x == -kInf) {
        const double da = (x > 0 ? 1.0 : -1.0) * (l1.a - l2.a);
        if (da != 0.0) return da > 0.0 ? 1 : -1;
        const double db = l1.b - l2.b;
        return db > 0.0 ? 1 : (db < 0.0 ? -1 : 0);
    }
    const double d = (l1.a - l2.a) * x + (l1.b - l2.b);
    return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
}

/// Sign of l1 - l2 on an open neighbourhood just to the right of x.
inline int compare_right_of(const DualLine& l1, const DualLine& l2, double x) {
    const int s = compare_at(l1, l2, x);
    if (s != 0 || x == kInf || x == -kInf) return s;
    return l1.a > l2.a ? 1 : (l1.a < l2.a ? -1 : 0);
}

/// Sign of l1 - l2 on an open neighbourhood just to the left of x.
inline int compare_left_of(const DualLine& l1, const DualLine& l2, double x) {
    const int s = compare_at(l1, l2, x);
    if (s != 0 || x == kInf || x == -kInf) return s;
    return l1.a < l2.a ? 1 : (l1.a > l2.a ? -1 : 0);
}

/// Abscissa where two non-parallel lines meet.
inline double crossing_x(const DualLine& l1, const DualLine& l2) { return (l2.b - l1.b) / (l1.a - l2.a); }

/// Dual abscissa of a primal orientation theta in [0, pi]; theta = 0 maps to +inf, pi to -inf.
inline double dual_abscissa(double theta) {
    if (theta <= 0.0) return kInf;
    if (theta >= std::numbers::pi) return -kInf;
    return std::cos(theta) / std::sin(theta);
}

/// Inverse of dual_abscissa, with values in [0, pi].
inline double orientation_of_abscissa(double x) {
    if (x == kInf) return 0.0;
    if (x == -kInf) return std::numbers::pi;
    return std::atan2(1.0, x);
}

/// Region of the dual plane bounded by an x-range (possibly unbounded) and
/// optional bottom and top lines, with the lines crossing it.
struct Trapezoid {
    double x_lo = -kInf;
    double x_hi = kInf;
    std::optional<DualLine> bottom;
    std::optional<DualLine> top;
    std::vector<std::size_t> crossing;  // indices into the line list it was classified against
    std::size_t crossing_count = 0;
    std::size_t below_count = 0;        // lines passing completely below
};

enum class Placement { Below, Crossing, Above };

/// Position of line l relative to the open trapezoid.
inline Placement place(const DualLine& l, const Trapezoid& t) {
    if (t.bottom && compare_right_of(l, *t.bottom, t.x_lo) <= 0 && compare_left_of(l, *t.bottom, t.x_hi) <= 0) {
        return Placement::Below;
    }
    if (t.top && compare_right_of(l, *t.top, t.x_lo) >= 0 && compare_left_of(l, *t.top, t.x_hi) >= 0) {
        return Placement::Above;
    }
    return Placement::Crossing;
}

/// Fills crossing/crossing_count and adds the lines passing below to below_count.
inline void classify(Trapezoid& t, std::span<const DualLine> lines, std::span<const std::size_t> ids) {
    t.crossing.clear();
    std::size_t below = 0;
    for (std::size_t id : ids) {
        const Placement pl = place(lines[id], t);
        if (pl == Placement::Crossing) t.crossing.push_back(id);
        else if (pl == Placement::Below) ++below;
    }
    t.crossing_count = t.crossing.size();
    t.below_count += below;
}

/// Point of the median level at abscissa x. The level is taken over a set of
/// lines of which `lines` are given explicitly, `below_offset` pass below and
/// `above_offset` pass above. Lower median for an even total.
inline Point median_level_point(std::span<const DualLine> lines, double x, std::size_t below_offset = 0,
                                std::size_t above_offset = 0) {
    if (lines.empty()) throw std::invalid_argument("median_level_point: no lines");
    if (!std::isfinite(x)) throw std::invalid_argument("median_level_point: abscissa must be finite");
    const std::size_t total = lines.size() + below_offset + above_offset;
    const std::size_t rank = (total - 1) / 2;
    if (rank < below_offset || rank >= below_offset + lines.size()) {
        throw std::invalid_argument("median_level_point: median rank falls outside the given lines");
    }
    std::vector<double> ys(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) ys[i] = lines[i].at(x);
    const auto k = static_cast<std::ptrdiff_t>(rank - below_offset);
    std::nth_element(ys.begin(), ys.begin() + k, ys.end());
    return Point{x, ys[static_cast<std::size_t>(k)]};
}

namespace detail {

/// Abscissae in (x_lo, x_hi) where the median level meets `edge`. The level walk
/// sorts the crossings of `edge` with the given lines and tracks how many lie below.
inline std::vector<double> median_crossings_on(const DualLine& edge, double x_lo, double x_hi,
                                               std::span<const DualLine> lines, std::span<const std::size_t> ids,
                                               std::size_t below_offset, std::size_t above_offset) {
    const auto total = static_cast<long long>(ids.size() + below_offset + above_offset);
    const long long rank = (total - 1) / 2;
    const long long above_limit = total - 1 - rank;
    struct Hit {
        double x;
        bool rising;  // line goes from below the edge to above it
    };
    std::vector<Hit> hits;
    long long below = 0;
    for (std::size_t id : ids) {
        const DualLine& l = lines[id];
        if (compare_right_of(l, edge, x_lo) < 0) ++below;
        if (l.a == edge.a) continue;
        const double x = crossing_x(l, edge);
        if (x > x_lo && x < x_hi) hits.push_back({x, l.a > edge.a});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& u, const Hit& v) { return u.x < v.x; });
    std::vector<double> out;
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i;
        long long rising = 0, falling = 0;
        while (j < hits.size() && hits[j].x == hits[i].x) {
            (hits[j].rising ? rising : falling) += 1;
            ++j;
        }
        const long long strictly_below = static_cast<long long>(below_offset) + below - rising;
        const long long strictly_above = total - strictly_below - rising - falling;
        if (strictly_below <= rank && strictly_above <= above_limit) out.push_back(hits[i].x);
        below = std::max<long long>(0, below - rising + falling);
        i = j;
    }
    return out;
}

}  // namespace detail

/// Points where the median level meets the boundary of `cell` or any of the
/// extra `edges` inside it. The median level is over lines[ids] plus the cell's
/// below_count and `above_offset` further lines above.
inline std::vector<Point> median_level_crossings(const Trapezoid& cell, std::span<const DualLine> edges,
                                                 std::span<const DualLine> lines, std::size_t above_offset = 0) {
    std::vector<std::size_t> ids(lines.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    std::vector<DualLine> all(edges.begin(), edges.end());
    if (cell.bottom) all.push_back(*cell.bottom);
    if (cell.top) all.push_back(*cell.top);
    auto inside = [&](double x, double y) {
        if (cell.bottom && y < cell.bottom->at(x)) return false;
        if (cell.top && y > cell.top->at(x)) return false;
        return true;
    };
    std::vector<Point> out;
    for (const auto& e : all) {
        for (double x : detail::median_crossings_on(e, cell.x_lo, cell.x_hi, lines, ids, cell.below_count, above_offset)) {
            const double y = e.at(x);
            if (inside(x, y)) out.push_back(Point{x, y});
        }
    }
    for (double wall : {cell.x_lo, cell.x_hi}) {
        if (!std::isfinite(wall) || lines.empty()) continue;
        const Point m = median_level_point(lines, wall, cell.below_count, above_offset);
        if (inside(m.x(), m.y())) out.push_back(m);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cuttings

class CuttingDegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Cutting {
    std::vector<DualLine> cut_lines;
    std::vector<double> walls;       // slab boundaries strictly inside the cell's x-range
    std::vector<Trapezoid> cells;    // crossing_count filled; crossing lists only on request
    std::size_t attempts = 0;
};

struct CuttingOptions {
    std::size_t max_attempts = 64;
    bool fill_crossing_lists = true;
};

namespace detail {

inline double interior_point(double lo, double hi) {
    if (std::isfinite(lo) && std::isfinite(hi)) return lo + 0.5 * (hi - lo);
    if (std::isfinite(lo)) return lo + std::max(1.0, std::abs(lo));
    if (std::isfinite(hi)) return hi - std::max(1.0, std::abs(hi));
    return 0.0;
}

/// Slab decomposition of `cell` by the cut lines. Cells are listed slab by slab,
/// bottom to top; crossing counts are computed by locating each line's entry and
/// exit cell in every slab.
inline std::vector<Trapezoid> decompose(const Trapezoid& cell, const std::vector<DualLine>& cuts,
                                        std::span<const DualLine> lines, std::span<const std::size_t> ids,
                                        std::vector<double>& walls, std::size_t limit, bool& within_limit) {
    std::vector<DualLine> bounds = cuts;
    if (cell.bottom) bounds.push_back(*cell.bottom);
    if (cell.top) bounds.push_back(*cell.top);
    walls.clear();
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        for (std::size_t j = i + 1; j < bounds.size(); ++j) {
            if (bounds[i].a == bounds[j].a) continue;
            const double x = crossing_x(bounds[i], bounds[j]);
            if (x > cell.x_lo && x < cell.x_hi) walls.push_back(x);
        }
    }
    std::sort(walls.begin(), walls.end());
    walls.erase(std::unique(walls.begin(), walls.end()), walls.end());

    std::vector<Trapezoid> out;
    within_limit = true;
    std::vector<double> edges_x;
    edges_x.push_back(cell.x_lo);
    edges_x.insert(edges_x.end(), walls.begin(), walls.end());
    edges_x.push_back(cell.x_hi);
    for (std::size_t s = 0; s + 1 < edges_x.size(); ++s) {
        const double lo = edges_x[s], hi = edges_x[s + 1];
        const double mid = interior_point(lo, hi);
        std::vector<DualLine> layer;
        for (const auto& c : cuts) {
            const double y = c.at(mid);
            if (cell.bottom && y <= cell.bottom->at(mid)) continue;
            if (cell.top && y >= cell.top->at(mid)) continue;
            layer.push_back(c);
        }
        std::sort(layer.begin(), layer.end(), [mid](const DualLine& u, const DualLine& v) { return u.at(mid) < v.at(mid); });
        const std::size_t m = layer.size();
        std::vector<long long> diff(m + 2, 0);
        // cell index holding l next to one slab end: -1 below the cell, m + 1 above it
        auto slot = [&](const DualLine& l, bool right_of_lo) -> long long {
            auto above = [&](const DualLine& bnd) {
                return (right_of_lo ? compare_right_of(l, bnd, lo) : compare_left_of(l, bnd, hi)) > 0;
            };
            if (cell.bottom && !above(*cell.bottom)) return -1;
            std::size_t a = 0, b = m;  // layer is sorted, so the lines below l form a prefix
            while (a < b) {
                const std::size_t c = (a + b) / 2;
                if (above(layer[c])) a = c + 1;
                else b = c;
            }
            if (a == m && cell.top) {
                const int s_top = right_of_lo ? compare_right_of(l, *cell.top, lo) : compare_left_of(l, *cell.top, hi);
                if (s_top >= 0) return static_cast<long long>(m) + 1;
            }
            return static_cast<long long>(a);
        };
        for (std::size_t id : ids) {
            const long long p = slot(lines[id], true), q = slot(lines[id], false);
            long long from = std::min(p, q), to = std::max(p, q);
            from = std::max<long long>(from, 0);
            to = std::min<long long>(to, static_cast<long long>(m));
            if (from > to) continue;
            diff[static_cast<std::size_t>(from)] += 1;
            diff[static_cast<std::size_t>(to) + 1] -= 1;
        }
        long long run = 0;
        for (std::size_t c = 0; c <= m; ++c) {
            run += diff[c];
            Trapezoid t;
            t.x_lo = lo;
            t.x_hi = hi;
            t.bottom = c == 0 ? cell.bottom : std::optional<DualLine>(layer[c - 1]);
            t.top = c == m ? cell.top : std::optional<DualLine>(layer[c]);
            t.crossing_count = static_cast<std::size_t>(run);
            t.below_count = cell.below_count;
            if (t.crossing_count > limit) within_limit = false;
            out.push_back(std::move(t));
        }
        if (!within_limit) return out;
    }
    return out;
}

}  // namespace detail

/// Random-sample (1/r)-cutting of `cell` for lines[ids]: cut lines are midlines of
/// random pairs of the lines, the cell is split into slabs at their vertices, and
/// the sample is redrawn until every piece is crossed by at most |ids|/r lines.
inline Cutting build_cutting(std::span<const DualLine> lines, std::span<const std::size_t> ids,
                             const Trapezoid& cell, std::size_t r, std::mt19937_64& rng,
                             const CuttingOptions& opt = {}) {
    if (r < 2) throw std::invalid_argument("build_cutting: r must be at least 2");
    Cutting result;
    if (ids.size() <= 1) {
        Trapezoid t = cell;
        t.crossing.assign(ids.begin(), ids.end());
        t.crossing_count = ids.size();
        result.cells.push_back(std::move(t));
        return result;
    }
    const std::size_t limit = ids.size() / r;
    std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
    for (std::size_t attempt = 0; attempt < opt.max_attempts; ++attempt) {
        result.attempts = attempt + 1;
        const std::size_t sample = 4 * r + 4 * (attempt / 16);
        std::vector<DualLine> cuts;
        for (std::size_t tries = 0; cuts.size() < sample && tries < 32 * sample; ++tries) {
            const DualLine& u = lines[ids[pick(rng)]];
            const DualLine& v = lines[ids[pick(rng)]];
            if (u == v) continue;
            const DualLine c{0.5 * (u.a + v.a), 0.5 * (u.b + v.b)};
            // a cut edge may not run along an input line
            bool clash = std::find(cuts.begin(), cuts.end(), c) != cuts.end();
            if ((cell.bottom && c == *cell.bottom) || (cell.top && c == *cell.top)) clash = true;
            for (std::size_t k = 0; k < ids.size() && !clash; ++k) clash = lines[ids[k]] == c;
            if (!clash) cuts.push_back(c);
        }
        if (cuts.empty()) continue;
        bool ok = false;
        auto cells = detail::decompose(cell, cuts, lines, ids, result.walls, limit, ok);
        if (!ok) continue;
        result.cut_lines = std::move(cuts);
        result.cells = std::move(cells);
        if (opt.fill_crossing_lists) {
            for (auto& t : result.cells) {
                t.below_count = cell.below_count;
                classify(t, lines, ids);
            }
        }
        return result;
    }
    throw CuttingDegeneracyError("cutting: crossing bound not met after " + std::to_string(opt.max_attempts) +
                                 " attempts");
}

inline Cutting build_cutting(std::span<const DualLine> lines, const Trapezoid& cell, std::size_t r,
                             std::uint64_t seed = 0, const CuttingOptions& opt = {}) {
    std::vector<std::size_t> ids(lines.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    std::mt19937_64 rng(seed);
    return build_cutting(lines, ids, cell, r, rng, opt);
}

}  // namespace plurality
