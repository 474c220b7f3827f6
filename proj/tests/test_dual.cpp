#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "plurality/dual.hpp"

using namespace plurality;

namespace {

std::vector<DualLine> random_lines(std::mt19937_64& rng, std::size_t n, double slope = 2.0, double icpt = 1.0) {
    std::uniform_real_distribution<double> a(-slope, slope), b(-icpt, icpt);
    std::vector<DualLine> out(n);
    for (auto& l : out) l = {a(rng), b(rng)};
    return out;
}

// Does l meet the open interior of a bounded cell? The sets {l > bottom} and
// {l < top} are half-lines in x, so the answer is an interval intersection.
bool meets_interior(const DualLine& l, const Trapezoid& t) {
    double lo = t.x_lo, hi = t.x_hi;
    auto restrict_to = [&](const DualLine& g, double sign) {
        // sign * (l - g) > 0
        const double da = sign * (l.a - g.a), db = sign * (l.b - g.b);
        if (da == 0.0) {
            if (db <= 0.0) hi = lo;
            return;
        }
        const double root = -db / da;
        if (da > 0.0) lo = std::max(lo, root);
        else hi = std::min(hi, root);
    };
    if (t.bottom) restrict_to(*t.bottom, 1.0);
    if (t.top) restrict_to(*t.top, -1.0);
    return lo < hi;
}

Trapezoid box(double x_lo, double x_hi, double y_lo, double y_hi) {
    Trapezoid t;
    t.x_lo = x_lo;
    t.x_hi = x_hi;
    t.bottom = DualLine{0.0, y_lo};
    t.top = DualLine{0.0, y_hi};
    return t;
}

bool strictly_inside(const Trapezoid& t, double x, double y) {
    if (!(x > t.x_lo && x < t.x_hi)) return false;
    if (t.bottom && !(y > t.bottom->at(x))) return false;
    if (t.top && !(y < t.top->at(x))) return false;
    return true;
}

void check_cutting(const std::vector<DualLine>& lines, const Trapezoid& cell, const Cutting& cut, std::mt19937_64& rng) {
    const std::size_t limit = lines.size() / 2;
    for (const auto& t : cut.cells) {
        std::vector<std::size_t> expected;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (meets_interior(lines[i], t)) expected.push_back(i);
        }
        EXPECT_LE(expected.size(), limit);
        auto got = t.crossing;
        std::sort(got.begin(), got.end());
        EXPECT_EQ(got, expected);
        EXPECT_EQ(t.crossing_count, expected.size());
    }
    // the cells tile the parent: random interior points fall in exactly one
    std::uniform_real_distribution<double> ux(cell.x_lo, cell.x_hi), uy(cell.bottom->b, cell.top->b);
    for (int k = 0; k < 2000; ++k) {
        const double x = ux(rng), y = uy(rng);
        std::size_t hits = 0;
        for (const auto& t : cut.cells) hits += strictly_inside(t, x, y);
        EXPECT_EQ(hits, 1u) << x << "," << y;
    }
}

}  // namespace

TEST(DualLineOrder, ComparisonsAtInfinity) {
    const DualLine flat{0.0, 1.0}, rising{1.0, 0.0};
    EXPECT_EQ(compare_at(rising, flat, kInf), 1);
    EXPECT_EQ(compare_at(rising, flat, -kInf), -1);
    EXPECT_EQ(compare_at(flat, DualLine{0.0, 2.0}, kInf), -1);
    EXPECT_EQ(compare_at(flat, flat, kInf), 0);
    // they cross at x = 1
    EXPECT_EQ(compare_at(rising, flat, 1.0), 0);
    EXPECT_EQ(compare_right_of(rising, flat, 1.0), 1);
    EXPECT_EQ(compare_left_of(rising, flat, 1.0), -1);
    EXPECT_DOUBLE_EQ(crossing_x(rising, flat), 1.0);
}

TEST(DualLineOrder, AbscissaAndOrientationRoundTrip) {
    EXPECT_EQ(dual_abscissa(0.0), kInf);
    EXPECT_EQ(dual_abscissa(std::numbers::pi), -kInf);
    EXPECT_NEAR(dual_abscissa(std::numbers::pi / 2), 0.0, 1e-15);
    EXPECT_EQ(orientation_of_abscissa(kInf), 0.0);
    EXPECT_EQ(orientation_of_abscissa(-kInf), std::numbers::pi);
    for (double th = 0.01; th < std::numbers::pi; th += 0.01) {
        EXPECT_NEAR(orientation_of_abscissa(dual_abscissa(th)), th, 1e-12);
    }
}

TEST(MedianLevelPoint, Examples) {
    const std::vector<DualLine> three{{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}};
    const Point m = median_level_point(three, 2.0);
    EXPECT_EQ(m.x(), 2.0);
    EXPECT_EQ(m.y(), 0.0);

    const std::vector<DualLine> one{{3.0, -1.0}};
    EXPECT_EQ(median_level_point(one, 0.5).y(), 0.5);

    EXPECT_THROW(median_level_point(std::vector<DualLine>{}, 0.0), std::invalid_argument);
    EXPECT_THROW(median_level_point(three, kInf), std::invalid_argument);
    // 3 given lines plus 10 known below: rank 6 is outside the given lines
    EXPECT_THROW(median_level_point(three, 0.0, 10), std::invalid_argument);
}

TEST(MedianLevelPoint, MatchesSortOracle) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ux(-5.0, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto lines = random_lines(rng, 101);
        const double x = ux(rng);
        std::vector<double> ys;
        for (const auto& l : lines) ys.push_back(l.at(x));
        std::sort(ys.begin(), ys.end());
        EXPECT_EQ(median_level_point(lines, x).y(), ys[50]);

        // the same level seen through a subset with offsets
        std::vector<DualLine> sorted = lines;
        std::sort(sorted.begin(), sorted.end(), [x](const DualLine& u, const DualLine& v) { return u.at(x) < v.at(x); });
        const std::span<const DualLine> middle(sorted.data() + 30, 41);
        EXPECT_EQ(median_level_point(middle, x, 30, 30).y(), ys[50]);
    }
}

TEST(Classify, EveryLineIsBelowAboveOrCrossing) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto lines = random_lines(rng, 50);
        std::vector<std::size_t> ids(lines.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
        Trapezoid t = box(-0.5, 0.7, -0.3, 0.4);
        classify(t, lines, ids);
        std::size_t below = 0, above = 0, crossing = 0;
        for (const auto& l : lines) {
            if (meets_interior(l, t)) ++crossing;
            // a line missing the cell stays on one side of the band over the x-range
            else if (l.at(0.1) < 0.05) ++below;
            else ++above;
        }
        EXPECT_EQ(t.crossing_count, crossing);
        EXPECT_EQ(t.below_count, below);
        EXPECT_EQ(t.crossing_count + t.below_count + above, lines.size());
    }
}

TEST(BuildCutting, TrivialInputsReturnTheCell) {
    const Trapezoid cell = box(-1, 1, -1, 1);
    for (std::size_t n : {0u, 1u}) {
        std::vector<DualLine> lines(n, DualLine{0.5, 0.0});
        const Cutting cut = build_cutting(lines, cell, 2);
        ASSERT_EQ(cut.cells.size(), 1u);
        EXPECT_EQ(cut.cells[0].crossing_count, n);
        EXPECT_EQ(cut.cells[0].x_lo, -1.0);
        EXPECT_EQ(cut.cells[0].x_hi, 1.0);
    }
    EXPECT_THROW(build_cutting(std::vector<DualLine>{}, cell, 1), std::invalid_argument);
}

TEST(BuildCutting, HundredRandomLinesMeetTheBound) {
    std::mt19937_64 rng(8);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto lines = random_lines(rng, 100);
        const Trapezoid cell = box(-1.0, 1.0, -1.5, 1.5);
        const Cutting cut = build_cutting(lines, cell, 2, seed);
        check_cutting(lines, cell, cut, rng);
    }
}

TEST(BuildCutting, ConcurrentBundleMeetsTheBound) {
    std::vector<DualLine> lines;
    for (int k = 0; k < 64; ++k) lines.push_back({-2.0 + 4.0 * k / 63.0, 0.0});
    const Trapezoid cell = box(-1.0, 1.0, -3.0, 3.0);
    std::mt19937_64 rng(1);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Cutting cut = build_cutting(lines, cell, 2, seed);
        check_cutting(lines, cell, cut, rng);
    }
}

TEST(MedianLevelCrossings, CellAboveTheLevelIsEmpty) {
    const std::vector<DualLine> three{{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}};
    EXPECT_TRUE(median_level_crossings(box(-1, 1, 2, 3), {}, three).empty());
}

TEST(MedianLevelCrossings, ThreeLinesInUnitBox) {
    // the middle of {0, x, -x} is 0 everywhere, so the level meets the box at its walls
    const std::vector<DualLine> three{{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}};
    auto pts = median_level_crossings(box(-1, 1, -1, 1), {}, three);
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x() < b.x(); });
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].x(), -1.0);
    EXPECT_EQ(pts[0].y(), 0.0);
    EXPECT_EQ(pts[1].x(), 1.0);
    EXPECT_EQ(pts[1].y(), 0.0);

    // an inner edge y = 0.5 x meets the level once, at the origin
    const std::vector<DualLine> edge{{0.5, 0.0}};
    const auto with_edge = median_level_crossings(box(-1, 1, -1, 1), edge, three);
    EXPECT_EQ(std::count_if(with_edge.begin(), with_edge.end(),
                            [](const Point& p) { return p.x() == 0.0 && p.y() == 0.0; }),
              1);
}

TEST(MedianLevelCrossings, ReportedPointsHaveMedianRank) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 * (5 + trial % 30) + 1;
        const auto lines = random_lines(rng, n, 1.0, 0.3);
        std::vector<DualLine> edges;
        for (int k = 0; k < 4; ++k) edges.push_back({u(rng), 0.3 * u(rng)});
        const Trapezoid cell = box(-0.8, 0.8, -0.6, 0.6);
        const auto pts = median_level_crossings(cell, edges, lines);
        for (const auto& p : pts) {
            std::size_t below = 0, above = 0;
            for (const auto& l : lines) {
                const double y = l.at(p.x());
                const double tol = 1e-12 * (1.0 + std::abs(p.y()));
                if (y < p.y() - tol) ++below;
                if (y > p.y() + tol) ++above;
            }
            EXPECT_LT(2 * below, n);
            EXPECT_LT(2 * above, n);
        }
        // dense sampling oracle: every edge where the level changes side has a reported point nearby
        for (const auto& e : edges) {
            double prev_sign = 0.0, prev_x = 0.0;
            for (int k = 0; k <= 4000; ++k) {
                const double x = -0.8 + 1.6 * k / 4000.0;
                const double y = e.at(x);
                if (!(y > -0.6 && y < 0.6)) {
                    prev_sign = 0.0;
                    continue;
                }
                const double s = median_level_point(lines, x).y() - y;
                const double sign = s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
                if (prev_sign != 0.0 && sign != 0.0 && sign != prev_sign) {
                    const bool found = std::any_of(pts.begin(), pts.end(), [&](const Point& p) {
                        return p.x() >= prev_x - 1e-9 && p.x() <= x + 1e-9 && std::abs(p.y() - e.at(p.x())) < 1e-9;
                    });
                    EXPECT_TRUE(found) << "crossing in [" << prev_x << "," << x << "]";
                }
                prev_sign = sign;
                prev_x = x;
            }
        }
    }
}
