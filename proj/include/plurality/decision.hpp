#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plurality/geometry.hpp"

namespace plurality {

/// Relative tolerance for comparing beta*|pv| with |qv|.
inline constexpr double kTieTolerance = 1e-12;

struct DepthCounts {
    std::size_t inside = 0;   // q strictly inside D_beta(p, v): q wins v
    std::size_t on = 0;       // tie
    std::size_t outside = 0;  // p wins v

    /// |V[p < q]| - |V[p > q]|
    long long advantage() const {
        return static_cast<long long>(inside) - static_cast<long long>(outside);
    }
};

enum class Answer { Yes, No };

struct Verdict {
    Answer answer = Answer::Yes;
    std::optional<Point> witness;
    long long advantage = 0;

    bool yes() const { return answer == Answer::Yes; }
};

struct BetaBracket {
    double lo = 0.0;
    double hi = 1.0;
    /// Set when the search floor itself was rejected and the bracket fell back to [0, floor].
    bool degenerate = false;
};

inline void require_beta(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must lie in (0, 1]");
}

/// Classification of a single voter for competitor q.
inline int compare_voter(const Point& p, const Point& v, double beta, const Point& q) {
    const double pv = distance(p, v);
    if (pv == 0.0) return q == v ? 0 : -1;
    const double r = beta * pv;
    const double qv = distance(q, v);
    if (std::abs(qv - r) <= kTieTolerance * std::max(r, qv)) return 0;
    return qv < r ? 1 : -1;
}

inline DepthCounts depth_at(const VoterSet& voters, const Point& p, double beta, const Point& q) {
    require_beta(beta);
    require_dim(voters, p);
    require_dim(voters, q);
    DepthCounts c;
    for (const auto& v : voters) {
        const int s = compare_voter(p, v, beta, q);
        if (s > 0) ++c.inside;
        else if (s == 0) ++c.on;
        else ++c.outside;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Exact planar decision by an angular sweep around every disk boundary

namespace detail {

struct Circle {
    double cx, cy, r;
    std::size_t multiplicity;
};

enum class EventKind { Enter, Exit, Touch };

struct ArcEvent {
    double angle;
    EventKind kind;
    bool touch_inside;  // for Touch: the touching disk contains the rest of the circle
};

struct SweepCandidate {
    long long value;
    Point location;
};

inline double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    if (a >= two_pi) a -= two_pi;
    return a;
}

inline std::vector<Circle> disk_boundaries(const VoterSet& voters, const Point& p, double beta) {
    std::vector<Circle> raw;
    for (const auto& v : voters) {
        const double pv = distance(p, v);
        if (pv == 0.0) continue;
        raw.push_back({v.x(), v.y(), beta * pv, 1});
    }
    std::sort(raw.begin(), raw.end(), [](const Circle& a, const Circle& b) {
        return std::tie(a.cx, a.cy, a.r) < std::tie(b.cx, b.cy, b.r);
    });
    std::vector<Circle> out;
    for (const auto& c : raw) {
        if (!out.empty() && out.back().cx == c.cx && out.back().cy == c.cy && out.back().r == c.r) {
            ++out.back().multiplicity;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

/// Sweeps circle i and reports the best open-arc and boundary-point values
/// (2*inside + on - n) together with a representative location for each.
inline void sweep_circle(const std::vector<Circle>& circles, std::size_t i, std::size_t n,
                         std::vector<SweepCandidate>& out, long long& best) {
    constexpr long long report_at_least = 1;
    const Circle& c = circles[i];
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<ArcEvent> events;
    std::vector<std::pair<double, double>> intervals;  // (start, length) inside another disk
    long long base = 0;                                // disks containing all of circle i
    long long shared = 0;                              // circles numerically equal to circle i
    for (std::size_t j = 0; j < circles.size(); ++j) {
        if (j == i) continue;
        const Circle& o = circles[j];
        const double dx = o.cx - c.cx, dy = o.cy - c.cy;
        const double d = std::hypot(dx, dy);
        const double tol = kTieTolerance * (c.r + o.r + d);
        const auto mult = static_cast<long long>(o.multiplicity);
        const double toward = std::atan2(dy, dx);
        if (d > c.r + o.r + tol) continue;
        if (std::abs(d - (c.r + o.r)) <= tol) {
            for (long long m = 0; m < mult; ++m) events.push_back({wrap_angle(toward), EventKind::Touch, false});
            continue;
        }
        const double gap = std::abs(c.r - o.r);
        if (d < gap - tol) {
            if (o.r > c.r) base += mult;
            continue;
        }
        if (std::abs(d - gap) <= tol) {
            if (d <= tol) {
                shared += mult;
                continue;
            }
            if (o.r > c.r) {
                base += mult;
                for (long long m = 0; m < mult; ++m) {
                    events.push_back({wrap_angle(toward + std::numbers::pi), EventKind::Touch, true});
                }
            } else {
                for (long long m = 0; m < mult; ++m) events.push_back({wrap_angle(toward), EventKind::Touch, false});
            }
            continue;
        }
        double cosa = (d * d + c.r * c.r - o.r * o.r) / (2.0 * d * c.r);
        cosa = std::clamp(cosa, -1.0, 1.0);
        const double alpha = std::acos(cosa);
        for (long long m = 0; m < mult; ++m) {
            events.push_back({wrap_angle(toward - alpha), EventKind::Enter, false});
            events.push_back({wrap_angle(toward + alpha), EventKind::Exit, false});
            intervals.emplace_back(wrap_angle(toward - alpha), 2.0 * alpha);
        }
    }

    const auto own = static_cast<long long>(c.multiplicity) + shared;
    const auto nn = static_cast<long long>(n);
    auto at = [&](double angle, double shrink) {
        return Point{c.cx + c.r * shrink * std::cos(angle), c.cy + c.r * shrink * std::sin(angle)};
    };

    if (events.empty()) {
        const long long value = 2 * (base + own) - nn;
        best = std::max(best, value);
        if (value >= report_at_least) out.push_back({value, at(0.0, 1.0 - 1e-6)});
        return;
    }
    std::sort(events.begin(), events.end(), [](const ArcEvent& a, const ArcEvent& b) { return a.angle < b.angle; });

    // start in the middle of the widest gap so no event group straddles the seam
    std::size_t widest = events.size() - 1;
    double widest_len = events.front().angle + two_pi - events.back().angle;
    for (std::size_t k = 0; k + 1 < events.size(); ++k) {
        const double g = events[k + 1].angle - events[k].angle;
        if (g > widest_len) {
            widest_len = g;
            widest = k;
        }
    }
    const double start = wrap_angle(events[widest].angle + widest_len / 2.0);
    long long count = base;
    for (const auto& [s, len] : intervals) {
        if (wrap_angle(start - s) < len) ++count;
    }

    constexpr double group_tol = 1e-10;
    const std::size_t m = events.size();
    std::size_t k = (widest + 1) % m;
    double prev_angle = start;
    for (std::size_t processed = 0; processed < m;) {
        // open arc from prev_angle up to the next group
        const double group_angle = events[k].angle;
        double arc_len = wrap_angle(group_angle - prev_angle);
        const long long arc_value = 2 * (count + own) - nn;
        best = std::max(best, arc_value);
        if (arc_value >= report_at_least && arc_len > 0.0) {
            out.push_back({arc_value, at(prev_angle + arc_len / 2.0, 1.0)});
        }
        long long exits = 0, enters = 0, touches = 0, touch_inside = 0;
        double last = group_angle;
        while (processed < m && wrap_angle(events[k].angle - last) <= group_tol) {
            switch (events[k].kind) {
                case EventKind::Enter: ++enters; break;
                case EventKind::Exit: ++exits; break;
                case EventKind::Touch:
                    ++touches;
                    if (events[k].touch_inside) ++touch_inside;
                    break;
            }
            last = events[k].angle;
            k = (k + 1) % m;
            ++processed;
        }
        const long long inside_point = count - exits - touch_inside;
        const long long on_point = own + exits + enters + touches;
        const long long point_value = 2 * inside_point + on_point - nn;
        best = std::max(best, point_value);
        if (point_value >= report_at_least) out.push_back({point_value, at(group_angle, 1.0)});
        count += enters - exits;
        prev_angle = last;
    }
    // closing arc back to the start
    const double arc_len = wrap_angle(start - prev_angle);
    const long long arc_value = 2 * (count + own) - nn;
    best = std::max(best, arc_value);
    if (arc_value >= report_at_least) out.push_back({arc_value, at(prev_angle + arc_len / 2.0, 1.0)});
}

}  // namespace detail

/// Options for exact_decide_2d.
struct ExactDecideOptions {
    /// Maximum number of candidate witnesses verified before concluding yes.
    std::size_t max_witness_checks = 256;
};

/// Exact planar decision. Finds the deepest point of the arrangement of the disks
/// D_beta(p, v) by sweeping each boundary circle; a "no" is returned only with a
/// witness whose advantage is confirmed by depth_at.
inline Verdict exact_decide_2d(const VoterSet& voters, const Point& p, double beta,
                               const ExactDecideOptions& opt = {}) {
    require_beta(beta);
    if (voters.dim() != 2) throw DimensionError("exact decision requires planar voters");
    require_dim(voters, p);
    const std::size_t n = voters.size();

    Verdict verdict;
    const DepthCounts at_p = depth_at(voters, p, beta, p);
    verdict.advantage = at_p.advantage();

    const auto circles = detail::disk_boundaries(voters, p, beta);
    std::vector<detail::SweepCandidate> cands;
    long long best_value = std::numeric_limits<long long>::min();
    for (std::size_t i = 0; i < circles.size(); ++i) {
        detail::sweep_circle(circles, i, n, cands, best_value);
    }
    if (best_value != std::numeric_limits<long long>::min()) {
        verdict.advantage = std::max(verdict.advantage, best_value);
    }
    if (at_p.advantage() >= 1) {
        verdict.answer = Answer::No;
        verdict.witness = p;
        verdict.advantage = at_p.advantage();
        return verdict;
    }
    if (cands.empty()) {
        verdict.advantage = std::min<long long>(verdict.advantage, 0);
        return verdict;
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const auto& a, const auto& b) { return a.value > b.value; });
    const std::size_t limit = std::min(cands.size(), opt.max_witness_checks);
    for (std::size_t k = 0; k < limit; ++k) {
        const Point& loc = cands[k].location;
        // the location is on a boundary circle; the deep side is toward the circle's centre
        // for arcs, so probe the point itself and then shrink toward each nearby centre
        auto try_point = [&](const Point& q) {
            const DepthCounts dc = depth_at(voters, p, beta, q);
            if (dc.advantage() >= 1) {
                verdict.answer = Answer::No;
                verdict.witness = q;
                verdict.advantage = dc.advantage();
                return true;
            }
            return false;
        };
        if (try_point(loc)) return verdict;
        for (const auto& c : circles) {
            const double dr = std::hypot(loc.x() - c.cx, loc.y() - c.cy);
            if (std::abs(dr - c.r) > 1e-9 * (c.r + dr)) continue;
            for (int e = 2; e <= 12; ++e) {
                const double f = 1.0 - std::pow(10.0, -e);
                const Point q{c.cx + (loc.x() - c.cx) * f, c.cy + (loc.y() - c.cy) * f};
                if (try_point(q)) return verdict;
            }
        }
    }
    verdict.advantage = std::min<long long>(verdict.advantage, 0);
    return verdict;
}

/// Bisection for beta(p, V) with the exact planar decision. `floor` is a value
/// already known to be accepted (e.g. 1/sqrt(2) for the median point); 0 means none.
inline BetaBracket exact_beta_of_point_2d(const VoterSet& voters, const Point& p, double tol,
                                          double floor = 0.0) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (exact_decide_2d(voters, p, 1.0).yes()) return {1.0, 1.0, false};
    double lo = floor, hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (exact_decide_2d(voters, p, mid).yes()) lo = mid;
        else hi = mid;
    }
    return {lo, hi, false};
}

// ---------------------------------------------------------------------------
// Sampled competitors and the approximate range-counting index

class SampleBudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ApproxOptions {
    /// Upper limit on the total number of sampled competitors.
    double max_samples = 8e6;
};

/// Distance between neighbouring samples on the sphere around voter v, relative to |pv|.
inline double sample_spacing(std::size_t d, double beta, double eps) {
    const double floor = 1.0 / std::sqrt(static_cast<double>(d));
    return (eps / 4.0) * std::min(floor, beta);
}

inline double competitor_sample_count(const VoterSet& voters, const Point& p, double beta, double eps) {
    const std::size_t d = voters.dim();
    double total = 0.0;
    double per_voter = -1.0;
    for (const auto& v : voters) {
        if (distance(p, v) == 0.0) {
            total += 1.0;
            continue;
        }
        if (per_voter < 0.0) {
            const double radius = (1.0 - eps / 2.0) * beta;
            per_voter = sphere_cover_size(d, sample_spacing(d, beta, eps) / radius);
        }
        total += per_voter;
    }
    return total;
}

namespace detail {

/// Row-major sample coordinates, one row per competitor.
struct SampleCloud {
    std::size_t dim = 0;
    std::vector<double> coords;
    std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
};

inline SampleCloud competitor_cloud(const VoterSet& voters, const Point& p, double beta, double eps,
                                    const ApproxOptions& opt) {
    require_dim(voters, p);
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
    require_beta(beta);
    const double expected = competitor_sample_count(voters, p, beta, eps);
    if (expected > opt.max_samples) {
        throw SampleBudgetError("competitor sample set would hold " + std::to_string(expected) +
                                " points, above the budget of " + std::to_string(opt.max_samples));
    }
    const std::size_t d = voters.dim();
    const double radius_factor = (1.0 - eps / 2.0) * beta;
    const auto unit = sphere_cover(d, sample_spacing(d, beta, eps) / radius_factor);
    SampleCloud out{d, {}};
    out.coords.reserve(static_cast<std::size_t>(expected) * d);
    for (const auto& v : voters) {
        const double pv = distance(p, v);
        if (pv == 0.0) {
            out.coords.insert(out.coords.end(), v.coords().begin(), v.coords().end());
            continue;
        }
        const double len = radius_factor * pv;
        for (const auto& u : unit) {
            for (std::size_t a = 0; a < d; ++a) out.coords.push_back(v[a] + len * u[a]);
        }
    }
    return out;
}

}  // namespace detail

/// Competitor samples: for each voter v, points on the sphere of radius
/// (1 - eps/2) beta |pv| around v, spaced at most (eps/4) min(1/sqrt d, beta) |pv| apart.
inline std::vector<Point> build_competitor_samples(const VoterSet& voters, const Point& p, double beta,
                                                   double eps, const ApproxOptions& opt = {}) {
    const auto cloud = detail::competitor_cloud(voters, p, beta, eps, opt);
    std::vector<Point> out;
    out.reserve(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        out.emplace_back(std::vector<double>(cloud.coords.begin() + static_cast<std::ptrdiff_t>(i * cloud.dim),
                                             cloud.coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * cloud.dim)));
    }
    return out;
}

/// kd-tree over the sample with per-node counters. Every internal node splits its
/// point range at the median of the widest coordinate; a leaf holds at most
/// kLeafSize points or a run of identical points. Node boxes are the tight
/// bounding boxes of their points.
class ApproxIndex {
public:
    static constexpr std::size_t kLeafSize = 8;

    struct Node {
        std::size_t begin = 0, end = 0;  // range into order()
        int left = -1, right = -1;
        long long counter = 0;
        bool leaf() const { return left < 0; }
    };

    explicit ApproxIndex(const std::vector<Point>& points) {
        if (points.empty()) throw std::invalid_argument("index needs at least one point");
        dim_ = points.front().dim();
        coords_.reserve(points.size() * dim_);
        for (const auto& q : points) {
            if (q.dim() != dim_) throw DimensionError("index points differ in dimension");
            coords_.insert(coords_.end(), q.coords().begin(), q.coords().end());
        }
        init();
    }

    ApproxIndex(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
        if (dim_ == 0 || coords_.empty() || coords_.size() % dim_ != 0) {
            throw std::invalid_argument("index needs at least one point");
        }
        init();
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return coords_.size() / dim_; }
    Point point(std::size_t i) const {
        return Point(std::vector<double>(coords_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                                         coords_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_)));
    }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<std::size_t>& order() const noexcept { return order_; }
    std::size_t depth() const noexcept { return depth_; }

    /// Bounding box of node `id` along axis `a`.
    double box_lo(std::size_t id, std::size_t a) const { return box_[(id * dim_ + a) * 2]; }
    double box_hi(std::size_t id, std::size_t a) const { return box_[(id * dim_ + a) * 2 + 1]; }

    /// Increments counters on disjoint canonical nodes so that every sample inside
    /// the open ball s(center, r) is counted and nothing outside s(center, (1+gamma) r).
    void marked_ball_query(const Point& center, double r, double gamma) {
        if (center.dim() != dim_) throw DimensionError("query centre dimension mismatch");
        if (r <= 0.0) return;
        const double r_out = (1.0 + gamma) * r;
        query(0, center.coords().data(), r * r, r_out * r_out);
    }

    /// Counter sum along the root-to-leaf path plus the leaf's exact hits, per sample.
    std::vector<long long> path_sums() const {
        std::vector<long long> out(size(), 0);
        accumulate(0, 0, out);
        return out;
    }

    void reset_counters() {
        for (auto& nd : nodes_) nd.counter = 0;
        std::fill(point_counter_.begin(), point_counter_.end(), 0);
    }

    long long point_counter(std::size_t i) const { return point_counter_[i]; }

private:
    const double* at(std::size_t i) const { return coords_.data() + i * dim_; }

    void init() {
        const std::size_t m = size();
        order_.resize(m);
        for (std::size_t i = 0; i < m; ++i) order_[i] = i;
        point_counter_.assign(m, 0);
        nodes_.reserve(2 * (m / kLeafSize + 1));
        box_.reserve(4 * (m / kLeafSize + 1) * dim_);
        build(0, m, 0);
    }

    int build(std::size_t begin, std::size_t end, std::size_t level) {
        depth_ = std::max(depth_, level);
        const std::size_t id = nodes_.size();
        nodes_.push_back({begin, end, -1, -1, 0});
        box_.resize(box_.size() + 2 * dim_);
        double* box = box_.data() + id * dim_ * 2;
        for (std::size_t a = 0; a < dim_; ++a) {
            box[2 * a] = std::numeric_limits<double>::infinity();
            box[2 * a + 1] = -std::numeric_limits<double>::infinity();
        }
        for (std::size_t k = begin; k < end; ++k) {
            const double* q = at(order_[k]);
            for (std::size_t a = 0; a < dim_; ++a) {
                box[2 * a] = std::min(box[2 * a], q[a]);
                box[2 * a + 1] = std::max(box[2 * a + 1], q[a]);
            }
        }
        std::size_t axis = 0;
        double spread = -1.0;
        for (std::size_t a = 0; a < dim_; ++a) {
            if (box[2 * a + 1] - box[2 * a] > spread) {
                spread = box[2 * a + 1] - box[2 * a];
                axis = a;
            }
        }
        if (end - begin <= kLeafSize || spread == 0.0) return static_cast<int>(id);

        const auto first = order_.begin() + static_cast<std::ptrdiff_t>(begin);
        const auto last = order_.begin() + static_cast<std::ptrdiff_t>(end);
        const std::size_t mid = begin + (end - begin) / 2;
        auto coord = [&](std::size_t x) { return at(x)[axis]; };
        std::nth_element(first, order_.begin() + static_cast<std::ptrdiff_t>(mid), last,
                         [&](std::size_t x, std::size_t y) { return coord(x) < coord(y); });
        // keep equal split values on one side so both children are nonempty
        const double split = coord(order_[mid]);
        auto cut = std::partition(first, last, [&](std::size_t x) { return coord(x) < split; });
        if (cut == first) cut = std::partition(first, last, [&](std::size_t x) { return coord(x) <= split; });
        const auto c = static_cast<std::size_t>(cut - order_.begin());
        const int left = build(begin, c, level + 1);
        const int right = build(c, end, level + 1);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return static_cast<int>(id);
    }

    void query(int id, const double* c, double r2, double r_out2) {
        Node& nd = nodes_[static_cast<std::size_t>(id)];
        const double* box = box_.data() + static_cast<std::size_t>(id) * dim_ * 2;
        double near2 = 0.0, far2 = 0.0;
        for (std::size_t a = 0; a < dim_; ++a) {
            const double x = c[a], lo = box[2 * a], hi = box[2 * a + 1];
            const double dn = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
            const double df = std::max(x - lo, hi - x);
            near2 += dn * dn;
            far2 += df * df;
        }
        if (near2 >= r2) return;
        if (far2 < r_out2) {
            ++nd.counter;
            return;
        }
        if (nd.leaf()) {
            for (std::size_t k = nd.begin; k < nd.end; ++k) {
                const std::size_t i = order_[k];
                const double* q = at(i);
                double s = 0.0;
                for (std::size_t a = 0; a < dim_; ++a) s += (q[a] - c[a]) * (q[a] - c[a]);
                if (s < r2) ++point_counter_[i];
            }
            return;
        }
        query(nd.left, c, r2, r_out2);
        query(nd.right, c, r2, r_out2);
    }

    void accumulate(int id, long long above, std::vector<long long>& out) const {
        const Node& nd = nodes_[static_cast<std::size_t>(id)];
        const long long sum = above + nd.counter;
        if (nd.leaf()) {
            for (std::size_t k = nd.begin; k < nd.end; ++k) {
                const std::size_t i = order_[k];
                out[i] = sum + point_counter_[i];
            }
            return;
        }
        accumulate(nd.left, sum, out);
        accumulate(nd.right, sum, out);
    }

    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<double> box_;  // per node and axis: lo, hi
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
    std::vector<long long> point_counter_;
    std::size_t depth_ = 0;
};

inline ApproxIndex build_index(const std::vector<Point>& samples) { return ApproxIndex(samples); }

inline void marked_ball_query(ApproxIndex& index, const Point& center, double r, double gamma) {
    index.marked_ball_query(center, r, gamma);
}

/// eps-approximate decision: "yes" whenever p is a beta-plurality point and "no"
/// whenever p is not a (1 - eps) beta-plurality point.
inline Verdict approx_decide(const VoterSet& voters, const Point& p, double beta, double eps,
                             const ApproxOptions& opt = {}) {
    const std::size_t n = voters.size();
    auto cloud = detail::competitor_cloud(voters, p, beta, eps, opt);
    ApproxIndex index(cloud.dim, std::move(cloud.coords));
    for (const auto& v : voters) {
        const double pv = distance(p, v);
        index.marked_ball_query(v, (1.0 - eps / 4.0) * beta * pv, eps / 4.0);
    }
    const auto sums = index.path_sums();
    std::size_t best = 0;
    for (std::size_t i = 1; i < sums.size(); ++i) {
        if (sums[i] > sums[best]) best = i;
    }
    const long long c = sums[best];
    Verdict verdict;
    if (2 * c <= static_cast<long long>(n)) {
        verdict.advantage = 2 * c - static_cast<long long>(n);
        return verdict;
    }
    verdict.answer = Answer::No;
    verdict.witness = index.point(best);
    verdict.advantage = depth_at(voters, p, beta, *verdict.witness).advantage();
    return verdict;
}

/// Bisection of approx_decide at parameter eps/2 over [1/sqrt d, 1] until the
/// bracket is at most (eps/2)/sqrt d wide. With `at_least` the search starts
/// there instead and a rejection at that level comes back degenerate.
inline BetaBracket approx_beta_of_point(const VoterSet& voters, const Point& p, double eps,
                                        const ApproxOptions& opt = {}, double at_least = 0.0) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
    const double floor = std::max(at_least, 1.0 / std::sqrt(static_cast<double>(voters.dim())));
    const double width = (eps / 2.0) / std::sqrt(static_cast<double>(voters.dim()));
    if (floor >= 1.0) {
        if (approx_decide(voters, p, 1.0, eps / 2.0, opt).yes()) return {1.0, 1.0, false};
        return {0.0, 1.0, true};
    }
    if (!approx_decide(voters, p, floor, eps / 2.0, opt).yes()) return {0.0, floor, true};
    if (approx_decide(voters, p, 1.0, eps / 2.0, opt).yes()) return {1.0, 1.0, false};
    double lo = floor, hi = 1.0;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (approx_decide(voters, p, mid, eps / 2.0, opt).yes()) lo = mid;
        else hi = mid;
    }
    return {lo, hi, false};
}

}  // namespace plurality
