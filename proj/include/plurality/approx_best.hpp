#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "plurality/decision.hpp"
#include "plurality/geometry.hpp"
#include "plurality/median_point.hpp"

namespace plurality {

inline void require_eps(double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
}

/// Cone opening used around every voter.
inline double grid_opening(std::size_t d, double eps) { return eps / (2.0 * std::sqrt(static_cast<double>(d))); }

/// Number of shell spheres: ceil(log_{1+eps/4}(1/eps^2)) + 1.
inline std::size_t shell_count(double eps) {
    require_eps(eps);
    return static_cast<std::size_t>(std::ceil(std::log(1.0 / (eps * eps)) / std::log1p(eps / 4.0) - 1e-9)) + 1;
}

/// Radii eps d_C (1 + eps/4)^k of the shell spheres.
inline std::vector<double> shell_radii(double d_c, double eps) {
    std::vector<double> r(shell_count(eps));
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = eps * d_c * std::pow(1.0 + eps / 4.0, static_cast<double>(k));
    return r;
}

struct GridShell {
    std::size_t cone = 0;          // index into the frame's cone list
    double d_c = 0.0;              // distance to the nearest voter in the cone
    std::vector<double> radii;     // sphere radii
};

/// Exponential grid around one voter: for each cone of the frame that holds a
/// voter, spheres between eps d_C and d_C/eps crossed with every frame ray.
struct ExpGrid {
    Point center;
    std::size_t voter = 0;
    double eps = 0.0;
    std::vector<Cone> cones;                      // occupied cones, apex at the voter
    std::vector<GridShell> shells;                // one per occupied cone
    std::vector<std::vector<double>> rays;        // unit frame rays
    std::size_t frame_seed = 0;                   // rotation seed that avoided boundary voters
    bool boundary_free = true;                    // false if all retries still hit a boundary

    std::size_t vertex_count() const { return shells.size() * shell_count(eps) * rays.size(); }

    /// Vertex for (shell, sphere, ray).
    Point vertex(std::size_t shell, std::size_t sphere, std::size_t ray) const {
        return offset(center, rays[ray], shells[shell].radii[sphere]);
    }
};

struct GridOptions {
    std::uint64_t rotation_seed = 0;
    std::size_t max_retries = 8;
};

namespace detail {

inline std::vector<double> direction(const Point& from, const Point& to) {
    std::vector<double> u(from.dim());
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = to[k] - from[k];
    return u;
}

}  // namespace detail

inline ExpGrid exponential_grid(const VoterSet& voters, std::size_t i, double eps, const GridOptions& opt = {}) {
    require_eps(eps);
    if (i >= voters.size()) throw std::out_of_range("exponential_grid: voter index out of range");
    const std::size_t d = voters.dim();
    const Point& vi = voters[i];
    ExpGrid g;
    g.center = vi;
    g.voter = i;
    g.eps = eps;

    std::optional<ConePartition> frame;
    for (std::size_t attempt = 0; attempt <= opt.max_retries; ++attempt) {
        const std::uint64_t seed = attempt == 0 ? opt.rotation_seed : opt.rotation_seed + 0x9e3779b97f4a7c15ULL * attempt;
        ConePartition cand(d, grid_opening(d, eps), seed);
        bool clean = true;
        for (const auto& v : voters) {
            if (v == vi) continue;
            if (cand.near_boundary(detail::direction(vi, v))) {
                clean = false;
                break;
            }
        }
        frame.emplace(std::move(cand));
        g.frame_seed = static_cast<std::size_t>(seed);
        g.boundary_free = clean;
        if (clean) break;
    }

    std::vector<double> nearest(frame->size(), std::numeric_limits<double>::infinity());
    for (const auto& v : voters) {
        if (v == vi) continue;
        const std::size_t c = frame->locate(detail::direction(vi, v));
        nearest[c] = std::min(nearest[c], distance(vi, v));
    }
    const auto all_cones = frame->cones();
    for (std::size_t c = 0; c < nearest.size(); ++c) {
        if (!std::isfinite(nearest[c])) continue;
        Cone cone = all_cones[c];
        cone.apex = vi;
        g.cones.push_back(std::move(cone));
        g.shells.push_back({c, nearest[c], shell_radii(nearest[c], eps)});
    }
    g.rays = frame->rays();
    return g;
}

/// Where a candidate came from: a voter position, or a grid vertex.
struct CandidateOrigin {
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::size_t voter = 0;
    std::size_t cone = kNone;   // frame cone index of the grid; kNone for the voter itself
    std::size_t shell = kNone;  // sphere index
    std::size_t ray = kNone;
    bool is_voter() const { return cone == kNone; }
};

struct CandidateSet {
    std::vector<Point> points;
    std::vector<CandidateOrigin> origin;
    std::size_t size() const { return points.size(); }
};

/// Candidate set: every voter plus the vertices of all its exponential grids,
/// deduplicated by exact coordinates.
inline CandidateSet candidate_set(const VoterSet& voters, double eps, const GridOptions& opt = {}) {
    require_eps(eps);
    struct Raw {
        Point p;
        CandidateOrigin o;
    };
    std::vector<Raw> raw;
    for (std::size_t i = 0; i < voters.size(); ++i) {
        raw.push_back({voters[i], {i}});
        const ExpGrid g = exponential_grid(voters, i, eps, opt);
        for (std::size_t s = 0; s < g.shells.size(); ++s) {
            for (std::size_t k = 0; k < g.shells[s].radii.size(); ++k) {
                for (std::size_t r = 0; r < g.rays.size(); ++r) {
                    raw.push_back({g.vertex(s, k, r), {i, g.shells[s].cone, k, r}});
                }
            }
        }
    }
    std::vector<std::size_t> order(raw.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto coords_less = [&](std::size_t a, std::size_t b) {
        const auto ca = raw[a].p.coords(), cb = raw[b].p.coords();
        return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
    };
    std::stable_sort(order.begin(), order.end(), coords_less);
    std::vector<bool> keep(raw.size(), true);
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (raw[order[k]].p == raw[order[k - 1]].p) keep[order[k]] = false;
    }
    CandidateSet out;
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (!keep[k]) continue;
        out.points.push_back(std::move(raw[k].p));
        out.origin.push_back(raw[k].o);
    }
    return out;
}

/// |P| before deduplication, without building the points.
inline double candidate_set_size(const VoterSet& voters, double eps, const GridOptions& opt = {}) {
    require_eps(eps);
    double total = 0.0;
    for (std::size_t i = 0; i < voters.size(); ++i) {
        total += 1.0 + static_cast<double>(exponential_grid(voters, i, eps, opt).vertex_count());
    }
    return total;
}

// ---------------------------------------------------------------------------

struct BestPointResult {
    Point point;
    double beta_hat = 0.0;
    BetaBracket bracket;
    CandidateOrigin origin;
    std::size_t candidates = 0;  // candidates generated, duplicates included
    std::size_t gated = 0;       // candidates that needed a decision to be ruled out or in
    std::size_t evaluated = 0;   // candidates that reached the full bisection
};

/// Upper bound on beta(p, V) from one competitor q: the smallest beta at which q
/// wins more voters than p. Returns 1 if q never does for beta <= 1.
inline double competitor_upper_bound(const VoterSet& voters, const Point& p, const Point& q) {
    std::vector<double> ratio;
    ratio.reserve(voters.size());
    for (const auto& v : voters) {
        const double pv = distance(p, v);
        ratio.push_back(pv == 0.0 ? std::numeric_limits<double>::infinity() : distance(q, v) / pv);
    }
    // just above the k-th smallest ratio q wins k voters, a strict majority
    const auto k = static_cast<std::ptrdiff_t>(ratio.size() / 2);
    std::nth_element(ratio.begin(), ratio.begin() + k, ratio.end());
    return std::min(1.0, ratio[static_cast<std::size_t>(k)]);
}

struct BestPointOptions {
    GridOptions grid;
    ApproxOptions decide;
    std::size_t witness_pool = 64;  // recent witnesses kept as extra competitors
};

/// Candidate search for a ((1 - eps) beta(V))-plurality point: candidates are
/// built at eps/2 and searched with approx_beta_of_point. Candidates are visited
/// in decreasing order of an upper bound on beta (the median point as
/// competitor). A candidate is searched only if it could beat the incumbent by
/// one bisection step: upper bounds from the incumbent, every voter and recent
/// witnesses must reach that level, and the decision must accept it there.
inline BestPointResult approx_best_point(const VoterSet& voters, double eps, const BestPointOptions& opt = {}) {
    require_eps(eps);
    const double half = eps / 2.0;
    const Point reference = median_point(voters);

    std::vector<ExpGrid> grids;
    grids.reserve(voters.size());
    struct Entry {
        double cheap;
        std::uint32_t voter, shell, sphere, ray;  // shell == kVoter for the voter itself
    };
    constexpr std::uint32_t kVoter = std::numeric_limits<std::uint32_t>::max();
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < voters.size(); ++i) {
        grids.push_back(exponential_grid(voters, i, half, opt.grid));
        const ExpGrid& g = grids.back();
        const auto vi = static_cast<std::uint32_t>(i);
        entries.push_back({competitor_upper_bound(voters, voters[i], reference), vi, kVoter, 0, 0});
        for (std::size_t s = 0; s < g.shells.size(); ++s) {
            for (std::size_t k = 0; k < g.shells[s].radii.size(); ++k) {
                for (std::size_t r = 0; r < g.rays.size(); ++r) {
                    entries.push_back({competitor_upper_bound(voters, g.vertex(s, k, r), reference), vi,
                                       static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(k),
                                       static_cast<std::uint32_t>(r)});
                }
            }
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.cheap > b.cheap; });
    auto point_of = [&](const Entry& e) {
        if (e.shell == kVoter) return voters[e.voter];
        return grids[e.voter].vertex(e.shell, e.sphere, e.ray);
    };
    auto origin_of = [&](const Entry& e) {
        if (e.shell == kVoter) return CandidateOrigin{e.voter};
        return CandidateOrigin{e.voter, grids[e.voter].shells[e.shell].cone, e.sphere, e.ray};
    };

    const double step = half / std::sqrt(static_cast<double>(voters.dim()));
    const double floor = 1.0 / std::sqrt(static_cast<double>(voters.dim()));
    // competitors that recently beat a candidate; they tend to beat its neighbours too
    std::vector<Point> pool(voters.begin(), voters.end());
    const std::size_t pool_voters = pool.size();
    std::size_t pool_next = 0;
    auto remember = [&](const Point& q) {
        if (opt.witness_pool == 0) return;
        if (pool.size() < pool_voters + opt.witness_pool) {
            pool.push_back(q);
        } else {
            pool[pool_voters + pool_next] = q;
            pool_next = (pool_next + 1) % opt.witness_pool;
        }
    };

    BestPointResult best{point_of(entries.front()), -1.0, {}, origin_of(entries.front()), entries.size(), 0, 0};
    for (const Entry& e : entries) {
        const Point p = point_of(e);
        double target = 0.0;
        if (best.beta_hat >= 0.0) {
            target = std::min(1.0, std::max(best.beta_hat + step, floor));
            // a candidate whose beta stays below the target cannot be the one the
            // guarantee rests on, so upper bounds prune at the target itself
            if (e.cheap < target) break;
            if (competitor_upper_bound(voters, p, best.point) < target) continue;
            bool ruled_out = false;
            for (std::size_t k = pool.size(); k-- > 0 && !ruled_out;) {
                ruled_out = competitor_upper_bound(voters, p, pool[k]) < target;
            }
            if (ruled_out) continue;
            ++best.gated;
            const Verdict gate = approx_decide(voters, p, target, half, opt.decide);
            if (!gate.yes()) {
                if (gate.witness) remember(*gate.witness);
                continue;
            }
        }
        const BetaBracket br = approx_beta_of_point(voters, p, eps, opt.decide, target);
        ++best.evaluated;
        if (br.degenerate && best.beta_hat >= 0.0) continue;
        if (br.lo > best.beta_hat) {
            best.point = p;
            best.beta_hat = br.lo;
            best.bracket = br;
            best.origin = origin_of(e);
        }
        if (best.beta_hat >= 1.0) break;
    }
    return best;
}

}  // namespace plurality
