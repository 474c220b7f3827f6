#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "plurality/geometry.hpp"

namespace testing_support {

using plurality::Point;
using plurality::VoterSet;

inline const VoterSet& equilateral() {
    static const VoterSet v(2, {Point{0.0, 0.0}, Point{2.0, 0.0}, Point{1.0, std::sqrt(3.0)}});
    return v;
}

inline Point equilateral_center() { return Point{1.0, 1.0 / std::sqrt(3.0)}; }

inline Point random_point(std::mt19937_64& rng, std::size_t d, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> c(d);
    for (auto& x : c) x = u(rng);
    return Point(std::move(c));
}

inline VoterSet random_voters(std::mt19937_64& rng, std::size_t n, std::size_t d) {
    std::vector<Point> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(random_point(rng, d));
    return VoterSet(d, std::move(v));
}

/// Voters snapped to a coarse lattice so that duplicates and collinear triples occur.
inline VoterSet lattice_voters(std::mt19937_64& rng, std::size_t n, int side) {
    std::uniform_int_distribution<int> u(0, side - 1);
    std::vector<Point> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Point{double(u(rng)), double(u(rng))});
    return VoterSet(2, std::move(v));
}

inline std::vector<double> random_unit(std::mt19937_64& rng, std::size_t d) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> u(d);
    double len = 0.0;
    while (len < 1e-9) {
        for (auto& x : u) x = g(rng);
        len = plurality::norm(u);
    }
    for (auto& x : u) x /= len;
    return u;
}

}  // namespace testing_support
