#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "plurality/geometry.hpp"

namespace plurality {

/// Lower median (rank ceil(k/2), 1-indexed) by introselect.
inline double median_select(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("median_select: empty input");
    std::vector<double> buf(values.begin(), values.end());
    const auto k = static_cast<std::ptrdiff_t>((buf.size() - 1) / 2);
    std::nth_element(buf.begin(), buf.begin() + k, buf.end());
    return buf[static_cast<std::size_t>(k)];
}

/// Coordinate-wise lower median of the voters. Every axis-parallel hyperplane
/// through the result is balanced, which gives beta >= 1/sqrt(d).
inline Point median_point(const VoterSet& voters) {
    const std::size_t d = voters.dim();
    std::vector<double> coords(d), column(voters.size());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < voters.size(); ++k) column[k] = voters[k][i];
        coords[i] = median_select(column);
    }
    return Point(std::move(coords));
}

}  // namespace plurality
