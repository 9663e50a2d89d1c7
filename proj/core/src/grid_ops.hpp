#pragma once

#include <vector>

#include "dcop/multi_index.hpp"
#include "dcop/rational.hpp"

namespace dcop::detail {

/// Repeated first differences along every axis of `grid`. The entry at an
/// index with all components >= 1 is the mass of the box between that index
/// and its lower neighbour in every axis.
inline std::vector<Rational> box_differences(std::vector<Rational> values, const Shape& grid) {
    for (int axis = 0; axis < grid.rank(); ++axis) {
        const std::size_t stride = grid.stride(axis);
        const auto extent = static_cast<std::size_t>(grid.extents()[axis]);
        for (std::size_t off = values.size(); off-- > 0;) {
            if ((off / stride) % extent > 0) values[off] -= values[off - stride];
        }
    }
    return values;
}

inline bool all_positive(const MultiIndex& idx) {
    for (int i : idx) {
        if (i <= 0) return false;
    }
    return true;
}

}  // namespace dcop::detail
