#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "urn/error.hpp"

namespace urn {

enum class Spacing { linear, geometric };

/// `points` times from start to stop inclusive. A single point yields {start}
/// for either spacing. Geometric spacing needs start > 0.
inline std::vector<double> make_time_grid(double start, double stop, std::size_t points,
                                          Spacing spacing) {
    if (points == 0) throw DomainError("time grid needs at least one point");
    if (!(start >= 0.0) || !(stop >= start)) throw DomainError("time grid needs 0 <= start <= stop");
    if (points == 1) return {start};
    if (!(stop > start)) throw DomainError("time grid with several points needs start < stop");
    std::vector<double> grid(points);
    const double last = static_cast<double>(points - 1);
    if (spacing == Spacing::linear) {
        for (std::size_t i = 0; i < points; ++i)
            grid[i] = start + (stop - start) * (static_cast<double>(i) / last);
    } else {
        if (!(start > 0.0)) throw DomainError("geometric time grid needs start > 0");
        const double ratio = std::log(stop / start);
        for (std::size_t i = 0; i < points; ++i)
            grid[i] = start * std::exp(ratio * (static_cast<double>(i) / last));
    }
    grid.front() = start;
    grid.back() = stop;
    return grid;
}

}  // namespace urn
