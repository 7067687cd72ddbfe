#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftle/errors.hpp"

namespace ftle {

/// Static per-device split of [0, n). Slots below `used` hold the real
/// ranges; the remaining slots are materialized placeholders (offset 0,
/// length 1) that are never executed.
struct Partition {
    std::vector<std::int64_t> offsets;
    std::vector<std::int64_t> ranges;
    int used = 0;

    std::int64_t begin(int d) const { return offsets[static_cast<std::size_t>(d)]; }
    std::int64_t end(int d) const {
        return offsets[static_cast<std::size_t>(d)] + ranges[static_cast<std::size_t>(d)];
    }
};

/// Equal chunks of size n/used, remainder folded into the last used slot.
inline Partition partition_range(std::int64_t n, int used, int max_devices) {
    if (used < 1 || used > max_devices)
        throw invalid_partition_error("need 1 <= used <= max_devices, got used=" +
                                      std::to_string(used) + " max_devices=" +
                                      std::to_string(max_devices));
    if (n < used)
        throw invalid_partition_error("cannot split " + std::to_string(n) +
                                      " items across " + std::to_string(used) +
                                      " devices");

    Partition part;
    part.used = used;
    part.offsets.assign(static_cast<std::size_t>(max_devices), 0);
    part.ranges.assign(static_cast<std::size_t>(max_devices), 1);
    const std::int64_t chunk = n / used;
    for (int d = 0; d < used; ++d) {
        part.offsets[static_cast<std::size_t>(d)] = chunk * d;
        part.ranges[static_cast<std::size_t>(d)] = chunk;
    }
    part.ranges[static_cast<std::size_t>(used - 1)] += n % used;
    return part;
}

} // namespace ftle
