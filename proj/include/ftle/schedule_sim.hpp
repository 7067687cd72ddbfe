#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ftle/partition.hpp"

namespace ftle {

/// Relative device throughput in work items per unit time.
struct DeviceProfile {
    int id = 0;
    double speed = 1.0;
};

/// Half-open slice [offset, offset+length) of one data buffer.
struct DataRegion {
    std::int64_t data_id = 0;
    std::int64_t offset = 0;
    std::int64_t length = 1;
};

/// One sub-kernel enqueued on a device: the region it writes and its cost.
struct Submission {
    int device = 0;
    DataRegion region;
    std::int64_t work = 0;
    std::int64_t order = 0;
};

inline bool regions_overlap(const DataRegion& a, const DataRegion& b) {
    return a.data_id == b.data_id && a.offset < b.offset + b.length &&
           b.offset < a.offset + a.length;
}

/// Edges (i, j) by sequence position, i submitted before j, whenever the two
/// written regions touch the same slice of the same buffer. Mirrors a runtime
/// that serializes sub-kernels only on detected data overlap.
inline std::vector<std::pair<std::size_t, std::size_t>>
detect_dependencies(const std::vector<Submission>& submissions) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t j = 1; j < submissions.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (regions_overlap(submissions[i].region, submissions[j].region))
                edges.emplace_back(i, j);
    return edges;
}

struct ScheduleEvent {
    double start = 0.0;
    double finish = 0.0;
};

struct ScheduleResult {
    std::vector<ScheduleEvent> events; // one per submission, input order
    double makespan = 0.0;
};

/// Discrete schedule: a submission runs for work/speed, starting once both
/// its device is free and every overlapping earlier submission has finished.
inline ScheduleResult simulate_schedule(const std::vector<Submission>& submissions,
                                        const std::vector<DeviceProfile>& profiles) {
    std::unordered_map<int, double> speed_of;
    for (const auto& prof : profiles) {
        if (!(prof.speed > 0.0))
            throw std::invalid_argument("device " + std::to_string(prof.id) +
                                        " has non-positive speed");
        speed_of[prof.id] = prof.speed;
    }

    ScheduleResult result;
    result.events.resize(submissions.size());
    std::unordered_map<int, double> device_free;

    for (std::size_t j = 0; j < submissions.size(); ++j) {
        const Submission& sub = submissions[j];
        const auto it = speed_of.find(sub.device);
        if (it == speed_of.end())
            throw std::invalid_argument("unknown device id " + std::to_string(sub.device));

        double start = device_free[sub.device];
        for (std::size_t i = 0; i < j; ++i)
            if (regions_overlap(submissions[i].region, sub.region))
                start = std::max(start, result.events[i].finish);

        const double finish = start + static_cast<double>(sub.work) / it->second;
        result.events[j] = {start, finish};
        device_free[sub.device] = finish;
        result.makespan = std::max(result.makespan, finish);
    }
    return result;
}

/// Equal split of `work` items across the first `split` devices, disjoint
/// regions on one buffer (remainder to the last slice, as partition_range).
inline std::vector<Submission> split_submissions(std::int64_t work, int split) {
    const Partition part = partition_range(work, split, split);
    std::vector<Submission> subs;
    subs.reserve(static_cast<std::size_t>(split));
    for (int d = 0; d < split; ++d)
        subs.push_back({d, {0, part.offsets[static_cast<std::size_t>(d)],
                            part.ranges[static_cast<std::size_t>(d)]},
                        part.ranges[static_cast<std::size_t>(d)], d});
    return subs;
}

} // namespace ftle
