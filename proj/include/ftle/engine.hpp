#pragma once

#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "ftle/face_index.hpp"
#include "ftle/ftle_kernel.hpp"
#include "ftle/mesh.hpp"
#include "ftle/mesh_io.hpp"
#include "ftle/partition.hpp"

namespace ftle {

/// Per-stage wall time: the longest sub-kernel duration in each stage.
struct StageTiming {
    double preprocess_seconds = 0.0;
    double ftle_seconds = 0.0;
};

struct ParallelResult {
    FaceIndex index;
    FtleField field;
    std::int64_t degenerate_points = 0;
    StageTiming timing;
    std::vector<double> preprocess_times;      // per sub-kernel
    std::vector<double> ftle_times;            // per sub-kernel
    std::vector<std::int64_t> incidence_work;  // face-id slots written per sub-kernel
};

namespace detail {

template <class Fn>
inline void run_workers(int count, Fn&& fn) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w)
        threads.emplace_back([&fn, &errors, w] {
            try {
                fn(w);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace detail

/// Two-stage pipeline on a pool of used_workers threads over a static point
/// partition: first the face-incidence sub-kernels, then the field
/// sub-kernels. Inputs are shared immutable; each worker writes a disjoint
/// slice of the outputs, so the result is bit-identical for any worker count.
inline ParallelResult run_parallel(const Mesh& mesh, const Flowmap& flowmap, real t_eval,
                                   int used_workers, int max_workers,
                                   const FtleOptions& opt = {}) {
    if (flowmap.values.size() != mesh.coords.size())
        throw std::invalid_argument("flowmap length does not match mesh");
    const Partition part = partition_range(mesh.n_points, used_workers, max_workers);

    ParallelResult res;
    res.index.offsets = count_faces_per_point(mesh);
    const std::int64_t total_slots =
        mesh.n_points == 0 ? 0 : res.index.offsets[static_cast<std::size_t>(mesh.n_points) - 1];
    res.index.face_ids.resize(static_cast<std::size_t>(total_slots));
    res.preprocess_times.assign(static_cast<std::size_t>(used_workers), 0.0);
    res.ftle_times.assign(static_cast<std::size_t>(used_workers), 0.0);
    res.incidence_work.assign(static_cast<std::size_t>(used_workers), 0);

    detail::run_workers(used_workers, [&](int w) {
        const auto begin = static_cast<index_t>(part.begin(w));
        const auto end = static_cast<index_t>(part.end(w));
        const auto t0 = std::chrono::steady_clock::now();
        build_faces_per_point(mesh, res.index.offsets, begin, end, res.index.face_ids);
        res.preprocess_times[static_cast<std::size_t>(w)] = detail::seconds_since(t0);
        const std::int64_t seg_start =
            begin == 0 ? 0 : res.index.offsets[static_cast<std::size_t>(begin) - 1];
        res.incidence_work[static_cast<std::size_t>(w)] =
            res.index.offsets[static_cast<std::size_t>(end) - 1] - seg_start;
    });

    res.field.t_eval = t_eval;
    res.field.values.resize(static_cast<std::size_t>(mesh.n_points));
    std::vector<std::int64_t> degenerate(static_cast<std::size_t>(used_workers), 0);

    detail::run_workers(used_workers, [&](int w) {
        const auto begin = static_cast<index_t>(part.begin(w));
        const auto end = static_cast<index_t>(part.end(w));
        const auto t0 = std::chrono::steady_clock::now();
        degenerate[static_cast<std::size_t>(w)] = compute_ftle_range(
            mesh, flowmap, res.index, t_eval, begin, end, res.field.values, opt);
        res.ftle_times[static_cast<std::size_t>(w)] = detail::seconds_since(t0);
    });

    res.degenerate_points =
        std::accumulate(degenerate.begin(), degenerate.end(), std::int64_t{0});
    for (int w = 0; w < used_workers; ++w) {
        res.timing.preprocess_seconds = std::max(
            res.timing.preprocess_seconds, res.preprocess_times[static_cast<std::size_t>(w)]);
        res.timing.ftle_seconds =
            std::max(res.timing.ftle_seconds, res.ftle_times[static_cast<std::size_t>(w)]);
    }
    return res;
}

/// Timing CSV: one row per stage per run plus `mean` aggregate rows.
inline void write_timing_csv(const std::vector<StageTiming>& runs, int workers,
                             const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open " + path + " for writing");

    char buf[64];
    const auto fmt = [&](double v) {
        return std::string(buf, detail::format_value(buf, buf + sizeof(buf), v));
    };

    out << "stage,workers,run,seconds\n";
    double pre_sum = 0.0, ftle_sum = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        out << "preprocess," << workers << ',' << r << ',' << fmt(runs[r].preprocess_seconds)
            << '\n';
        out << "ftle," << workers << ',' << r << ',' << fmt(runs[r].ftle_seconds) << '\n';
        pre_sum += runs[r].preprocess_seconds;
        ftle_sum += runs[r].ftle_seconds;
    }
    if (!runs.empty()) {
        const auto n = static_cast<double>(runs.size());
        out << "preprocess," << workers << ",mean," << fmt(pre_sum / n) << '\n';
        out << "ftle," << workers << ",mean," << fmt(ftle_sum / n) << '\n';
    }
    out.flush();
    if (!out) throw error("failed writing " + path);
}

} // namespace ftle
