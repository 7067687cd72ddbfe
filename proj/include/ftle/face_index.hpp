#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ftle/mesh.hpp"

namespace ftle {

/// Point-to-face incidence in CSR form. offsets[p] is the cumulative count
/// of (face, vertex) incidences for points 0..p; face_ids holds each point's
/// incident faces in ascending order, in the segment
/// [offsets[p-1], offsets[p]) (starting at 0 for p = 0).
struct FaceIndex {
    std::vector<std::int64_t> offsets;
    std::vector<index_t> face_ids;
};

/// Half-open view of one point's segment inside FaceIndex::face_ids.
struct Segment {
    std::int64_t start = 0;
    std::int64_t length = 0;
};

/// Counting pass: one increment per (face, vertex) pair, then an inclusive
/// prefix sum. Runs sequentially on the host.
inline std::vector<std::int64_t> count_faces_per_point(const Mesh& mesh) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(mesh.n_points), 0);
    const int verts = mesh.verts_per_face;
    for (index_t f = 0; f < mesh.n_faces; ++f)
        for (int s = 0; s < verts; ++s)
            ++counts[mesh.face_vertex(f, s)];
    for (index_t p = 1; p < mesh.n_points; ++p)
        counts[p] += counts[p - 1];
    return counts;
}

/// Fills the face-id segments for points in [begin, end). Each point scans
/// faces in ascending order and stops once its count is satisfied, so ids
/// come out sorted. Disjoint ranges write disjoint segments of face_ids and
/// may run concurrently.
inline void build_faces_per_point(const Mesh& mesh,
                                  std::span<const std::int64_t> offsets,
                                  index_t begin, index_t end,
                                  std::span<index_t> face_ids) {
    if (begin < 0 || end < begin || end > mesh.n_points)
        throw std::out_of_range("point range out of bounds");
    const int verts = mesh.verts_per_face;
    for (index_t p = begin; p < end; ++p) {
        const std::int64_t seg_start = (p == 0) ? 0 : offsets[p - 1];
        const std::int64_t needed = offsets[p] - seg_start;
        std::int64_t count = 0;
        for (index_t f = 0; f < mesh.n_faces && count < needed; ++f)
            for (int s = 0; s < verts; ++s)
                if (mesh.face_vertex(f, s) == p)
                    face_ids[seg_start + count++] = f;
    }
}

/// Counting pass plus a full-range fill.
inline FaceIndex build_face_index(const Mesh& mesh) {
    FaceIndex index;
    index.offsets = count_faces_per_point(mesh);
    const std::int64_t total = index.offsets.empty() ? 0 : index.offsets.back();
    index.face_ids.resize(static_cast<std::size_t>(total));
    build_faces_per_point(mesh, index.offsets, 0, mesh.n_points, index.face_ids);
    return index;
}

inline Segment incident_faces(const FaceIndex& index, index_t p) {
    if (p < 0 || static_cast<std::size_t>(p) >= index.offsets.size())
        throw std::out_of_range("point index out of range");
    const std::int64_t start = (p == 0) ? 0 : index.offsets[p - 1];
    return {start, index.offsets[p] - start};
}

} // namespace ftle
