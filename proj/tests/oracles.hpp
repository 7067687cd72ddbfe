// Independent reference implementations the tests compare against.
// Deliberately naive: correctness over speed.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ftle/face_index.hpp"
#include "ftle/mesh.hpp"

namespace oracle {

// Face incidence by direct scan: for each point, walk every face in id
// order and record the ones that reference it (once per referencing slot).
inline ftle::FaceIndex naive_face_index(const ftle::Mesh& mesh) {
    ftle::FaceIndex index;
    index.offsets.resize(static_cast<std::size_t>(mesh.n_points));
    std::int64_t total = 0;
    for (ftle::index_t p = 0; p < mesh.n_points; ++p) {
        for (ftle::index_t f = 0; f < mesh.n_faces; ++f)
            for (int slot = 0; slot < mesh.verts_per_face; ++slot)
                if (mesh.face_vertex(f, slot) == p) {
                    index.face_ids.push_back(f);
                    ++total;
                }
        index.offsets[static_cast<std::size_t>(p)] = total;
    }
    return index;
}

// Cyclic Jacobi rotations on a dense symmetric copy; 100 sweeps is far
// beyond convergence for n <= 3.
inline double jacobi_max_eigenvalue(std::array<double, 9> a, int n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<std::size_t>(p * n + q)];
                if (apq == 0.0) continue;
                const double app = a[static_cast<std::size_t>(p * n + p)];
                const double aqq = a[static_cast<std::size_t>(q * n + q)];
                const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(phi), s = std::sin(phi);
                for (int k = 0; k < n; ++k) {
                    const double akp = a[static_cast<std::size_t>(k * n + p)];
                    const double akq = a[static_cast<std::size_t>(k * n + q)];
                    a[static_cast<std::size_t>(k * n + p)] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k * n + q)] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[static_cast<std::size_t>(p * n + k)];
                    const double aqk = a[static_cast<std::size_t>(q * n + k)];
                    a[static_cast<std::size_t>(p * n + k)] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q * n + k)] = s * apk + c * aqk;
                }
            }
    }
    double best = a[0];
    for (int i = 1; i < n; ++i)
        best = std::max(best, a[static_cast<std::size_t>(i * n + i)]);
    return best;
}

// Small random simplex mesh: coordinates in the unit box, each face a
// set of distinct vertex ids. Connectivity is arbitrary, which is all
// the incidence index cares about.
inline ftle::Mesh random_mesh(std::mt19937& rng, int dim, int max_points = 50,
                              int max_faces = 120) {
    ftle::Mesh mesh;
    mesh.dim = dim;
    mesh.verts_per_face = dim + 1;
    std::uniform_int_distribution<int> n_points_dist(dim + 2, max_points);
    std::uniform_int_distribution<int> n_faces_dist(1, max_faces);
    mesh.n_points = n_points_dist(rng);
    mesh.n_faces = n_faces_dist(rng);

    std::uniform_real_distribution<double> coord(0.0, 1.0);
    mesh.coords.resize(static_cast<std::size_t>(mesh.n_points) * dim);
    for (auto& c : mesh.coords) c = coord(rng);

    std::vector<ftle::index_t> ids(static_cast<std::size_t>(mesh.n_points));
    std::iota(ids.begin(), ids.end(), 0);
    mesh.faces.reserve(static_cast<std::size_t>(mesh.n_faces) * mesh.verts_per_face);
    for (ftle::index_t f = 0; f < mesh.n_faces; ++f) {
        std::shuffle(ids.begin(), ids.end(), rng);
        for (int slot = 0; slot < mesh.verts_per_face; ++slot)
            mesh.faces.push_back(ids[static_cast<std::size_t>(slot)]);
    }
    return mesh;
}

inline bool same_index(const ftle::FaceIndex& a, const ftle::FaceIndex& b) {
    return a.offsets == b.offsets && a.face_ids == b.face_ids;
}

} // namespace oracle
