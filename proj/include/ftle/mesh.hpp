#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ftle/errors.hpp"

namespace ftle {

using real = double;

/// Point and face ids. 32 bits cover the largest supported grids
/// (~10M points, ~20M faces) at half the memory of 64-bit ids.
using index_t = std::int32_t;

/// Axis interval [min, max].
struct Interval {
    real min = 0.0;
    real max = 1.0;
};

/// Simplex mesh: triangles in 2D, tetrahedra in 3D.
/// coords is row-major per point (n_points * dim); faces is row-major
/// per simplex (n_faces * verts_per_face), zero-based point indices.
struct Mesh {
    int dim = 2;
    index_t n_points = 0;
    index_t n_faces = 0;
    int verts_per_face = 3; // dim + 1
    std::vector<real> coords;
    std::vector<index_t> faces;

    real coord(index_t p, int axis) const {
        return coords[static_cast<std::size_t>(p) * dim + axis];
    }
    index_t face_vertex(index_t f, int slot) const {
        return faces[static_cast<std::size_t>(f) * verts_per_face + slot];
    }

    /// Checks the structural invariants; throws ftle::error on violation.
    void validate() const {
        if (dim != 2 && dim != 3)
            throw error("mesh dim must be 2 or 3, got " + std::to_string(dim));
        if (verts_per_face != dim + 1)
            throw error("verts_per_face must be dim+1");
        if (coords.size() != static_cast<std::size_t>(n_points) * dim)
            throw error("coords length does not match n_points*dim");
        if (faces.size() != static_cast<std::size_t>(n_faces) * verts_per_face)
            throw error("faces length does not match n_faces*verts_per_face");
        for (std::size_t i = 0; i < faces.size(); ++i)
            if (faces[i] < 0 || faces[i] >= n_points)
                throw error("face vertex " + std::to_string(faces[i]) +
                            " out of range [0," + std::to_string(n_points) + ")");
    }
};

/// Advected positions F(x0) of every mesh point between t0 and t1.
/// values has the same layout and length as Mesh::coords.
struct Flowmap {
    real t0 = 0.0;
    real t1 = 0.0;
    std::vector<real> values;

    real interval() const { return t1 - t0; }
    real value(index_t p, int axis, int dim) const {
        return values[static_cast<std::size_t>(p) * dim + axis];
    }
};

namespace detail {

inline void check_extent(index_t n, const char* name) {
    if (n < 2)
        throw std::invalid_argument(std::string(name) +
                                    " must be >= 2, got " + std::to_string(n));
}

inline void check_interval(Interval iv, const char* name) {
    if (!(iv.min < iv.max))
        throw std::invalid_argument(std::string(name) + " range is degenerate");
}

inline index_t checked_point_count(std::int64_t n) {
    if (n > std::numeric_limits<index_t>::max())
        throw std::invalid_argument("grid too large for 32-bit point ids");
    return static_cast<index_t>(n);
}

} // namespace detail

/// Regular nx-by-ny lattice over the given ranges, each cell split into two
/// triangles along the lower-left to upper-right diagonal. Point (i,j) gets
/// index j*nx + i; coordinate per axis is min + i*(max-min)/(extent-1).
inline Mesh generate_grid_2d(index_t nx, index_t ny, Interval x_range, Interval y_range) {
    detail::check_extent(nx, "nx");
    detail::check_extent(ny, "ny");
    detail::check_interval(x_range, "x");
    detail::check_interval(y_range, "y");

    Mesh mesh;
    mesh.dim = 2;
    mesh.verts_per_face = 3;
    mesh.n_points = detail::checked_point_count(std::int64_t(nx) * ny);
    mesh.n_faces = detail::checked_point_count(2 * std::int64_t(nx - 1) * (ny - 1));
    mesh.coords.resize(static_cast<std::size_t>(mesh.n_points) * 2);
    mesh.faces.resize(static_cast<std::size_t>(mesh.n_faces) * 3);

    const real hx = (x_range.max - x_range.min) / static_cast<real>(nx - 1);
    const real hy = (y_range.max - y_range.min) / static_cast<real>(ny - 1);
    std::size_t c = 0;
    for (index_t j = 0; j < ny; ++j)
        for (index_t i = 0; i < nx; ++i) {
            mesh.coords[c++] = x_range.min + i * hx;
            mesh.coords[c++] = y_range.min + j * hy;
        }

    std::size_t f = 0;
    for (index_t j = 0; j + 1 < ny; ++j)
        for (index_t i = 0; i + 1 < nx; ++i) {
            const index_t ll = j * nx + i;
            const index_t lr = ll + 1;
            const index_t ul = ll + nx;
            const index_t ur = ul + 1;
            mesh.faces[f++] = ll; mesh.faces[f++] = lr; mesh.faces[f++] = ur;
            mesh.faces[f++] = ll; mesh.faces[f++] = ur; mesh.faces[f++] = ul;
        }
    return mesh;
}

/// Regular nx-by-ny-by-nz lattice, each cubic cell split into the six Kuhn
/// tetrahedra sharing the cell's main diagonal. Point (i,j,k) gets index
/// (k*ny + j)*nx + i. All tetrahedra have positive signed volume.
inline Mesh generate_grid_3d(index_t nx, index_t ny, index_t nz,
                             std::array<Interval, 3> ranges) {
    detail::check_extent(nx, "nx");
    detail::check_extent(ny, "ny");
    detail::check_extent(nz, "nz");
    detail::check_interval(ranges[0], "x");
    detail::check_interval(ranges[1], "y");
    detail::check_interval(ranges[2], "z");

    Mesh mesh;
    mesh.dim = 3;
    mesh.verts_per_face = 4;
    mesh.n_points = detail::checked_point_count(std::int64_t(nx) * ny * nz);
    mesh.n_faces = detail::checked_point_count(
        6 * std::int64_t(nx - 1) * (ny - 1) * (nz - 1));
    mesh.coords.resize(static_cast<std::size_t>(mesh.n_points) * 3);
    mesh.faces.resize(static_cast<std::size_t>(mesh.n_faces) * 4);

    const real h[3] = {
        (ranges[0].max - ranges[0].min) / static_cast<real>(nx - 1),
        (ranges[1].max - ranges[1].min) / static_cast<real>(ny - 1),
        (ranges[2].max - ranges[2].min) / static_cast<real>(nz - 1),
    };
    std::size_t c = 0;
    for (index_t k = 0; k < nz; ++k)
        for (index_t j = 0; j < ny; ++j)
            for (index_t i = 0; i < nx; ++i) {
                mesh.coords[c++] = ranges[0].min + i * h[0];
                mesh.coords[c++] = ranges[1].min + j * h[1];
                mesh.coords[c++] = ranges[2].min + k * h[2];
            }

    // Kuhn subdivision: one tet per monotone lattice path from the cell's
    // (0,0,0) corner to its (1,1,1) corner, i.e. per axis permutation.
    // Odd permutations are emitted with two vertices swapped so every tet
    // keeps positive orientation.
    static constexpr int perms[6][3] = {
        {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    static constexpr bool odd[6] = {false, true, true, false, false, true};

    auto corner = [nx, ny](index_t i, index_t j, index_t k) {
        return (k * ny + j) * nx + i;
    };

    std::size_t f = 0;
    for (index_t k = 0; k + 1 < nz; ++k)
        for (index_t j = 0; j + 1 < ny; ++j)
            for (index_t i = 0; i + 1 < nx; ++i)
                for (int t = 0; t < 6; ++t) {
                    index_t step[3] = {0, 0, 0};
                    index_t v[4];
                    v[0] = corner(i, j, k);
                    for (int s = 0; s < 3; ++s) {
                        step[perms[t][s]] = 1;
                        v[s + 1] = corner(i + step[0], j + step[1], k + step[2]);
                    }
                    if (odd[t]) std::swap(v[1], v[2]);
                    mesh.faces[f++] = v[0];
                    mesh.faces[f++] = v[1];
                    mesh.faces[f++] = v[2];
                    mesh.faces[f++] = v[3];
                }
    return mesh;
}

} // namespace ftle
