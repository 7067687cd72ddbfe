#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftle/errors.hpp"
#include "ftle/face_index.hpp"
#include "ftle/mesh.hpp"

namespace ftle {

/// Small dense symmetric matrix (dim 2 or 3), row-major entries.
/// Gram construction keeps the mirror entries bitwise equal.
struct SymMatrix {
    int dim = 2;
    std::array<real, 9> entries{};

    real at(int i, int j) const { return entries[static_cast<std::size_t>(i) * dim + j]; }
    real& at(int i, int j) { return entries[static_cast<std::size_t>(i) * dim + j]; }
};

/// Per-axis finite-difference stencil around a point: the nearest strict-side
/// neighbor on each side of each axis, or the point itself where a side has
/// no candidate (one-sided difference at boundaries).
struct NeighborSet {
    std::array<index_t, 3> lower{};
    std::array<index_t, 3> upper{};
};

/// Field evaluation policy: eigenvalues at or below lambda_floor map to the
/// fill value instead of feeding the logarithm.
struct FtleOptions {
    real lambda_floor = 1e-300;
    real fill = -std::numeric_limits<real>::infinity();
};

/// Scalar FTLE field over the mesh points; t_eval is the interval length
/// used as the divisor.
struct FtleField {
    real t_eval = 0.0;
    std::vector<real> values;
};

namespace detail {

// Candidate set is every vertex of p's incident faces except p itself.
// Per axis and side, keep the candidate nearest in Euclidean distance,
// ties broken by smallest point index. Returns false when some axis has
// no strict candidate on either side.
inline bool select_neighbors(index_t p, const Mesh& mesh, const FaceIndex& index,
                             NeighborSet& out) noexcept {
    const int dim = mesh.dim;
    const int verts = mesh.verts_per_face;
    const real inf = std::numeric_limits<real>::infinity();

    std::array<real, 3> best_lo_d2{inf, inf, inf};
    std::array<real, 3> best_hi_d2{inf, inf, inf};
    out.lower = {p, p, p};
    out.upper = {p, p, p};

    std::array<real, 3> pc{};
    for (int d = 0; d < dim; ++d) pc[d] = mesh.coord(p, d);

    const std::int64_t seg_start = (p == 0) ? 0 : index.offsets[p - 1];
    const std::int64_t seg_end = index.offsets[p];
    for (std::int64_t s = seg_start; s < seg_end; ++s) {
        const index_t f = index.face_ids[s];
        for (int slot = 0; slot < verts; ++slot) {
            const index_t v = mesh.face_vertex(f, slot);
            if (v == p) continue;
            std::array<real, 3> diff{};
            real d2 = 0.0;
            for (int d = 0; d < dim; ++d) {
                diff[d] = mesh.coord(v, d) - pc[d];
                d2 += diff[d] * diff[d];
            }
            for (int d = 0; d < dim; ++d) {
                if (diff[d] < 0.0) {
                    if (d2 < best_lo_d2[d] ||
                        (d2 == best_lo_d2[d] && v < out.lower[d])) {
                        best_lo_d2[d] = d2;
                        out.lower[d] = v;
                    }
                } else if (diff[d] > 0.0) {
                    if (d2 < best_hi_d2[d] ||
                        (d2 == best_hi_d2[d] && v < out.upper[d])) {
                        best_hi_d2[d] = d2;
                        out.upper[d] = v;
                    }
                }
            }
        }
    }

    for (int d = 0; d < dim; ++d)
        if (out.lower[d] == p && out.upper[d] == p) return false;
    return true;
}

// Gram matrix (gradF)^T gradF of the flowmap finite-difference gradient.
// Column k of gradF is the difference of flowmap components along axis k
// divided by that axis' coordinate span.
inline SymMatrix gram_from_neighbors(const Mesh& mesh, const Flowmap& flowmap,
                                     const NeighborSet& nb) {
    const int dim = mesh.dim;
    SymMatrix m;
    m.dim = dim;

    std::array<std::array<real, 3>, 3> grad{}; // grad[axis][component]
    for (int d = 0; d < dim; ++d) {
        const index_t lo = nb.lower[d];
        const index_t hi = nb.upper[d];
        const real span = mesh.coord(hi, d) - mesh.coord(lo, d);
        if (span == 0.0)
            throw degenerate_neighborhood_error(
                "zero coordinate span along axis " + std::to_string(d));
        for (int c = 0; c < dim; ++c)
            grad[d][c] = (flowmap.value(hi, c, dim) - flowmap.value(lo, c, dim)) / span;
    }
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            real dot = 0.0;
            for (int c = 0; c < dim; ++c) dot += grad[i][c] * grad[j][c];
            m.at(i, j) = dot;
            m.at(j, i) = dot;
        }
    return m;
}

} // namespace detail

/// Nearest strict-side neighbor per axis over p's face-incident vertex set.
/// Boundary sides fall back to p itself; an axis with no candidate on either
/// side throws degenerate_neighborhood_error.
inline NeighborSet green_gauss_neighbors(index_t p, const Mesh& mesh,
                                         const FaceIndex& index) {
    if (p < 0 || p >= mesh.n_points)
        throw std::out_of_range("point index out of range");
    NeighborSet nb;
    if (!detail::select_neighbors(p, mesh, index, nb))
        throw degenerate_neighborhood_error(
            "point " + std::to_string(p) + " has no neighborhood variation along some axis");
    return nb;
}

/// Cauchy-Green tensor at point p from central/one-sided differences.
inline SymMatrix grad_tensor_2d(index_t p, const Mesh& mesh, const Flowmap& flowmap,
                                const FaceIndex& index) {
    if (mesh.dim != 2) throw std::invalid_argument("grad_tensor_2d needs a 2D mesh");
    return detail::gram_from_neighbors(mesh, flowmap, green_gauss_neighbors(p, mesh, index));
}

inline SymMatrix grad_tensor_3d(index_t p, const Mesh& mesh, const Flowmap& flowmap,
                                const FaceIndex& index) {
    if (mesh.dim != 3) throw std::invalid_argument("grad_tensor_3d needs a 3D mesh");
    return detail::gram_from_neighbors(mesh, flowmap, green_gauss_neighbors(p, mesh, index));
}

/// Largest eigenvalue of a symmetric 2x2 via the quadratic closed form.
/// A discriminant pushed below zero by more than roundoff means the input
/// was not symmetric.
inline real max_eigenvalue_2d(const SymMatrix& m) {
    if (m.dim != 2) throw std::invalid_argument("max_eigenvalue_2d needs dim 2");
    const real a = m.at(0, 0), b = m.at(0, 1), c = m.at(1, 0), d = m.at(1, 1);
    real disc = (a - d) * (a - d) + 4.0 * b * c;
    const real scale = (a - d) * (a - d) + 4.0 * std::abs(b * c);
    if (disc < -1e-12 * scale)
        throw asymmetric_matrix_error("negative discriminant: input is not symmetric");
    if (disc < 0.0) disc = 0.0;
    return (a + d + std::sqrt(disc)) / 2.0;
}

/// Largest eigenvalue of a symmetric 3x3 via the trigonometric closed form:
/// deflate to B = (m - q*I)/p and take q + 2p*cos(theta/3) with
/// theta = acos(det(B)/2). Exact-diagonal inputs short-circuit.
inline real max_eigenvalue_3d(const SymMatrix& m) {
    if (m.dim != 3) throw std::invalid_argument("max_eigenvalue_3d needs dim 3");
    const real a00 = m.at(0, 0), a01 = m.at(0, 1), a02 = m.at(0, 2);
    const real a10 = m.at(1, 0), a11 = m.at(1, 1), a12 = m.at(1, 2);
    const real a20 = m.at(2, 0), a21 = m.at(2, 1), a22 = m.at(2, 2);

    if (a01 == 0.0 && a02 == 0.0 && a12 == 0.0 &&
        a10 == 0.0 && a20 == 0.0 && a21 == 0.0)
        return std::max(a00, std::max(a11, a22));

    const real q = (a00 + a11 + a22) / 3.0;
    const real cross = a01 * a10 + a02 * a20 + a12 * a21;
    const real diag = (a00 - q) * (a00 - q) + (a11 - q) * (a11 - q) + (a22 - q) * (a22 - q);
    real p2 = diag + 2.0 * cross;
    const real scale = diag + 2.0 * (std::abs(a01 * a10) + std::abs(a02 * a20) +
                                     std::abs(a12 * a21));
    if (p2 < -1e-12 * scale)
        throw asymmetric_matrix_error("negative deflation radius: input is not symmetric");
    if (p2 < 0.0) p2 = 0.0;
    const real p = std::sqrt(p2 / 6.0);
    if (p == 0.0) return q;

    const real b00 = (a00 - q) / p, b11 = (a11 - q) / p, b22 = (a22 - q) / p;
    const real b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
    const real b10 = a10 / p, b20 = a20 / p, b21 = a21 / p;
    const real det_b = b00 * (b11 * b22 - b12 * b21) - b01 * (b10 * b22 - b12 * b20) +
                       b02 * (b10 * b21 - b11 * b20);
    real r = det_b / 2.0;
    if (r < -1.0 - 1e-12 || r > 1.0 + 1e-12)
        throw asymmetric_matrix_error("characteristic ratio out of [-1,1]: input is not symmetric");
    if (r < -1.0) r = -1.0;
    if (r > 1.0) r = 1.0;
    return q + 2.0 * p * std::cos(std::acos(r) / 3.0);
}

inline real max_eigenvalue(const SymMatrix& m) {
    return m.dim == 2 ? max_eigenvalue_2d(m) : max_eigenvalue_3d(m);
}

/// FTLE value log(sqrt(lambda))/t_eval. Eigenvalues at or below the floor
/// (and non-finite ones) map to the fill value so the field never carries
/// an unflagged NaN.
inline real ftle_point(real lambda_max, real t_eval, const FtleOptions& opt = {}) {
    if (!(t_eval > 0.0))
        throw std::invalid_argument("t_eval must be positive");
    if (!std::isfinite(lambda_max) || !(lambda_max > opt.lambda_floor))
        return opt.fill;
    return std::log(std::sqrt(lambda_max)) / t_eval;
}

/// Evaluates the field for points in [begin, end), writing only those slots
/// of `values`. Degenerate neighborhoods and floored eigenvalues become fill
/// values and are counted instead of aborting the sweep. Disjoint ranges
/// over a shared output are safe to run concurrently.
inline std::int64_t compute_ftle_range(const Mesh& mesh, const Flowmap& flowmap,
                                       const FaceIndex& index, real t_eval,
                                       index_t begin, index_t end,
                                       std::span<real> values,
                                       const FtleOptions& opt = {}) {
    if (!(t_eval > 0.0))
        throw std::invalid_argument("t_eval must be positive");
    if (begin < 0 || end < begin || end > mesh.n_points)
        throw std::out_of_range("point range out of bounds");
    if (flowmap.values.size() != mesh.coords.size())
        throw std::invalid_argument("flowmap length does not match mesh");

    std::int64_t filled = 0;
    NeighborSet nb;
    for (index_t p = begin; p < end; ++p) {
        if (!detail::select_neighbors(p, mesh, index, nb)) {
            values[p] = opt.fill;
            ++filled;
            continue;
        }
        const SymMatrix tensor = detail::gram_from_neighbors(mesh, flowmap, nb);
        const real lambda = mesh.dim == 2 ? max_eigenvalue_2d(tensor)
                                          : max_eigenvalue_3d(tensor);
        if (!std::isfinite(lambda) || !(lambda > opt.lambda_floor)) {
            values[p] = opt.fill;
            ++filled;
            continue;
        }
        values[p] = std::log(std::sqrt(lambda)) / t_eval;
    }
    return filled;
}

struct FtleResult {
    FtleField field;
    std::int64_t degenerate_points = 0;
};

/// Whole-mesh convenience wrapper around compute_ftle_range.
inline FtleResult compute_ftle(const Mesh& mesh, const Flowmap& flowmap,
                               const FaceIndex& index, real t_eval,
                               const FtleOptions& opt = {}) {
    FtleResult res;
    res.field.t_eval = t_eval;
    res.field.values.resize(static_cast<std::size_t>(mesh.n_points));
    res.degenerate_points = compute_ftle_range(mesh, flowmap, index, t_eval, 0,
                                               mesh.n_points, res.field.values, opt);
    return res;
}

} // namespace ftle
