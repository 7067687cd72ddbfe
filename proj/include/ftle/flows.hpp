#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "ftle/errors.hpp"
#include "ftle/mesh.hpp"

namespace ftle {

/// Time-periodic double gyre on [0,2]x[0,1]; the classic FTLE benchmark.
struct DoubleGyre {
    real amplitude = 0.1;
    real epsilon = 0.25;
    real omega = 2.0 * std::numbers::pi_v<real> / 10.0;
};

/// Steady Arnold-Beltrami-Childress flow, 2pi-periodic in each axis.
struct AbcFlow {
    real a = std::numbers::sqrt3_v<real>;
    real b = std::numbers::sqrt2_v<real>;
    real c = 1.0;
};

/// Zero velocity; the flowmap is the seed coordinates, bit for bit.
struct IdentityFlow {};

/// Linear map x -> matrix*x + offset applied directly (no integration),
/// for fields with a known closed-form deformation.
struct AffineFlow {
    int dim = 2;
    std::array<real, 9> matrix{}; // row-major dim x dim
    std::array<real, 3> offset{};
};

using FlowSpec = std::variant<DoubleGyre, AbcFlow, IdentityFlow, AffineFlow>;

inline std::array<real, 3> velocity(const DoubleGyre& g, const std::array<real, 3>& pos,
                                    real t) {
    constexpr real pi = std::numbers::pi_v<real>;
    const real x = pos[0], y = pos[1];
    const real e = g.epsilon * std::sin(g.omega * t);
    const real f = e * x * x + (1.0 - 2.0 * e) * x;
    const real dfdx = 2.0 * e * x + (1.0 - 2.0 * e);
    return {-pi * g.amplitude * std::sin(pi * f) * std::cos(pi * y),
            pi * g.amplitude * std::cos(pi * f) * std::sin(pi * y) * dfdx, 0.0};
}

inline std::array<real, 3> velocity(const AbcFlow& f, const std::array<real, 3>& pos,
                                    real) {
    const real x = pos[0], y = pos[1], z = pos[2];
    return {f.a * std::sin(z) + f.c * std::cos(y),
            f.b * std::sin(x) + f.a * std::cos(z),
            f.c * std::sin(y) + f.b * std::cos(x)};
}

inline std::array<real, 3> velocity(const IdentityFlow&, const std::array<real, 3>&,
                                    real) {
    return {0.0, 0.0, 0.0};
}

inline std::array<real, 3> velocity(const AffineFlow&, const std::array<real, 3>&,
                                    real) {
    return {0.0, 0.0, 0.0};
}

inline std::array<real, 3> velocity(const FlowSpec& spec, const std::array<real, 3>& pos,
                                    real t) {
    return std::visit([&](const auto& f) { return velocity(f, pos, t); }, spec);
}

namespace detail {

template <class Flow>
inline std::array<real, 3> rk4_advect(const Flow& flow, std::array<real, 3> pos,
                                      real t0, real t1, int n_steps) {
    const real h = (t1 - t0) / n_steps;
    for (int s = 0; s < n_steps; ++s) {
        const real t = t0 + s * h;
        const auto k1 = velocity(flow, pos, t);
        std::array<real, 3> p2{pos[0] + 0.5 * h * k1[0], pos[1] + 0.5 * h * k1[1],
                               pos[2] + 0.5 * h * k1[2]};
        const auto k2 = velocity(flow, p2, t + 0.5 * h);
        std::array<real, 3> p3{pos[0] + 0.5 * h * k2[0], pos[1] + 0.5 * h * k2[1],
                               pos[2] + 0.5 * h * k2[2]};
        const auto k3 = velocity(flow, p3, t + 0.5 * h);
        std::array<real, 3> p4{pos[0] + h * k3[0], pos[1] + h * k3[1],
                               pos[2] + h * k3[2]};
        const auto k4 = velocity(flow, p4, t + h);
        for (int d = 0; d < 3; ++d)
            pos[d] += (h / 6.0) * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
    }
    return pos;
}

} // namespace detail

/// Advects every mesh point from t0 to t1 and returns the arrival positions.
/// Identity copies the coordinates unchanged; affine applies its matrix
/// directly; the analytic flows use fixed-step RK4 with n_steps stages.
/// A non-finite arrival position raises integration_diverged_error.
inline Flowmap integrate_flowmap(const Mesh& mesh, const FlowSpec& spec, real t0,
                                 real t1, int n_steps) {
    Flowmap out;
    out.t0 = t0;
    out.t1 = t1;

    if (std::holds_alternative<IdentityFlow>(spec)) {
        out.values = mesh.coords;
        return out;
    }

    const int dim = mesh.dim;
    out.values.resize(mesh.coords.size());

    if (const auto* aff = std::get_if<AffineFlow>(&spec)) {
        if (aff->dim != dim)
            throw std::invalid_argument("affine flow dimension does not match mesh");
        for (index_t p = 0; p < mesh.n_points; ++p) {
            for (int i = 0; i < dim; ++i) {
                real acc = aff->offset[i];
                for (int j = 0; j < dim; ++j)
                    acc += aff->matrix[static_cast<std::size_t>(i) * dim + j] *
                           mesh.coord(p, j);
                out.values[static_cast<std::size_t>(p) * dim + i] = acc;
            }
        }
        return out;
    }

    if (n_steps <= 0)
        throw std::invalid_argument("n_steps must be positive");

    for (index_t p = 0; p < mesh.n_points; ++p) {
        std::array<real, 3> pos{0.0, 0.0, 0.0};
        for (int d = 0; d < dim; ++d) pos[d] = mesh.coord(p, d);
        const auto arrived = std::visit(
            [&](const auto& f) { return detail::rk4_advect(f, pos, t0, t1, n_steps); },
            spec);
        for (int d = 0; d < dim; ++d) {
            if (!std::isfinite(arrived[d]))
                throw integration_diverged_error(
                    "non-finite arrival position for point " + std::to_string(p));
            out.values[static_cast<std::size_t>(p) * dim + d] = arrived[d];
        }
    }
    return out;
}

} // namespace ftle
