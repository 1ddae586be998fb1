#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "relmech/bundle/jet_point.hpp"
#include "relmech/connections/types.hpp"

namespace relmech {

/// v^i - Gamma^i(t, q).
std::vector<double> relative_velocity(const ReferenceFrame& frame, const JetPoint1& p);

/// chi = Gamma, xi = dt Gamma + v^j dj Gamma.
SecondOrderConnection frame_jet_prolongation(const ReferenceFrame& frame);

/// xi^i = gamma^i_0 + v^j gamma^i_j.
DynamicEquation xi_from_gamma(const DynamicConnection& gamma);

/// gamma^i_j = 1/2 dv_j xi^i, gamma^i_0 = xi^i - v^j gamma^i_j.
DynamicConnection gamma_from_xi(const DynamicEquation& xi);

/// T^k_i = gamma^k_i - dv_i gamma^k_0 - v^j dv_i gamma^k_j.
TorsionTensor torsion(const DynamicConnection& gamma, const JetPoint1& p);

/// R^i_{lm} = d_l gamma^i_m - d_m gamma^i_l + gamma^j_l dv_j gamma^i_m
///            - gamma^j_m dv_j gamma^i_l, with d_0 = dt.
CurvatureTensor curvature(const DynamicConnection& gamma, const JetPoint1& p);

/// a^i - gamma^i_0 - v^j gamma^i_j.
std::vector<double> vertical_covariant_differential(const DynamicConnection& gamma,
                                                    const JetPoint2& p);

/// Taylor coefficients of xi in v at v = 0, with a remainder probe at 16
/// quasi-random velocities in [-2, 2]^m (tolerance 1e-9).
QuadraticFit quadratic_coefficients(const DynamicEquation& xi, double t, std::span<const double> q);

/// Hyper-dual forms used by composite evaluators.
std::vector<HyperDual> gamma_from_xi_at(const DynamicEquation& xi, const JetArgs& p);

}  // namespace relmech
