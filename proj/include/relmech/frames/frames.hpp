#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relmech/bundle/coordinate_change.hpp"
#include "relmech/bundle/jet_point.hpp"
#include "relmech/bundle/sample_box.hpp"
#include "relmech/connections/calculus.hpp"
#include "relmech/connections/types.hpp"

namespace relmech {

/// Thrown when inputs that must describe the same frame do not.
class InconsistentFrameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by operations that only hold for equations quadratic in velocity.
class NotQuadraticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The equation in the primed coordinates of `chart`:
///   xi'^i = xi^j dj q'^i + v^j v^k djk q'^i + 2 v^j djt q'^i + dtt q'^i,
/// evaluated after pulling the primed jet point back through the inverse.
DynamicEquation transform_dynamic_equation(const DynamicEquation& xi, const CoordinateChange& chart);

/// The frame in the primed coordinates: Gamma'^i = dt q'^i + Gamma^j dj q'^i.
ReferenceFrame transform_frame(const ReferenceFrame& frame, const CoordinateChange& chart);

/// The frame whose adapted coordinates are given by `chart` (q -> qbar):
/// the velocity of a point held at fixed qbar.
ReferenceFrame observer_frame(const CoordinateChange& chart);

/// max over the box of |d_i qbar^a Gamma^i + dt qbar^a|; zero iff `chart`
/// (q -> qbar) is adapted to the frame.
double adapted_frame_residual(const ReferenceFrame& frame, const CoordinateChange& chart,
                              const SampleBox& box = SampleBox{});

/// dt Gamma + Gamma^j dj Gamma - xi(t, q, Gamma).
std::vector<double> geodesic_residual(const DynamicEquation& xi, const ReferenceFrame& frame,
                                      double t, std::span<const double> q);

/// gamma~^i_k = gamma^i_k, gamma~^i_0 = d_t Gamma^i - gamma^i_k Gamma^k.
DynamicConnection tilde_gamma(const DynamicConnection& gamma, const ReferenceFrame& frame);

/// The frame connection
///   gF^i_0 = d_t Gamma^i - gamma^i_k Gamma^k - Gamma^k (dk Gamma^i - gamma^i_k o Gamma),
///   gF^i_k = gamma^i_k + dk Gamma^i - gamma^i_k o Gamma,
/// where "o Gamma" substitutes v = Gamma(t, q).
DynamicConnection frame_connection(const DynamicConnection& gamma, const ReferenceFrame& frame);

struct FrameConnectionComponents {
  std::vector<double> g0;               // gF^i_0
  std::vector<std::vector<double>> gk;  // gF^i_k as [i][k]
};

FrameConnectionComponents frame_connection_components(const DynamicConnection& gamma,
                                                      const ReferenceFrame& frame,
                                                      const JetPoint1& p);

/// xi_F^i = d_t Gamma^i + (dk Gamma^i + gamma^i_k - gamma^i_k o Gamma)(v^k - Gamma^k).
DynamicEquation xi_frame(const DynamicConnection& gamma, const ReferenceFrame& frame);

/// xi - xi_F with gamma built from xi.
std::vector<double> relative_acceleration(const DynamicEquation& xi, const ReferenceFrame& frame,
                                          const JetPoint1& p);

/// (a - gF_0 - v^j gF_j) - (relative acceleration); zero iff p lies on xi.
std::vector<double> covariant_residual(const DynamicEquation& xi, const ReferenceFrame& frame,
                                       const JetPoint2& p);

struct CoriolisReport {
  std::vector<double> a_direct;
  std::vector<double> a_decomposed;
  std::vector<std::vector<double>> nabla;  // [k][lambda], lambda = 0 (time) .. m
  std::vector<double> rel_v;
  /// Split of a_decomposed into the frame term -Gamma^l nabla_l Gamma and the
  /// velocity term -2 rel_v^l nabla_l Gamma.
  std::vector<double> frame_term;
  std::vector<double> velocity_term;
};

/// Relative acceleration two ways: directly, and as
///   -(Gamma^l nabla_l Gamma^i + 2 rel_v^l nabla_l Gamma^i),  l = 0..m,
/// with Gamma^0 = 1, rel_v^0 = 0 and nabla_l Gamma^k = d_l Gamma^k - gamma^k_l o Gamma.
/// Throws NotQuadraticError unless xi is quadratic in velocity at p.
CoriolisReport coriolis_decomposition(const DynamicEquation& xi, const ReferenceFrame& frame,
                                      const JetPoint1& p);

/// The free motion equation seen from coordinates q, given the frame and the
/// chart from the frame's adapted coordinates qbar to q:
///   d_t Gamma + dj Gamma (v - Gamma)^j
///     - (dq/dqbar)(d^2 qbar/dq dq)(v - Gamma)(v - Gamma).
/// For affine charts the simplified form dt Gamma - Gamma^j dj Gamma + 2 v^j dj Gamma
/// is returned after checking it agrees with the general one on the box.
/// Throws InconsistentFrameError when the chart is not adapted to the frame
/// (residual above 1e-8).
DynamicEquation free_motion_equation(const ReferenceFrame& frame, const CoordinateChange& chart,
                                     const SampleBox& box = SampleBox{});

enum class FreeMotionVerdict { fails_necessary_criterion, passes_inconclusive };

struct FreeMotionReport {
  double max_curvature = 0.0;
  FreeMotionVerdict verdict = FreeMotionVerdict::passes_inconclusive;
};

std::string to_string(FreeMotionVerdict verdict);

/// Largest |R| of the connection built from xi over the box. Flat curvature
/// is necessary, not sufficient, for free motion.
FreeMotionReport free_motion_curvature_test(const DynamicEquation& xi,
                                            const SampleBox& box = SampleBox{},
                                            double tolerance = 1e-8);

/// qbar = k q - u t - a.
struct GalileiTransform {
  std::vector<std::vector<double>> k;
  std::vector<double> u;
  std::vector<double> a;

  std::size_t dimension() const { return u.size(); }
};

/// Applies `first`, then `second`.
GalileiTransform compose(const GalileiTransform& first, const GalileiTransform& second);

/// The chart of a Galilei transformation; throws ChartError for |det k| <= 1e-12.
CoordinateChange galilei_chart(const GalileiTransform& g);
CoordinateChange galilei_chart(const std::vector<std::vector<double>>& k,
                               const std::vector<double>& u, const std::vector<double>& a);

}  // namespace relmech
