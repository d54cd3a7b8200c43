#pragma once

#include "firetrack/aekf.hpp"
#include "firetrack/common.hpp"

#include <span>
#include <vector>

namespace firetrack {

struct FleetParams {
  double v = 10.0;          // UAV speed (m/s)
  double pz = 50.0;         // altitude (m)
  double half_angle = 0.5;  // camera half-angle (rad)
};

struct BoundInputs {
  double mst_cost = 0.0;  // MST length (m)
  int n_fires = 1;
  double zeta_alpha = 0.0;  // worst-case fire speed (m/s)
  double fov_width = 0.0;   // g (m)
  double alpha_conf = 0.05;
};

enum class CaseTag { C1 = 1, C2 = 2, C3 = 3 };

struct BoundResult {
  double t_ub = 0.0;
  CaseTag case_tag = CaseTag::C1;
  // C3 quadratic gamma T^2 - beta T + delta = 0 (gamma = a b, beta = 1 - a).
  double gamma = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  bool feasible = true;
};

/// Per-fire planar velocity marginal: mean and 2x2 covariance.
struct VelocityMarginal {
  Vector2d mean = Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};

/// Velocity mean and covariance of a track, pushing the (R, U, theta) block
/// of P through the velocity Jacobian.
VelocityMarginal velocity_marginal(const Track& track, const EllipseParams<double>& params);

/// One-sided standard normal quantile z_{1 - alpha}.
double upper_quantile(double alpha_conf);

/// Axis-wise speed bounds |v_i| + z sigma_i maximized over fires independently,
/// combined as sqrt(max_x^2 + max_y^2).
double worst_case_speed(std::span<const VelocityMarginal> fires, double alpha_conf);
double worst_case_speed(std::span<const Track> tracks, double alpha_conf, const EllipseParams<double>& params);

double fov_width(const FleetParams& fleet);

BoundResult t_ub_case1(const BoundInputs& in, const FleetParams& fleet);
BoundResult t_ub_case2(const BoundInputs& in, const FleetParams& fleet);
BoundResult t_ub_case3(const BoundInputs& in, const FleetParams& fleet);
BoundResult t_ub_for_case(CaseTag tag, const BoundInputs& in, const FleetParams& fleet);

/// Residual of the C3 self-consistency map T - delta - a T (b T + 1).
double case3_fixed_point_residual(double T, const BoundInputs& in, const FleetParams& fleet);

struct BoundConfidence {
  double joint = 1.0;       // (1 - alpha)^n
  double complement = 0.0;  // 1 - (1 - alpha)^n
};
BoundConfidence bound_confidence(int n_fires, double alpha_conf);

enum class UrrMode { Trace, MaxEigenvalue };

/// Forecast horizon in steps, ceil(t_ub / dt) and at least 1.
int horizon_steps(double t_ub, double dt);

/// Ratio of a forecast residual covariance to the current one.
double residual_ratio(const Eigen::MatrixXd& forecast, const Eigen::MatrixXd& current, UrrMode mode);

/// S_{t+r|t} / S_{t|t-1} with r = ceil(t_ub / dt); +inf if t_ub is not finite.
double urr(const Track& track, double t_ub, double dt, UrrMode mode = UrrMode::Trace);

}  // namespace firetrack
