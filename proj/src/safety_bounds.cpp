#include "firetrack/safety_bounds.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace firetrack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

BoundResult infeasible(CaseTag tag) {
  BoundResult r;
  r.case_tag = tag;
  r.t_ub = kInf;
  r.feasible = false;
  return r;
}
}  // namespace

VelocityMarginal velocity_marginal(const Track& track, const EllipseParams<double>& params) {
  const double R = track.mean[idx::R];
  const double U = track.mean[idx::U];
  const double theta = track.mean[idx::theta];
  const double factor = spread_factor(U, params);
  const double C = R * factor;
  const double dC_dU = spread_coefficient_du(R, U, params);
  const double sn = std::sin(theta), cs = std::cos(theta);

  Eigen::Matrix<double, 2, 3> J;
  J << factor * sn, dC_dU * sn, C * cs,
       factor * cs, dC_dU * cs, -C * sn;
  const Eigen::Matrix3d weather = track.P.block<3, 3>(idx::R, idx::R);

  VelocityMarginal m;
  m.mean = Vector2d(C * sn, C * cs);
  m.cov = J * weather * J.transpose();
  return m;
}

double upper_quantile(double alpha_conf) {
  if (!(alpha_conf > 0.0 && alpha_conf < 1.0)) throw std::invalid_argument("alpha_conf must lie in (0, 1)");
  return boost::math::quantile(boost::math::complement(boost::math::normal_distribution<double>(), alpha_conf));
}

double worst_case_speed(std::span<const VelocityMarginal> fires, double alpha_conf) {
  const double z = upper_quantile(alpha_conf);
  double best_x = 0.0, best_y = 0.0;
  for (const auto& f : fires) {
    const double bx = std::abs(f.mean.x()) + z * std::sqrt(std::max(f.cov(0, 0), 0.0));
    const double by = std::abs(f.mean.y()) + z * std::sqrt(std::max(f.cov(1, 1), 0.0));
    best_x = std::max(best_x, bx);
    best_y = std::max(best_y, by);
  }
  return std::hypot(best_x, best_y);
}

double worst_case_speed(std::span<const Track> tracks, double alpha_conf, const EllipseParams<double>& params) {
  std::vector<VelocityMarginal> marginals;
  marginals.reserve(tracks.size());
  for (const auto& t : tracks) marginals.push_back(velocity_marginal(t, params));
  return worst_case_speed(marginals, alpha_conf);
}

double fov_width(const FleetParams& fleet) { return 2.0 * fleet.pz * std::tan(fleet.half_angle); }

BoundResult t_ub_case1(const BoundInputs& in, const FleetParams& fleet) {
  BoundResult r;
  r.case_tag = CaseTag::C1;
  r.t_ub = 2.0 * in.mst_cost / fleet.v;
  r.feasible = true;
  return r;
}

BoundResult t_ub_case2(const BoundInputs& in, const FleetParams& fleet) {
  const double denom = fleet.v / 2.0 - 2.0 * in.zeta_alpha * (in.n_fires - 1);
  if (!(denom > 0.0)) return infeasible(CaseTag::C2);
  BoundResult r;
  r.case_tag = CaseTag::C2;
  r.t_ub = in.mst_cost / denom;
  r.feasible = std::isfinite(r.t_ub);
  return r;
}

BoundResult t_ub_case3(const BoundInputs& in, const FleetParams& fleet) {
  const BoundResult c2 = t_ub_case2(in, fleet);
  if (!c2.feasible || !(in.fov_width > 0.0)) return infeasible(CaseTag::C3);
  const double a = 2.0 * in.n_fires * in.zeta_alpha / fleet.v;
  const double b = 2.0 * in.zeta_alpha / in.fov_width;
  const double delta = c2.t_ub;
  BoundResult r;
  r.case_tag = CaseTag::C3;
  r.gamma = a * b;
  r.beta = 1.0 - a;
  r.delta = delta;
  if (a >= 1.0) {
    r.t_ub = kInf;
    r.feasible = false;
    return r;
  }
  const double disc = r.beta * r.beta - 4.0 * r.gamma * delta;
  if (disc < 0.0) {
    r.t_ub = kInf;
    r.feasible = false;
    return r;
  }
  // Smaller root of gamma T^2 - beta T + delta = 0 in the cancellation-free
  // form 2 delta / (beta + sqrt(disc)); reduces to delta / (1 - a) as gamma -> 0.
  r.t_ub = 2.0 * delta / (r.beta + std::sqrt(disc));
  r.feasible = true;
  return r;
}

BoundResult t_ub_for_case(CaseTag tag, const BoundInputs& in, const FleetParams& fleet) {
  switch (tag) {
    case CaseTag::C1:
      return t_ub_case1(in, fleet);
    case CaseTag::C2:
      return t_ub_case2(in, fleet);
    case CaseTag::C3:
      return t_ub_case3(in, fleet);
  }
  return infeasible(tag);
}

double case3_fixed_point_residual(double T, const BoundInputs& in, const FleetParams& fleet) {
  const double a = 2.0 * in.n_fires * in.zeta_alpha / fleet.v;
  const double b = 2.0 * in.zeta_alpha / in.fov_width;
  const double delta = t_ub_case2(in, fleet).t_ub;
  return T - delta - a * T * (b * T + 1.0);
}

BoundConfidence bound_confidence(int n_fires, double alpha_conf) {
  BoundConfidence c;
  c.joint = std::pow(1.0 - alpha_conf, n_fires);
  c.complement = 1.0 - c.joint;
  return c;
}

int horizon_steps(double t_ub, double dt) {
  const double steps = std::ceil(t_ub / dt);
  if (steps >= static_cast<double>(std::numeric_limits<int>::max())) return std::numeric_limits<int>::max();
  return std::max(1, static_cast<int>(steps));
}

double residual_ratio(const Eigen::MatrixXd& forecast, const Eigen::MatrixXd& current, UrrMode mode) {
  if (mode == UrrMode::Trace) return forecast.trace() / current.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> a(forecast, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> b(current, Eigen::EigenvaluesOnly);
  return a.eigenvalues().maxCoeff() / b.eigenvalues().maxCoeff();
}

double urr(const Track& track, double t_ub, double dt, UrrMode mode) {
  if (!std::isfinite(t_ub)) return kInf;
  const int r = horizon_steps(t_ub, dt);
  const auto forecast = multi_step_predict(track, r).S;
  const auto current = multi_step_predict(track, 1).S;
  return residual_ratio(forecast, current, mode);
}

}  // namespace firetrack
