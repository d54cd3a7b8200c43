#pragma once

// Adaptive extended Kalman filter over the joint fire/UAV state
//   s = [qx, qy, px, py, pz, R, U, theta]
// with the look-angle observation model
//   z = [atan((qx - px) / pz), atan((qy - py) / pz), R, U, theta].
//
// The UAV pose is an exogenous input: the transition sets p to the commanded
// pose u, so the pose rows of F are zero and pose uncertainty enters through
// the pose block of Q. Weather is held constant across a step.

#include "firetrack/common.hpp"
#include "firetrack/fire_dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace firetrack {

namespace idx {
inline constexpr int qx = 0, qy = 1, px = 2, py = 3, pz = 4, R = 5, U = 6, theta = 7;
inline constexpr int phi_x = 0, phi_y = 1, R_hat = 2, U_hat = 3, theta_hat = 4;
}  // namespace idx

inline constexpr int kStateDim = 8;
inline constexpr int kObsDim = 5;

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, kStateDim, 1>;
template <typename Scalar>
using ObservationVector = Eigen::Matrix<Scalar, kObsDim, 1>;
template <typename Scalar>
using StateMatrix = Eigen::Matrix<Scalar, kStateDim, kStateDim>;
template <typename Scalar>
using ObservationMatrix = Eigen::Matrix<Scalar, kObsDim, kObsDim>;
template <typename Scalar>
using ObservationJacobian = Eigen::Matrix<Scalar, kObsDim, kStateDim>;
template <typename Scalar>
using GainMatrix = Eigen::Matrix<Scalar, kStateDim, kObsDim>;

inline constexpr double kSingularConditionNumber = 1e12;
inline constexpr double kPsdTolerance = 1e-9;

enum class NoiseResidual { PostFit, Innovation };

template <typename Scalar>
struct FilterConfig {
  Scalar alpha_forget = Scalar(0.95);
  Scalar dt = Scalar(1);
  StateMatrix<Scalar> P0 = StateMatrix<Scalar>::Identity();
  StateMatrix<Scalar> Q0 = StateMatrix<Scalar>::Identity() * Scalar(1e-3);
  ObservationMatrix<Scalar> R0 = ObservationMatrix<Scalar>::Identity() * Scalar(1e-4);
  NoiseResidual residual = NoiseResidual::PostFit;
  EllipseParams<Scalar> ellipse{};
};

/// Per-fire filter state. F, H, P_prior and prior_mean are the frozen
/// linearization of the most recent predict, used by the multi-step forecasts.
template <typename Scalar>
struct TrackEstimate {
  int id = 0;
  StateVector<Scalar> mean = StateVector<Scalar>::Zero();
  StateMatrix<Scalar> P = StateMatrix<Scalar>::Identity();
  StateMatrix<Scalar> Q = StateMatrix<Scalar>::Zero();
  ObservationMatrix<Scalar> R_obs = ObservationMatrix<Scalar>::Identity();
  ObservationMatrix<Scalar> S_last = ObservationMatrix<Scalar>::Identity();
  StateVector<Scalar> prior_mean = StateVector<Scalar>::Zero();
  StateMatrix<Scalar> P_prior = StateMatrix<Scalar>::Identity();
  StateMatrix<Scalar> F = StateMatrix<Scalar>::Identity();
  ObservationJacobian<Scalar> H = ObservationJacobian<Scalar>::Zero();
  int last_update = -1;

  Vec2<Scalar> position() const { return mean.template head<2>(); }
  Vec3<Scalar> uav_pose() const { return mean.template segment<3>(idx::px); }
};

using Track = TrackEstimate<double>;

/// Symmetrizes and floors negative eigenvalues at zero.
template <typename Derived>
typename Derived::PlainObject make_psd(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  Plain sym = (m + m.transpose()) * Scalar(0.5);
  Eigen::SelfAdjointEigenSolver<Plain> eig(sym);
  if (eig.eigenvalues().minCoeff() >= Scalar(0)) return sym;
  auto values = eig.eigenvalues().cwiseMax(Scalar(0));
  Plain out = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  return (out + out.transpose()) * Scalar(0.5);
}

/// P <- F P F^T + Q, symmetrized.
template <typename DF, typename DP, typename DQ>
typename DP::PlainObject predict_covariance(const Eigen::MatrixBase<DF>& F, const Eigen::MatrixBase<DP>& P,
                                            const Eigen::MatrixBase<DQ>& Q) {
  return make_psd(F * P * F.transpose() + Q);
}

/// Matrix power by repeated squaring.
template <typename Derived>
typename Derived::PlainObject matrix_power(const Eigen::MatrixBase<Derived>& M, int exponent) {
  using Plain = typename Derived::PlainObject;
  Plain result = Plain::Identity(M.rows(), M.cols());
  Plain base = M;
  for (int e = exponent; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    base = base * base;
  }
  return result;
}

/// S_{t+r|t} = H F^{r-1} P (H F^{r-1})^T + R for a frozen linearization.
template <typename DF, typename DH, typename DP, typename DR>
typename DR::PlainObject multi_step_residual(const Eigen::MatrixBase<DF>& F, const Eigen::MatrixBase<DH>& H,
                                             const Eigen::MatrixBase<DP>& P, const Eigen::MatrixBase<DR>& R,
                                             int r) {
  if (r < 1) throw std::invalid_argument("multi_step_residual: r must be >= 1");
  const auto HF = (H * matrix_power(F, r - 1)).eval();
  return make_psd(HF * P * HF.transpose() + R);
}

/// f(s, u): advances the fire by front_velocity * dt and sets the UAV pose to u.
template <typename Scalar>
StateVector<Scalar> state_transition(const StateVector<Scalar>& s, const Vec3<Scalar>& uav_pose, Scalar dt,
                                     const EllipseParams<Scalar>& params) {
  StateVector<Scalar> out = s;
  const Vec2<Scalar> v = front_velocity(s[idx::R], s[idx::U], s[idx::theta], params);
  out.template head<2>() += v * dt;
  out.template segment<3>(idx::px) = uav_pose;
  return out;
}

template <typename Scalar>
StateVector<Scalar> state_transition(const StateVector<Scalar>& s, Scalar dt, const EllipseParams<Scalar>& params) {
  return state_transition<Scalar>(s, s.template segment<3>(idx::px), dt, params);
}

/// Analytic df/ds. Pose rows are zero since the pose is set by the input.
template <typename Scalar>
StateMatrix<Scalar> transition_jacobian(const StateVector<Scalar>& s, Scalar dt,
                                        const EllipseParams<Scalar>& params) {
  using std::cos;
  using std::sin;
  const Scalar R = s[idx::R], U = s[idx::U], theta = s[idx::theta];
  const Scalar factor = spread_factor(U, params);
  const Scalar C = R * factor;
  const Scalar dC_dU = spread_coefficient_du(R, U, params);
  const Scalar sn = sin(theta), cs = cos(theta);

  StateMatrix<Scalar> F = StateMatrix<Scalar>::Zero();
  F(idx::qx, idx::qx) = Scalar(1);
  F(idx::qy, idx::qy) = Scalar(1);
  F(idx::qx, idx::R) = factor * sn * dt;
  F(idx::qy, idx::R) = factor * cs * dt;
  F(idx::qx, idx::U) = dC_dU * sn * dt;
  F(idx::qy, idx::U) = dC_dU * cs * dt;
  F(idx::qx, idx::theta) = C * cs * dt;
  F(idx::qy, idx::theta) = -C * sn * dt;
  F(idx::R, idx::R) = Scalar(1);
  F(idx::U, idx::U) = Scalar(1);
  F(idx::theta, idx::theta) = Scalar(1);
  return F;
}

template <typename Scalar>
ObservationVector<Scalar> observe(const StateVector<Scalar>& s) {
  using std::atan;
  const Scalar pz = s[idx::pz];
  if (!(pz > Scalar(0))) throw DomainError("observe: UAV altitude must be positive");
  ObservationVector<Scalar> z;
  z[idx::phi_x] = atan((s[idx::qx] - s[idx::px]) / pz);
  z[idx::phi_y] = atan((s[idx::qy] - s[idx::py]) / pz);
  z[idx::R_hat] = s[idx::R];
  z[idx::U_hat] = s[idx::U];
  z[idx::theta_hat] = s[idx::theta];
  return z;
}

/// Recovers the planar fire position seen at look angles phi from pose p.
template <typename Scalar>
Vec2<Scalar> invert_look_angles(Scalar phi_x, Scalar phi_y, const Vec3<Scalar>& pose) {
  using std::tan;
  return Vec2<Scalar>(pose.x() + pose.z() * tan(phi_x), pose.y() + pose.z() * tan(phi_y));
}

template <typename Scalar>
ObservationJacobian<Scalar> observation_jacobian(const StateVector<Scalar>& s) {
  const Scalar pz = s[idx::pz];
  if (!(pz > Scalar(0))) throw DomainError("observation_jacobian: UAV altitude must be positive");
  ObservationJacobian<Scalar> H = ObservationJacobian<Scalar>::Zero();
  const Scalar dx = s[idx::qx] - s[idx::px];
  const Scalar dy = s[idx::qy] - s[idx::py];
  const Scalar ux = dx / pz, uy = dy / pz;
  const Scalar gx = Scalar(1) / (Scalar(1) + ux * ux);
  const Scalar gy = Scalar(1) / (Scalar(1) + uy * uy);
  H(idx::phi_x, idx::qx) = gx / pz;
  H(idx::phi_x, idx::px) = -gx / pz;
  H(idx::phi_x, idx::pz) = -gx * dx / (pz * pz);
  H(idx::phi_y, idx::qy) = gy / pz;
  H(idx::phi_y, idx::py) = -gy / pz;
  H(idx::phi_y, idx::pz) = -gy * dy / (pz * pz);
  H(idx::R_hat, idx::R) = Scalar(1);
  H(idx::U_hat, idx::U) = Scalar(1);
  H(idx::theta_hat, idx::theta) = Scalar(1);
  return H;
}

/// Innovation z - h(s) with the azimuth component wrapped to (-pi, pi].
template <typename Scalar>
ObservationVector<Scalar> observation_residual(const ObservationVector<Scalar>& z, const StateVector<Scalar>& s) {
  ObservationVector<Scalar> y = z - observe(s);
  y[idx::theta_hat] = wrap_pi(y[idx::theta_hat]);
  return y;
}

template <typename Scalar>
TrackEstimate<Scalar> make_track(int id, const StateVector<Scalar>& mean, const FilterConfig<Scalar>& cfg,
                                 int step) {
  TrackEstimate<Scalar> t;
  t.id = id;
  t.mean = mean;
  t.P = cfg.P0;
  t.Q = cfg.Q0;
  t.R_obs = cfg.R0;
  t.prior_mean = mean;
  t.P_prior = cfg.P0;
  t.F = StateMatrix<Scalar>::Identity();
  t.H = observation_jacobian(mean);
  t.S_last = make_psd(t.H * t.P_prior * t.H.transpose() + t.R_obs);
  t.last_update = step;
  return t;
}

/// Prediction with the pose input u: mean <- f(mean, u), P <- F P F^T + Q.
/// Also freezes F, H, the prior and S_{t|t-1} = H P H^T + R_obs.
template <typename Scalar>
TrackEstimate<Scalar> predict(const TrackEstimate<Scalar>& track, const Vec3<Scalar>& uav_pose, Scalar dt,
                              const EllipseParams<Scalar>& params) {
  TrackEstimate<Scalar> out = track;
  const StateMatrix<Scalar> F = transition_jacobian(track.mean, dt, params);
  out.mean = state_transition(track.mean, uav_pose, dt, params);
  out.mean[idx::theta] = wrap_two_pi(out.mean[idx::theta]);
  out.P = predict_covariance(F, track.P, track.Q);
  out.F = F;
  out.prior_mean = out.mean;
  out.P_prior = out.P;
  out.H = observation_jacobian(out.mean);
  out.S_last = make_psd(out.H * out.P * out.H.transpose() + out.R_obs);
  return out;
}

template <typename Scalar>
TrackEstimate<Scalar> predict(const TrackEstimate<Scalar>& track, Scalar dt, const EllipseParams<Scalar>& params) {
  return predict<Scalar>(track, track.uav_pose(), dt, params);
}

template <typename Scalar>
struct UpdateResult {
  TrackEstimate<Scalar> track;
  ObservationVector<Scalar> innovation;  // z - h(prior mean)
  ObservationVector<Scalar> post_fit;    // z - h(posterior mean)
  GainMatrix<Scalar> K;
  ObservationJacobian<Scalar> H;
  StateMatrix<Scalar> P_prior;
  ObservationMatrix<Scalar> S;
};

/// Kalman update against z. The residual covariance S is solved through a
/// symmetric LDLT factorization; SingularResidual if cond(S) > 1e12.
template <typename Scalar>
UpdateResult<Scalar> update(const TrackEstimate<Scalar>& track, const ObservationVector<Scalar>& z) {
  using std::abs;
  UpdateResult<Scalar> res;
  const StateVector<Scalar>& prior = track.mean;
  const StateMatrix<Scalar>& P = track.P;
  const ObservationJacobian<Scalar> H = observation_jacobian(prior);
  const ObservationMatrix<Scalar> S = make_psd(H * P * H.transpose() + track.R_obs);

  Eigen::SelfAdjointEigenSolver<ObservationMatrix<Scalar>> eig(S, Eigen::EigenvaluesOnly);
  const Scalar lo = eig.eigenvalues().minCoeff();
  const Scalar hi = eig.eigenvalues().maxCoeff();
  if (!(lo > Scalar(0)) || hi / lo > Scalar(kSingularConditionNumber)) {
    throw SingularResidual("residual covariance is singular or ill-conditioned");
  }

  const ObservationVector<Scalar> y = observation_residual(z, prior);
  // K = P H^T S^{-1}  <=>  S K^T = H P
  const GainMatrix<Scalar> K = S.ldlt().solve(H * P).transpose();

  TrackEstimate<Scalar> out = track;
  out.mean = prior + K * y;
  out.mean[idx::theta] = wrap_two_pi(out.mean[idx::theta]);
  out.P = make_psd((StateMatrix<Scalar>::Identity() - K * H) * P);
  out.S_last = S;
  out.H = H;

  res.track = out;
  res.innovation = y;
  res.post_fit = observation_residual(z, out.mean);
  res.K = K;
  res.H = H;
  res.P_prior = P;
  res.S = S;
  return res;
}

/// Forgetting-factor updates of the process and observation noise:
///   Q <- a Q + (1 - a) K d d^T K^T
///   R <- a R + (1 - a) (y y^T + H P_prior H^T)
template <typename Scalar>
TrackEstimate<Scalar> adapt_noise(const TrackEstimate<Scalar>& track, const ObservationVector<Scalar>& innovation,
                                  const ObservationVector<Scalar>& residual, const GainMatrix<Scalar>& K,
                                  const ObservationJacobian<Scalar>& H, const StateMatrix<Scalar>& P_prior,
                                  Scalar alpha_forget) {
  TrackEstimate<Scalar> out = track;
  const StateVector<Scalar> kd = K * residual;
  out.Q = make_psd(alpha_forget * track.Q + (Scalar(1) - alpha_forget) * (kd * kd.transpose()));
  out.R_obs = make_psd(alpha_forget * track.R_obs +
                       (Scalar(1) - alpha_forget) *
                           (innovation * innovation.transpose() + H * P_prior * H.transpose()));
  return out;
}

/// update followed by adapt_noise, using the residual selected in cfg.
template <typename Scalar>
UpdateResult<Scalar> update_and_adapt(const TrackEstimate<Scalar>& track, const ObservationVector<Scalar>& z,
                                      const FilterConfig<Scalar>& cfg) {
  UpdateResult<Scalar> res = update(track, z);
  const ObservationVector<Scalar>& d = cfg.residual == NoiseResidual::PostFit ? res.post_fit : res.innovation;
  res.track = adapt_noise(res.track, res.innovation, d, res.K, res.H, res.P_prior, cfg.alpha_forget);
  return res;
}

template <typename Scalar>
struct MultiStepPrediction {
  StateVector<Scalar> state;
  ObservationMatrix<Scalar> S;
};

/// r-step forecast from the frozen linearization at the last predict:
///   s_{t+r|t} = F^{r-1} s_{t|t-1}
///   S_{t+r|t} = H F^{r-1} P_{t|t-1} (H F^{r-1})^T + R_obs
template <typename Scalar>
MultiStepPrediction<Scalar> multi_step_predict(const TrackEstimate<Scalar>& track, int r) {
  if (r < 1) throw std::invalid_argument("multi_step_predict: r must be >= 1");
  MultiStepPrediction<Scalar> out;
  out.state = matrix_power(track.F, r - 1) * track.prior_mean;
  out.S = multi_step_residual(track.F, track.H, track.P_prior, track.R_obs, r);
  return out;
}

}  // namespace firetrack
