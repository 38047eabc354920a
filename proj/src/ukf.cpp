#include "wavenav/ukf.hpp"

#include <algorithm>
#include <cmath>

#include "wavenav/errors.hpp"

namespace wavenav {

namespace {

bool is_angle_index(std::span<const int> angle_idx, int i) {
  return std::find(angle_idx.begin(), angle_idx.end(), i) != angle_idx.end();
}

double ut_lambda(int n, const SigmaParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
    throw std::invalid_argument("sigma alpha must be in (0, 1]");
  }
  const double lambda = p.alpha * p.alpha * (n + p.kappa) - n;
  if (!(n + lambda > 0.0)) {
    throw std::invalid_argument("sigma params give non-positive n + lambda");
  }
  return lambda;
}

Eigen::MatrixXd matrix_sqrt_cholesky(const Eigen::MatrixXd& cov) {
  if (cov.isZero(0.0)) {
    return Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  for (double jitter = 1e-12; jitter <= 1e-6; jitter *= 10.0) {
    Eigen::MatrixXd jittered = cov;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericalError("covariance degenerate: Cholesky failed after jitter escalation");
}

}  // namespace

StateVec RobotState::pack() const {
  StateVec v;
  v << pose.x, pose.y, pose.z, pose.roll, pose.pitch, pose.yaw,
      twist.u, twist.v, twist.w, twist.p, twist.q, twist.r,
      bias_dr, bias_imu;
  return v;
}

RobotState RobotState::unpack(const StateVec& v) {
  RobotState s;
  s.pose = Pose{v[0], v[1], v[2], wrap_angle(v[3]), wrap_angle(v[4]), wrap_angle(v[5])};
  s.twist = Twist{v[6], v[7], v[8], v[9], v[10], v[11]};
  s.bias_dr = v.segment<3>(12);
  s.bias_imu = v.segment<3>(15);
  return s;
}

void ut_weights(int n, const SigmaParams& params, Eigen::VectorXd* mean_w,
                Eigen::VectorXd* cov_w) {
  const double lambda = ut_lambda(n, params);
  const int m = 2 * n + 1;
  mean_w->resize(m);
  cov_w->resize(m);
  (*mean_w)[0] = lambda / (n + lambda);
  (*cov_w)[0] = (*mean_w)[0] + (1.0 - params.alpha * params.alpha + params.beta);
  const double wi = 1.0 / (2.0 * (n + lambda));
  for (int i = 1; i < m; ++i) {
    (*mean_w)[i] = wi;
    (*cov_w)[i] = wi;
  }
}

Eigen::MatrixXd ut_points(const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov,
                          const SigmaParams& params) {
  const int n = static_cast<int>(mean.size());
  const double lambda = ut_lambda(n, params);
  const Eigen::MatrixXd root = matrix_sqrt_cholesky(cov);
  const double scale = std::sqrt(n + lambda);
  Eigen::MatrixXd points(n, 2 * n + 1);
  points.col(0) = mean;
  for (int k = 0; k < n; ++k) {
    points.col(1 + k) = mean + scale * root.col(k);
    points.col(1 + n + k) = mean - scale * root.col(k);
  }
  return points;
}

SigmaPoints generate_sigma_points(const StateBelief& belief,
                                  const SigmaParams& params) {
  SigmaPoints sp;
  Eigen::VectorXd mw, cw;
  ut_weights(kStateDim, params, &mw, &cw);
  sp.mean_weights = mw;
  sp.cov_weights = cw;
  sp.points = ut_points(belief.mean(), belief.cov, params);
  for (int c = 0; c < kNumSigmaPoints; ++c) {
    for (int a : kAngleIdx) sp.points(a, c) = wrap_angle(sp.points(a, c));
  }
  return sp;
}

Eigen::VectorXd weighted_state_mean(const Eigen::MatrixXd& points,
                                    const Eigen::VectorXd& weights,
                                    std::span<const int> angle_idx) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(points.rows());
  for (int r = 0; r < points.rows(); ++r) {
    if (is_angle_index(angle_idx, r)) {
      double s = 0.0, c = 0.0;
      for (int i = 0; i < points.cols(); ++i) {
        s += weights[i] * std::sin(points(r, i));
        c += weights[i] * std::cos(points(r, i));
      }
      mean[r] = std::atan2(s, c);
    } else {
      mean[r] = points.row(r) * weights;
    }
  }
  return mean;
}

Eigen::MatrixXd weighted_state_cov(const Eigen::MatrixXd& points,
                                   const Eigen::VectorXd& mean,
                                   const Eigen::VectorXd& weights,
                                   std::span<const int> angle_idx) {
  const auto n = points.rows();
  Eigen::MatrixXd residuals(n, points.cols());
  for (int i = 0; i < points.cols(); ++i) {
    for (int r = 0; r < n; ++r) {
      const double d = points(r, i) - mean[r];
      residuals(r, i) = is_angle_index(angle_idx, r) ? wrap_angle(d) : d;
    }
  }
  return residuals * weights.asDiagonal() * residuals.transpose();
}

StateBelief predict(const StateBelief& belief, double dt,
                    const ProcessNoise& noise, const SigmaParams& params) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("predict requires dt > 0");
  }
  SigmaPoints sp = generate_sigma_points(belief, params);

  // Constant-velocity forward Euler on each sigma point; the zero-mean
  // acceleration noise enters only through the additive Q below.
  for (int i = 0; i < kNumSigmaPoints; ++i) {
    StateVec x = sp.points.col(i);
    const Eigen::Matrix3d r = euler_to_rotation(x[3], x[4], x[5]);
    x.segment<3>(0) += r * x.segment<3>(6) * dt;
    for (int a : kAngleIdx) x[a] = wrap_angle(x[a] + x[a + 6] * dt);
    x.segment<3>(12) += noise.bias_dr_mean * dt;
    x.segment<3>(15) += noise.bias_imu_mean * dt;
    sp.points.col(i) = x;
  }

  const Eigen::VectorXd mean =
      weighted_state_mean(sp.points, sp.mean_weights, kAngleIdx);
  Eigen::MatrixXd cov =
      weighted_state_cov(sp.points, mean, sp.cov_weights, kAngleIdx);

  // Discretized process noise: the white acceleration noise maps into pose
  // through R*dt^2/2 and into twist through dt; the bias walks map directly
  // through dt.
  const Eigen::Matrix3d r_mean = rotation(belief.state.pose);
  Eigen::Matrix<double, kStateDim, 12> g = Eigen::Matrix<double, kStateDim, 12>::Zero();
  g.block<3, 3>(0, 0) = r_mean * (dt * dt / 2.0);
  g.block<3, 3>(3, 3) = Eigen::Matrix3d::Identity() * (dt * dt / 2.0);
  g.block<3, 3>(6, 0) = Eigen::Matrix3d::Identity() * dt;
  g.block<3, 3>(9, 3) = Eigen::Matrix3d::Identity() * dt;
  g.block<3, 3>(12, 6) = Eigen::Matrix3d::Identity() * dt;
  g.block<3, 3>(15, 9) = Eigen::Matrix3d::Identity() * dt;
  Eigen::Matrix<double, 12, 12> w = Eigen::Matrix<double, 12, 12>::Zero();
  w.block<6, 6>(0, 0) = noise.accel_cov;
  w.block<3, 3>(6, 6) = noise.bias_dr_walk;
  w.block<3, 3>(9, 9) = noise.bias_imu_walk;
  cov += g * w * g.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();

  StateBelief out;
  out.state = RobotState::unpack(mean);
  out.cov = cov;
  out.timestamp = belief.timestamp + dt;
  return out;
}

namespace {

// UT measurement update for a linear measurement z = H x (+ noise). When
// angular_measurement is set the predicted measurement uses circular means
// and innovations are wrapped per component.
StateBelief ut_linear_update(const StateBelief& belief,
                             const Eigen::VectorXd& z, const Eigen::MatrixXd& h,
                             const Eigen::MatrixXd& r_eff,
                             bool angular_measurement,
                             const SigmaParams& params, bool* accepted) {
  if (accepted) *accepted = false;
  if (!z.allFinite()) return belief;

  const auto m = z.size();
  static constexpr int kMeasAngleIdx[3] = {0, 1, 2};
  std::span<const int> z_angles =
      angular_measurement ? std::span<const int>(kMeasAngleIdx, static_cast<size_t>(m))
                          : std::span<const int>();

  const SigmaPoints sp = generate_sigma_points(belief, params);
  Eigen::MatrixXd z_points = h * sp.points;
  if (angular_measurement) {
    for (int i = 0; i < z_points.cols(); ++i) {
      for (int r = 0; r < m; ++r) z_points(r, i) = wrap_angle(z_points(r, i));
    }
  }

  const Eigen::VectorXd z_pred =
      weighted_state_mean(z_points, sp.mean_weights, z_angles);
  Eigen::MatrixXd s =
      weighted_state_cov(z_points, z_pred, sp.cov_weights, z_angles) + r_eff;

  // Cross covariance between state and measurement residuals.
  const StateVec x_mean = belief.mean();
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(kStateDim, m);
  for (int i = 0; i < kNumSigmaPoints; ++i) {
    StateVec dx = sp.points.col(i) - x_mean;
    for (int a : kAngleIdx) dx[a] = wrap_angle(dx[a]);
    Eigen::VectorXd dz = z_points.col(i) - z_pred;
    if (angular_measurement) {
      for (int r = 0; r < m; ++r) dz[r] = wrap_angle(dz[r]);
    }
    cross += sp.cov_weights[i] * dx * dz.transpose();
  }

  const Eigen::MatrixXd gain = s.ldlt().solve(cross.transpose()).transpose();
  Eigen::VectorXd innovation = z - z_pred;
  if (angular_measurement) {
    for (int r = 0; r < m; ++r) innovation[r] = wrap_angle(innovation[r]);
  }

  StateVec mean = x_mean + gain * innovation;
  StateMat cov = belief.cov - gain * s * gain.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();

  StateBelief out;
  out.state = RobotState::unpack(mean);
  out.cov = cov;
  out.timestamp = belief.timestamp;
  if (accepted) *accepted = true;
  return out;
}

}  // namespace

StateBelief update_barometer(const StateBelief& belief, double z_depth,
                             double r_var, const SigmaParams& params,
                             bool* accepted) {
  if (!(r_var > 0.0)) throw std::invalid_argument("barometer variance must be > 0");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(1, kStateDim);
  h(0, 2) = 1.0;
  Eigen::VectorXd z(1);
  z << z_depth;
  Eigen::MatrixXd r(1, 1);
  r << r_var;
  return ut_linear_update(belief, z, h, r, false, params, accepted);
}

StateBelief update_dvl(const StateBelief& belief, const Eigen::Vector3d& z_vel,
                       const Eigen::Matrix3d& r_cov,
                       const DisturbanceProfile& profile,
                       const SigmaParams& params, bool* accepted) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, kStateDim);
  h.block<3, 3>(0, 6).setIdentity();
  const Eigen::MatrixXd r_eff =
      inflate_measurement_cov(r_cov, profile, SensorTag::kDvlVelocity);
  return ut_linear_update(belief, z_vel, h, r_eff, false, params, accepted);
}

StateBelief update_imu_gyro(const StateBelief& belief,
                            const Eigen::Vector3d& z_gyro,
                            const Eigen::Matrix3d& r_cov,
                            const SigmaParams& params, bool* accepted,
                            bool couple_bias) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, kStateDim);
  h.block<3, 3>(0, 9).setIdentity();
  if (couple_bias) h.block<3, 3>(0, 15).setIdentity();
  return ut_linear_update(belief, z_gyro, h, r_cov, false, params, accepted);
}

StateBelief update_dr_orientation(const StateBelief& belief,
                                  const Eigen::Vector3d& z_euler,
                                  const Eigen::Matrix3d& r_cov,
                                  const DisturbanceProfile& profile,
                                  const SigmaParams& params, bool* accepted,
                                  bool couple_bias) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, kStateDim);
  h.block<3, 3>(0, 3).setIdentity();
  if (couple_bias) h.block<3, 3>(0, 12).setIdentity();
  const Eigen::MatrixXd r_eff =
      inflate_measurement_cov(r_cov, profile, SensorTag::kDrOrientation);
  return ut_linear_update(belief, z_euler, h, r_eff, true, params, accepted);
}

std::vector<StateBelief> run_filter(std::span<const SensorSample> samples,
                                    const StateBelief& init,
                                    const ProcessNoise& noise,
                                    const MeasurementNoise& meas,
                                    const DisturbanceSchedule& schedule,
                                    const FilterOptions& options,
                                    FilterDiagnostics* diag) {
  FilterDiagnostics local;
  FilterDiagnostics& d = diag ? *diag : local;

  std::vector<StateBelief> trajectory;
  trajectory.reserve(samples.size() + 1);
  trajectory.push_back(init);

  StateBelief belief = init;
  for (const SensorSample& sample : samples) {
    if (sample.timestamp < belief.timestamp) {
      throw std::invalid_argument("sensor samples must be sorted by timestamp");
    }
    double gap = sample.timestamp - belief.timestamp;
    if (gap > 0.0) {
      int steps = 1;
      if (gap > options.max_dt) {
        ++d.large_gaps;
        steps = static_cast<int>(std::ceil(gap / options.max_dt));
      }
      const double dt = gap / steps;
      for (int k = 0; k < steps; ++k) {
        belief = predict(belief, dt, noise, options.sigma);
      }
      belief.timestamp = sample.timestamp;
    }

    if (!sample.finite()) {
      ++d.rejected_samples;
      trajectory.push_back(belief);
      continue;
    }

    const DisturbanceProfile profile =
        options.added_noise ? schedule.at(sample.timestamp)
                            : DisturbanceProfile::zero();
    bool accepted = true;
    switch (sample.tag) {
      case SensorTag::kBarometer:
        belief = update_barometer(belief, sample.value[0], meas.barometer_var,
                                  options.sigma, &accepted);
        break;
      case SensorTag::kDvlVelocity:
        belief = update_dvl(belief, sample.value, meas.dvl_cov, profile,
                            options.sigma, &accepted);
        break;
      case SensorTag::kImuGyro:
        belief = update_imu_gyro(belief, sample.value, meas.imu_cov,
                                 options.sigma, &accepted,
                                 options.bias_estimation);
        break;
      case SensorTag::kDrOrientation:
        belief = update_dr_orientation(belief, sample.value, meas.dr_cov,
                                       profile, options.sigma, &accepted,
                                       options.bias_estimation);
        break;
      case SensorTag::kRangeBeam:
        ++d.range_samples;  // prediction only; ranges feed the mapper
        break;
    }
    if (!accepted) ++d.rejected_samples;
    trajectory.push_back(belief);
  }
  return trajectory;
}

}  // namespace wavenav
