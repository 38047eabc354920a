#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wavenav/disturbance.hpp"
#include "wavenav/geometry.hpp"
#include "wavenav/sensors.hpp"

namespace wavenav {

inline constexpr int kStateDim = 18;
inline constexpr int kNumSigmaPoints = 2 * kStateDim + 1;

using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using StateMat = Eigen::Matrix<double, kStateDim, kStateDim>;

/// Indices of the angular components (roll, pitch, yaw) in the packed state.
inline constexpr int kAngleIdx[3] = {3, 4, 5};

/// Augmented vehicle state: world pose, body twist, and one gyro-bias block
/// per orientation-rate sensor (DR output and onboard IMU).
struct RobotState {
  Pose pose;
  Twist twist;
  Eigen::Vector3d bias_dr = Eigen::Vector3d::Zero();   // rad/s
  Eigen::Vector3d bias_imu = Eigen::Vector3d::Zero();  // rad/s

  StateVec pack() const;
  static RobotState unpack(const StateVec& v);
};

/// Filter posterior: state estimate, 18x18 covariance, and the time it
/// refers to.
struct StateBelief {
  RobotState state;
  StateMat cov = StateMat::Zero();
  double timestamp = 0.0;

  StateVec mean() const { return state.pack(); }
};

/// Process noise for the constant-velocity motion model: white acceleration
/// noise on the twist block plus a random walk per bias block.
struct ProcessNoise {
  Eigen::Matrix<double, 6, 6> accel_cov = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix3d bias_dr_walk = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d bias_imu_walk = Eigen::Matrix3d::Zero();
  Eigen::Vector3d bias_dr_mean = Eigen::Vector3d::Zero();   // rad/s
  Eigen::Vector3d bias_imu_mean = Eigen::Vector3d::Zero();  // rad/s
};

/// Scaled unscented transform spread parameters.
struct SigmaParams {
  double alpha = 0.1;
  double beta = 2.0;
  double kappa = 0.0;
};

/// Sigma-point set with its mean/covariance weights.
struct SigmaPoints {
  Eigen::Matrix<double, kStateDim, kNumSigmaPoints> points;
  Eigen::Matrix<double, kNumSigmaPoints, 1> mean_weights;
  Eigen::Matrix<double, kNumSigmaPoints, 1> cov_weights;
};

/// Base (calm-water) measurement covariances per sensor.
struct MeasurementNoise {
  double barometer_var = 1e-4;                        // m^2
  Eigen::Matrix3d dvl_cov = Eigen::Matrix3d::Zero();  // (m/s)^2
  Eigen::Matrix3d imu_cov = Eigen::Matrix3d::Zero();  // (rad/s)^2
  Eigen::Matrix3d dr_cov = Eigen::Matrix3d::Zero();   // rad^2
};

/// Estimator variant switches (the two ablation axes) plus UT parameters.
struct FilterOptions {
  bool bias_estimation = true;
  bool added_noise = true;
  SigmaParams sigma;
  double max_dt = 1.0;  // s; larger gaps are split and flagged
};

struct FilterDiagnostics {
  std::uint64_t rejected_samples = 0;  // non-finite payloads, belief unchanged
  std::uint64_t large_gaps = 0;        // prediction gaps above max_dt
  std::uint64_t range_samples = 0;     // range beams: prediction only
};

/// Generic scaled-UT machinery on plain vectors (no angle semantics).
/// Square roots go through Cholesky with jitter escalation 1e-12..1e-6;
/// exhaustion raises NumericalError.
Eigen::MatrixXd ut_points(const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& cov,
                          const SigmaParams& params);
void ut_weights(int n, const SigmaParams& params, Eigen::VectorXd* mean_w,
                Eigen::VectorXd* cov_w);

/// Sigma points for a robot belief. Angle components of every point are
/// wrapped; reconstruction uses component-wise circular means.
SigmaPoints generate_sigma_points(const StateBelief& belief,
                                  const SigmaParams& params);

/// Weighted moments over sigma points with circular handling of the angle
/// components listed in angle_idx.
Eigen::VectorXd weighted_state_mean(const Eigen::MatrixXd& points,
                                    const Eigen::VectorXd& weights,
                                    std::span<const int> angle_idx);
Eigen::MatrixXd weighted_state_cov(const Eigen::MatrixXd& points,
                                   const Eigen::VectorXd& mean,
                                   const Eigen::VectorXd& weights,
                                   std::span<const int> angle_idx);

/// Constant-velocity forward-Euler prediction with additive discretized
/// process noise. Throws std::invalid_argument when dt <= 0.
StateBelief predict(const StateBelief& belief, double dt,
                    const ProcessNoise& noise, const SigmaParams& params);

/// Depth update on the z component. A non-finite measurement is rejected
/// (accepted=false) and the belief returned unchanged.
StateBelief update_barometer(const StateBelief& belief, double z_depth,
                             double r_var, const SigmaParams& params,
                             bool* accepted = nullptr);

/// Body-velocity update on (u, v, w) with disturbance-inflated covariance.
StateBelief update_dvl(const StateBelief& belief, const Eigen::Vector3d& z_vel,
                       const Eigen::Matrix3d& r_cov,
                       const DisturbanceProfile& profile,
                       const SigmaParams& params, bool* accepted = nullptr);

/// Angular-rate update on (p, q, r); with couple_bias the IMU bias block is
/// part of the measurement model and becomes observable.
StateBelief update_imu_gyro(const StateBelief& belief,
                            const Eigen::Vector3d& z_gyro,
                            const Eigen::Matrix3d& r_cov,
                            const SigmaParams& params, bool* accepted = nullptr,
                            bool couple_bias = true);

/// Orientation update on (roll, pitch, yaw) with wrapped innovations,
/// disturbance inflation, and (with couple_bias) the DR bias block.
StateBelief update_dr_orientation(const StateBelief& belief,
                                  const Eigen::Vector3d& z_euler,
                                  const Eigen::Matrix3d& r_cov,
                                  const DisturbanceProfile& profile,
                                  const SigmaParams& params,
                                  bool* accepted = nullptr,
                                  bool couple_bias = true);

/// Runs predict+update over a time-ordered sample stream. Emits the initial
/// belief followed by one belief per sample (range beams predict only).
/// Unsorted input throws std::invalid_argument.
std::vector<StateBelief> run_filter(std::span<const SensorSample> samples,
                                    const StateBelief& init,
                                    const ProcessNoise& noise,
                                    const MeasurementNoise& meas,
                                    const DisturbanceSchedule& schedule,
                                    const FilterOptions& options,
                                    FilterDiagnostics* diag = nullptr);

}  // namespace wavenav
