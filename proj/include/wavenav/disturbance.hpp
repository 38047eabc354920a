#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wavenav/sensors.hpp"

namespace wavenav {

/// Surface wave condition acting on the vehicle.
struct WaveCondition {
  double amplitude = 0.0;  // m
  double frequency = 1.0;  // Hz
};

/// Per-axis standard deviations of the additive acoustic disturbance noise.
struct DisturbanceProfile {
  Eigen::Vector3d dvl_vel_std = Eigen::Vector3d::Zero();    // m/s on (u, v, w)
  Eigen::Vector3d dr_orient_std = Eigen::Vector3d::Zero();  // rad on (roll, pitch, yaw)

  static DisturbanceProfile zero() { return {}; }
  bool is_zero() const {
    return dvl_vel_std.isZero(0.0) && dr_orient_std.isZero(0.0);
  }
};

/// Gyro-bias random-walk calibration: walk mean per second and walk
/// covariance.
struct BiasCalibration {
  Eigen::Vector3d mu_b = Eigen::Vector3d::Zero();       // rad/s
  Eigen::Matrix3d walk_cov = Eigen::Matrix3d::Zero();   // (rad/s)^2
};

using DisturbanceTable = std::vector<std::pair<WaveCondition, DisturbanceProfile>>;

/// Wave schedule entry: condition active on [t_start, t_end).
struct WaveInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  WaveCondition condition;
};

/// Resolves a wave condition against a characterization table. Exact matches
/// (both fields within 1e-9) return the table row verbatim; calm water
/// (zero amplitude) maps to the zero profile; anything else picks the nearest
/// row after min-max normalizing amplitude and frequency over the table.
DisturbanceProfile lookup_profile(const WaveCondition& wave,
                                  const DisturbanceTable& table);

/// Adds the disturbance variance to a base measurement covariance. Only DVL
/// velocity and DR orientation carry a disturbance term; barometer and IMU
/// gyro covariances pass through unchanged.
Eigen::MatrixXd inflate_measurement_cov(const Eigen::MatrixXd& base_cov,
                                        const DisturbanceProfile& profile,
                                        SensorTag sensor);

/// Time-indexed disturbance lookup for a run: wave intervals plus the
/// characterization table they index into.
struct DisturbanceSchedule {
  std::vector<WaveInterval> intervals;
  DisturbanceTable table;

  /// Active profile at time t; zero profile outside every interval.
  DisturbanceProfile at(double t) const;

  /// Active wave condition at time t, amplitude zero when calm.
  WaveCondition condition_at(double t) const;
};

}  // namespace wavenav
