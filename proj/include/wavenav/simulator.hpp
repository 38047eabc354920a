#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wavenav/disturbance.hpp"
#include "wavenav/geometry.hpp"
#include "wavenav/mapping.hpp"
#include "wavenav/sensors.hpp"

namespace wavenav {

struct SensorRates {
  double dvl = 5.0;        // Hz, velocity and the four range transducers
  double imu = 50.0;       // Hz
  double barometer = 10.0; // Hz
  double dr = 5.0;         // Hz
  double sonar = 10.0;     // Hz
};

/// Axis-aligned box proud of the floor (top_z above the floor plane,
/// z positive down).
struct BoxObstacle {
  double x0 = 0.0, x1 = 0.0;
  double y0 = 0.0, y1 = 0.0;
  double top_z = 0.0;  // m, depth of the box top (< floor_z)
};

struct FloorScene {
  double floor_z = 3.0;  // m depth of the flat floor
  std::vector<BoxObstacle> boxes;
};

/// Ground-truth sensor imperfections injected by the simulator.
struct TruthParams {
  Eigen::Vector3d imu_gyro_bias = Eigen::Vector3d::Zero();  // rad/s, constant
  Eigen::Vector3d dr_drift_rate = Eigen::Vector3d::Zero();  // rad/s, linear drift
  double range_wave_coupling = 0.5;  // sinusoid amplitude = coupling * wave amp
};

/// Calm-water noise floor per sensor.
struct BaseNoise {
  double barometer_std = 0.005;                                 // m
  Eigen::Vector3d dvl_std = Eigen::Vector3d::Constant(0.005);   // m/s
  Eigen::Vector3d imu_std = Eigen::Vector3d::Constant(0.002);   // rad/s
  Eigen::Vector3d dr_std = Eigen::Vector3d::Constant(0.002);    // rad
  double range_std = 0.02;                                      // m
};

/// Full simulation scenario. With fewer than two waypoints the trajectory is
/// a straight line of line_length along world +x from start_position; a zero
/// length gives a stationary log of stationary_duration.
struct Scenario {
  std::vector<Eigen::Vector3d> waypoints;
  double line_length = 36.6;       // m
  double cruise_speed = 0.2;       // m/s
  double accel = 0.05;             // m/s^2 trapezoid ramps
  double stationary_duration = 10.0;  // s, zero-length paths only
  Eigen::Vector3d start_position = Eigen::Vector3d(0.0, 0.0, 1.0);
  double fixed_yaw = 0.0;          // rad, carriage keeps orientation fixed
  FloorScene scene;
  std::vector<WaveInterval> waves;
  SensorRates rates;
  TruthParams truth;
  BaseNoise noise;
  double beam_tilt = 22.5 * kPi / 180.0;  // rad from vertical, Janus cross
  std::uint64_t seed = 1;
};

struct TruthState {
  double t = 0.0;
  Pose pose;
  Twist twist;
};

/// Trapezoidal speed profile along a polyline, queryable analytically.
class MotionProfile {
 public:
  MotionProfile() = default;
  MotionProfile(std::vector<Eigen::Vector3d> path, double cruise_speed,
                double accel, double stationary_duration);

  double duration() const { return duration_; }
  double total_length() const { return total_length_; }
  std::pair<double, double> cruise_window() const { return cruise_window_; }
  TruthState state_at(double t, double fixed_yaw) const;

 private:
  std::vector<Eigen::Vector3d> path_;
  std::vector<double> cumulative_;
  double cruise_ = 0.0;
  double accel_ = 0.0;
  double ramp_time_ = 0.0;
  double peak_speed_ = 0.0;
  double total_length_ = 0.0;
  double duration_ = 0.0;
  std::pair<double, double> cruise_window_{0.0, 0.0};

  double arc_at(double t) const;
  double speed_at(double t) const;
};

struct GroundTruthLog {
  double hirate_hz = 2000.0;
  std::vector<TruthState> hirate;
  MotionProfile profile;
  double fixed_yaw = 0.0;
  std::pair<double, double> cruise_window{0.0, 0.0};

  TruthState state_at(double t) const { return profile.state_at(t, fixed_yaw); }
  double duration() const { return profile.duration(); }
};

/// Exact carriage-style trajectory: trapezoidal speed, 2000 Hz positions,
/// analytic twists. Throws ConfigError for a non-zero path with zero speed.
GroundTruthLog generate_truth(const Scenario& scenario);

/// First positive ray/scene intersection distance, +inf when the ray never
/// hits the floor or a box.
double raycast_range(const FloorScene& scene, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir_world);

/// Body-frame beam directions: four Janus-cross DVL transducers tilted from
/// vertical plus the straight-down sonar (beam id 4).
Eigen::Vector3d beam_direction(int beam_id, double tilt);

/// Simulates every sensor stream at its configured rate with calm-water
/// noise, wave-conditioned disturbance noise, gyro bias, DR drift, and
/// sinusoidal wave pressure on depth and ranges. Deterministic per seed with
/// one generator per stream.
std::vector<SensorSample> synthesize_sensors(const GroundTruthLog& truth,
                                             const Scenario& scenario,
                                             const DisturbanceTable& table);

/// Adds a constant offset to DVL velocity samples, optionally restricted to
/// the constant-velocity cruise window.
std::vector<SensorSample> inject_velocity_offset(
    std::span<const SensorSample> stream, const Eigen::Vector3d& offset,
    bool cruise_only, std::pair<double, double> cruise_window);

/// Dense point sampling of the scene surface (floor minus box footprints,
/// box tops and sides) over the given x-y extent.
std::vector<Eigen::Vector3d> scene_truth_cloud(const FloorScene& scene,
                                               const Eigen::Vector2d& xy_min,
                                               const Eigen::Vector2d& xy_max,
                                               double spacing);

/// Range beams extracted from a sensor log, for the mapper.
std::vector<RangeBeam> extract_range_beams(std::span<const SensorSample> samples);

}  // namespace wavenav
