#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wavenav/mapping.hpp"
#include "wavenav/simulator.hpp"
#include "wavenav/ukf.hpp"

namespace wavenav {

/// Names of the nine trajectory RMSE components, in report order.
inline constexpr std::array<const char*, 9> kRmseComponents = {
    "x", "y", "z", "phi", "theta", "psi", "vx", "vy", "vz"};

struct EvalReport {
  std::array<double, 9> rmse{};       // x y z phi theta psi vx vy vz
  double cloud_to_cloud = 0.0;        // m
  long occupied_cells = 0;
  double runtime_s = 0.0;             // console-only; kept out of report files
};

/// Ground-truth velocity from uniformly sampled positions: central finite
/// differences followed by a boxcar moving average of the given window.
/// Throws std::invalid_argument for fewer than 3 samples.
std::vector<Eigen::Vector3d> gt_velocity(std::span<const Eigen::Vector3d> positions,
                                         double rate_hz, double window_s);

/// Reference state series used for RMSE evaluation.
struct TruthSample {
  double t = 0.0;
  Pose pose;
  Eigen::Vector3d velocity_body = Eigen::Vector3d::Zero();
};

/// Analytic reference: poses and body velocities straight from the profile.
std::vector<TruthSample> truth_series_analytic(const GroundTruthLog& truth,
                                               std::span<const double> timestamps);

/// Reference derived the way a carriage log would be processed: velocities
/// from smoothed finite differences of the high-rate positions, rotated into
/// the body frame with the truth orientation.
std::vector<TruthSample> truth_series_derived(const GroundTruthLog& truth,
                                              std::span<const double> timestamps,
                                              double window_s);

/// Per-component RMSE of the estimate series against interpolated truth.
/// Angles interpolate along the shortest arc and residuals are wrapped.
/// Throws DataError when the time ranges do not overlap.
std::array<double, 9> trajectory_rmse(std::span<const StateBelief> estimates,
                                      std::span<const TruthSample> truth);

/// Mean nearest-neighbor distance from each map point to the truth cloud
/// (map-to-truth direction only). Throws DataError on an empty cloud.
double cloud_to_cloud(std::span<const Eigen::Vector3d> map_points,
                      std::span<const Eigen::Vector3d> truth_points);

/// Number of cells with mean occupancy strictly above 0.5.
long occupied_count(const VoxelGrid& map);

/// Serializes the deterministic report fields as "key value" lines.
std::string report_to_keyvalue(const EvalReport& report);

/// Console table mirroring the trajectory-RMSE and map-metric layouts.
std::string report_to_table(const EvalReport& report);

}  // namespace wavenav
