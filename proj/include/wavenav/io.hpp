#pragma once

#include <span>
#include <string>
#include <vector>

#include "wavenav/evaluation.hpp"
#include "wavenav/mapping.hpp"
#include "wavenav/sensors.hpp"
#include "wavenav/simulator.hpp"
#include "wavenav/ukf.hpp"

namespace wavenav {

// All files are ASCII with 9 significant digits unless stated otherwise.
// Lines starting with '#' are comments.

/// Sensor log: "t tag v1 v2 v3" plus "beam_id range" for range beams.
void write_sensor_log(const std::string& path, std::span<const SensorSample> samples);
std::vector<SensorSample> read_sensor_log(const std::string& path);

/// Truth state table: "t x y z phi theta psi u v w".
void write_truth_states(const std::string& path, std::span<const TruthState> states);
std::vector<TruthState> read_truth_states(const std::string& path);

/// Estimated trajectory: "t mean[18] cov-lower-triangle[171]".
void write_trajectory(const std::string& path, std::span<const StateBelief> beliefs);
std::vector<StateBelief> read_trajectory(const std::string& path);

/// Full grid dump for oracle comparison: "i j k alpha beta" with a header
/// carrying pitch, origin, and priors.
void write_grid(const std::string& path, const VoxelGrid& map);
VoxelGrid read_grid(const std::string& path);

/// Occupied-cell point cloud: "x y z mean variance" (6 decimal places).
void write_cloud(const std::string& path, std::span<const CloudPoint> cloud,
                 const VoxelGrid& map);
std::vector<CloudPoint> read_cloud(const std::string& path);

/// Bare xyz cloud: "x y z" (6 decimal places).
void write_xyz_cloud(const std::string& path, std::span<const Eigen::Vector3d> points);
std::vector<Eigen::Vector3d> read_xyz_cloud(const std::string& path);

/// Evaluation report as deterministic "key value" lines.
void write_report(const std::string& path, const EvalReport& report);

}  // namespace wavenav
