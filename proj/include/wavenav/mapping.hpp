#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "wavenav/geometry.hpp"

namespace wavenav {

/// Beta concentration pair accumulated by kernel-weighted evidence.
struct CellStat {
  double alpha = 0.0;
  double beta = 0.0;
};

struct CellIndex {
  int i = 0;
  int j = 0;
  int k = 0;
  bool operator==(const CellIndex&) const = default;
};

struct CellIndexHash {
  std::size_t operator()(const CellIndex& c) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : {static_cast<std::int64_t>(c.i),
                           static_cast<std::int64_t>(c.j),
                           static_cast<std::int64_t>(c.k)}) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Sparse world-anchored voxel grid of Beta concentrations. Absent cells
/// hold the prior (alpha0, beta0).
struct VoxelGrid {
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  double pitch = 0.1;       // m, cubic cells
  double alpha0 = 1e-10;
  double beta0 = 1e-10;
  std::unordered_map<CellIndex, CellStat, CellIndexHash> cells;

  CellIndex index_of(const Eigen::Vector3d& point) const;
  Eigen::Vector3d center_of(const CellIndex& index) const;
};

/// Sensor mixing weights and length-scale bounds for the adaptive kernel.
struct KernelConfig {
  double sigma0_dvl = 0.9;
  double sigma0_sonar = 0.6;
  Eigen::Vector3d l_min = Eigen::Vector3d(0.10, 0.10, 0.05);  // m
  Eigen::Vector3d l_max = Eigen::Vector3d(0.18, 0.18, 0.08);  // m
  double alpha0 = 1e-10;
  double beta0 = 1e-10;
  double pitch = 0.1;  // m
};

/// One range return along a body-frame beam axis.
struct RangeBeam {
  double timestamp = 0.0;
  int beam_id = 0;  // 0-3 DVL transducers, 4 sonar
  double range = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d(0, 0, 1);  // unit, body frame

  bool is_sonar() const { return beam_id >= 4; }
};

/// Pose with the diagonal of the position covariance block attached.
struct UncertainPose {
  double timestamp = 0.0;
  Pose pose;
  Eigen::Vector3d pos_var = Eigen::Vector3d::Zero();  // m^2
};

/// Rigid body-frame mount of a range sensor.
struct SensorMount {
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

struct MapperDiagnostics {
  std::uint64_t skipped_beams = 0;        // no pose within the time gate
  std::uint64_t clamped_variances = 0;    // normalized variance out of [0, 1]
};

enum class MapperVariant {
  kCsm,          // delta-kernel hit counting
  kFixedBki,     // isotropic fixed length scale
  kAdaptiveBki,  // per-axis length scale from normalized pose variance
};

struct MapperOptions {
  MapperVariant variant = MapperVariant::kAdaptiveBki;
  double fixed_lengthscale = 0.15;  // m, kFixedBki only
  bool free_space = false;          // add y=0 samples along the ray
  bool streaming_normalization = false;  // running min/max instead of two-pass
  double max_pose_gap = 0.1;        // s
};

/// Sparse finite-support kernel: sigma0 * [ (2 + cos(2*pi*d/l)) * (1 - d/l) / 3
/// + sin(2*pi*d/l) / (2*pi) ] for d < l, exactly 0 for d >= l.
double sparse_kernel(double d, double l, double sigma0);

/// Per-axis length scale interpolated between l_min and l_max by the
/// normalized variance. Out-of-range inputs are clamped and counted.
Eigen::Vector3d adapt_lengthscale(const Eigen::Vector3d& var_norm,
                                  const KernelConfig& cfg,
                                  MapperDiagnostics* diag = nullptr);

/// Min-max normalization of the per-axis position variance over a session.
/// Axes with a degenerate range map to zero throughout.
std::vector<Eigen::Vector3d> normalize_session_variance(
    std::span<const UncertainPose> trajectory);

/// Axis-decomposed product kernel with box support of half-extents l_hat.
/// Unit-amplitude per-axis factors scaled once by sigma0, so the value at
/// zero offset is sigma0.
double decomposed_kernel(const Eigen::Vector3d& delta,
                         const Eigen::Vector3d& l_hat, double sigma0);

/// World-frame hit point of a range return.
Eigen::Vector3d beam_to_world_point(const Pose& pose, const RangeBeam& beam,
                                    const SensorMount& mount = {});

/// Spreads one labeled hit into every cell whose center lies inside the
/// kernel support box. When every component of l_hat is below the grid pitch
/// the update degenerates to delta-kernel counting on the containing cell.
void update_map(VoxelGrid& map, const Eigen::Vector3d& hit, int occupancy_label,
                const Eigen::Vector3d& l_hat, double sigma0);

/// Beta posterior mean and variance of a cell; absent cells report the prior.
std::pair<double, double> query_cell(const VoxelGrid& map, const CellIndex& index);

/// Offline two-pass construction: session variance normalization, then one
/// kernel update per beam against its nearest-in-time pose.
VoxelGrid build_map(std::span<const UncertainPose> trajectory,
                    std::span<const RangeBeam> beams, const KernelConfig& cfg,
                    const MapperOptions& options = {},
                    const SensorMount& mount = {},
                    MapperDiagnostics* diag = nullptr);

struct CloudPoint {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double mean = 0.0;
  double variance = 0.0;
};

/// Cells with mean occupancy strictly above 0.5, sorted by index for
/// deterministic output.
std::vector<CloudPoint> map_to_pointcloud(const VoxelGrid& map);

}  // namespace wavenav
