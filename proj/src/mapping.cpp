#include "wavenav/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavenav/errors.hpp"

namespace wavenav {

CellIndex VoxelGrid::index_of(const Eigen::Vector3d& point) const {
  const Eigen::Vector3d rel = (point - origin) / pitch;
  return CellIndex{static_cast<int>(std::floor(rel.x())),
                   static_cast<int>(std::floor(rel.y())),
                   static_cast<int>(std::floor(rel.z()))};
}

Eigen::Vector3d VoxelGrid::center_of(const CellIndex& index) const {
  return origin + Eigen::Vector3d(index.i + 0.5, index.j + 0.5, index.k + 0.5) * pitch;
}

double sparse_kernel(double d, double l, double sigma0) {
  if (!(d >= 0.0) || !(l > 0.0) || !(sigma0 > 0.0)) {
    throw std::invalid_argument("sparse_kernel requires d >= 0, l > 0, sigma0 > 0");
  }
  if (d >= l) return 0.0;
  const double ratio = d / l;
  const double value = (2.0 + std::cos(2.0 * kPi * ratio)) * (1.0 - ratio) / 3.0 +
                       std::sin(2.0 * kPi * ratio) / (2.0 * kPi);
  return sigma0 * std::clamp(value, 0.0, 1.0);
}

Eigen::Vector3d adapt_lengthscale(const Eigen::Vector3d& var_norm,
                                  const KernelConfig& cfg,
                                  MapperDiagnostics* diag) {
  Eigen::Vector3d out;
  for (int a = 0; a < 3; ++a) {
    double v = var_norm[a];
    if (v < 0.0 || v > 1.0) {
      if (diag) ++diag->clamped_variances;
      v = std::clamp(v, 0.0, 1.0);
    }
    out[a] = v * (cfg.l_max[a] - cfg.l_min[a]) + cfg.l_min[a];
  }
  return out;
}

std::vector<Eigen::Vector3d> normalize_session_variance(
    std::span<const UncertainPose> trajectory) {
  if (trajectory.empty()) {
    throw std::invalid_argument("variance normalization requires a non-empty trajectory");
  }
  Eigen::Vector3d lo = trajectory.front().pos_var;
  Eigen::Vector3d hi = trajectory.front().pos_var;
  for (const auto& p : trajectory) {
    lo = lo.cwiseMin(p.pos_var);
    hi = hi.cwiseMax(p.pos_var);
  }
  std::vector<Eigen::Vector3d> out;
  out.reserve(trajectory.size());
  for (const auto& p : trajectory) {
    Eigen::Vector3d v;
    for (int a = 0; a < 3; ++a) {
      const double range = hi[a] - lo[a];
      v[a] = range > 0.0 ? (p.pos_var[a] - lo[a]) / range : 0.0;
    }
    out.push_back(v);
  }
  return out;
}

double decomposed_kernel(const Eigen::Vector3d& delta,
                         const Eigen::Vector3d& l_hat, double sigma0) {
  if (!(l_hat.minCoeff() > 0.0)) {
    throw std::invalid_argument("decomposed_kernel requires positive length scales");
  }
  double product = sigma0;
  for (int a = 0; a < 3; ++a) {
    const double d = std::abs(delta[a]);
    if (d >= l_hat[a]) return 0.0;
    product *= sparse_kernel(d, l_hat[a], 1.0);
  }
  return product;
}

Eigen::Vector3d beam_to_world_point(const Pose& pose, const RangeBeam& beam,
                                    const SensorMount& mount) {
  const Eigen::Vector3d body =
      mount.offset + beam.range * (mount.rotation * beam.direction);
  return pose.position() + rotation(pose) * body;
}

void update_map(VoxelGrid& map, const Eigen::Vector3d& hit, int occupancy_label,
                const Eigen::Vector3d& l_hat, double sigma0) {
  const double y = occupancy_label != 0 ? 1.0 : 0.0;
  auto deposit = [&](const CellIndex& idx, double k) {
    auto [it, inserted] = map.cells.try_emplace(idx, CellStat{map.alpha0, map.beta0});
    it->second.alpha += k * y;
    it->second.beta += k * (1.0 - y);
  };

  // Delta-kernel limit: with the whole support box inside one pitch the
  // update reduces to counting into the containing cell.
  if ((l_hat.array() < map.pitch).all()) {
    deposit(map.index_of(hit), sigma0);
    return;
  }

  const CellIndex lo = map.index_of(hit - l_hat);
  const CellIndex hi = map.index_of(hit + l_hat);
  for (int i = lo.i; i <= hi.i; ++i) {
    for (int j = lo.j; j <= hi.j; ++j) {
      for (int k = lo.k; k <= hi.k; ++k) {
        const CellIndex idx{i, j, k};
        const double w = decomposed_kernel(map.center_of(idx) - hit, l_hat, sigma0);
        if (w > 0.0) deposit(idx, w);
      }
    }
  }
}

std::pair<double, double> query_cell(const VoxelGrid& map, const CellIndex& index) {
  CellStat stat{map.alpha0, map.beta0};
  if (auto it = map.cells.find(index); it != map.cells.end()) stat = it->second;
  const double total = stat.alpha + stat.beta;
  const double mean = stat.alpha / total;
  const double variance = stat.alpha * stat.beta / (total * total * (total + 1.0));
  return {mean, variance};
}

namespace {

// Nearest trajectory entry by timestamp (trajectory sorted by time).
std::size_t nearest_pose_index(std::span<const UncertainPose> trajectory, double t) {
  const auto cmp = [](const UncertainPose& p, double value) {
    return p.timestamp < value;
  };
  const auto it = std::lower_bound(trajectory.begin(), trajectory.end(), t, cmp);
  if (it == trajectory.begin()) return 0;
  if (it == trajectory.end()) return trajectory.size() - 1;
  const std::size_t after = static_cast<std::size_t>(it - trajectory.begin());
  const std::size_t before = after - 1;
  return (t - trajectory[before].timestamp) <= (trajectory[after].timestamp - t)
             ? before
             : after;
}

}  // namespace

VoxelGrid build_map(std::span<const UncertainPose> trajectory,
                    std::span<const RangeBeam> beams, const KernelConfig& cfg,
                    const MapperOptions& options, const SensorMount& mount,
                    MapperDiagnostics* diag) {
  MapperDiagnostics local;
  MapperDiagnostics& d = diag ? *diag : local;

  VoxelGrid map;
  map.pitch = cfg.pitch;
  map.alpha0 = cfg.alpha0;
  map.beta0 = cfg.beta0;
  if (beams.empty()) return map;
  if (trajectory.empty()) {
    d.skipped_beams += beams.size();
    return map;
  }

  std::vector<Eigen::Vector3d> var_norm;
  if (options.variant == MapperVariant::kAdaptiveBki) {
    if (options.streaming_normalization) {
      // Running min/max alternative to the offline two-pass normalization.
      var_norm.reserve(trajectory.size());
      Eigen::Vector3d lo = trajectory.front().pos_var;
      Eigen::Vector3d hi = trajectory.front().pos_var;
      for (const auto& p : trajectory) {
        lo = lo.cwiseMin(p.pos_var);
        hi = hi.cwiseMax(p.pos_var);
        Eigen::Vector3d v;
        for (int a = 0; a < 3; ++a) {
          const double range = hi[a] - lo[a];
          v[a] = range > 0.0 ? (p.pos_var[a] - lo[a]) / range : 0.0;
        }
        var_norm.push_back(v);
      }
    } else {
      var_norm = normalize_session_variance(trajectory);
    }
  }

  for (const RangeBeam& beam : beams) {
    const std::size_t pose_idx = nearest_pose_index(trajectory, beam.timestamp);
    const UncertainPose& up = trajectory[pose_idx];
    if (std::abs(up.timestamp - beam.timestamp) > options.max_pose_gap) {
      ++d.skipped_beams;
      continue;
    }

    Eigen::Vector3d l_hat;
    double sigma0 = beam.is_sonar() ? cfg.sigma0_sonar : cfg.sigma0_dvl;
    switch (options.variant) {
      case MapperVariant::kCsm:
        l_hat = Eigen::Vector3d::Constant(cfg.pitch / 2.0);
        sigma0 = 1.0;
        break;
      case MapperVariant::kFixedBki:
        l_hat = Eigen::Vector3d::Constant(options.fixed_lengthscale);
        break;
      case MapperVariant::kAdaptiveBki:
        l_hat = adapt_lengthscale(var_norm[pose_idx], cfg, &d);
        break;
    }

    const Eigen::Vector3d hit = beam_to_world_point(up.pose, beam, mount);
    update_map(map, hit, 1, l_hat, sigma0);

    if (options.free_space) {
      // Free-space samples every grid pitch along the ray, excluding the
      // final stretch of one maximum length scale before the hit.
      const Eigen::Vector3d dir_world =
          rotation(up.pose) * (mount.rotation * beam.direction);
      const Eigen::Vector3d start = up.pose.position() + rotation(up.pose) * mount.offset;
      const double reserved = cfg.l_max.maxCoeff();
      for (double s = cfg.pitch; s < beam.range - reserved; s += cfg.pitch) {
        update_map(map, start + s * dir_world, 0, l_hat, sigma0);
      }
    }
  }
  return map;
}

std::vector<CloudPoint> map_to_pointcloud(const VoxelGrid& map) {
  std::vector<std::pair<CellIndex, CellStat>> ordered(map.cells.begin(),
                                                      map.cells.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.i, a.first.j, a.first.k) <
           std::tie(b.first.i, b.first.j, b.first.k);
  });
  std::vector<CloudPoint> cloud;
  for (const auto& [idx, stat] : ordered) {
    const auto [mean, variance] = query_cell(map, idx);
    if (mean > 0.5) {
      cloud.push_back(CloudPoint{map.center_of(idx), mean, variance});
    }
  }
  return cloud;
}

}  // namespace wavenav
