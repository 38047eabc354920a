#include "wavenav/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wavenav/errors.hpp"
#include "wavenav/kdtree.hpp"

namespace wavenav {

std::vector<Eigen::Vector3d> gt_velocity(std::span<const Eigen::Vector3d> positions,
                                         double rate_hz, double window_s) {
  if (positions.size() < 3) {
    throw std::invalid_argument("gt_velocity requires at least 3 samples");
  }
  if (!(rate_hz > 0.0)) throw std::invalid_argument("gt_velocity requires rate > 0");
  const double dt = 1.0 / rate_hz;
  const std::size_t n = positions.size();

  std::vector<Eigen::Vector3d> diff(n);
  diff[0] = (positions[1] - positions[0]) / dt;
  diff[n - 1] = (positions[n - 1] - positions[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    diff[i] = (positions[i + 1] - positions[i - 1]) / (2.0 * dt);
  }

  auto window = static_cast<std::size_t>(std::lround(window_s * rate_hz));
  window = std::max<std::size_t>(window, 2);
  const std::size_t half = window / 2;

  // Boxcar convolution with truncated windows at the edges.
  std::vector<Eigen::Vector3d> prefix(n + 1, Eigen::Vector3d::Zero());
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + diff[i];
  std::vector<Eigen::Vector3d> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(i + half, n - 1);
    out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi + 1 - lo);
  }
  return out;
}

std::vector<TruthSample> truth_series_analytic(const GroundTruthLog& truth,
                                               std::span<const double> timestamps) {
  std::vector<TruthSample> out;
  out.reserve(timestamps.size());
  for (double t : timestamps) {
    const TruthState state = truth.state_at(t);
    out.push_back(TruthSample{t, state.pose, state.twist.linear()});
  }
  return out;
}

std::vector<TruthSample> truth_series_derived(const GroundTruthLog& truth,
                                              std::span<const double> timestamps,
                                              double window_s) {
  std::vector<Eigen::Vector3d> positions;
  positions.reserve(truth.hirate.size());
  for (const TruthState& s : truth.hirate) positions.push_back(s.pose.position());
  const std::vector<Eigen::Vector3d> vel_world =
      gt_velocity(positions, truth.hirate_hz, window_s);

  std::vector<TruthSample> out;
  out.reserve(timestamps.size());
  for (double t : timestamps) {
    const TruthState state = truth.state_at(t);
    // Nearest high-rate sample; at 2000 Hz the interpolation error is
    // negligible next to the smoothing window.
    const auto idx = static_cast<std::size_t>(std::clamp(
        std::lround(t * truth.hirate_hz), 0l,
        static_cast<long>(vel_world.size()) - 1));
    const Eigen::Vector3d v_body =
        rotation(state.pose).transpose() * vel_world[idx];
    out.push_back(TruthSample{t, state.pose, v_body});
  }
  return out;
}

namespace {

double interp_linear(double a, double b, double frac) { return a + frac * (b - a); }

double interp_angle(double a, double b, double frac) {
  return wrap_angle(a + frac * wrap_angle(b - a));
}

TruthSample interpolate(const TruthSample& a, const TruthSample& b, double t) {
  const double span = b.t - a.t;
  const double frac = span > 0.0 ? (t - a.t) / span : 0.0;
  TruthSample out;
  out.t = t;
  out.pose.x = interp_linear(a.pose.x, b.pose.x, frac);
  out.pose.y = interp_linear(a.pose.y, b.pose.y, frac);
  out.pose.z = interp_linear(a.pose.z, b.pose.z, frac);
  out.pose.roll = interp_angle(a.pose.roll, b.pose.roll, frac);
  out.pose.pitch = interp_angle(a.pose.pitch, b.pose.pitch, frac);
  out.pose.yaw = interp_angle(a.pose.yaw, b.pose.yaw, frac);
  out.velocity_body = a.velocity_body + frac * (b.velocity_body - a.velocity_body);
  return out;
}

}  // namespace

std::array<double, 9> trajectory_rmse(std::span<const StateBelief> estimates,
                                      std::span<const TruthSample> truth) {
  if (estimates.empty() || truth.empty()) {
    throw DataError("trajectory_rmse requires non-empty series");
  }
  const double t_lo = truth.front().t;
  const double t_hi = truth.back().t;

  std::array<double, 9> sum_sq{};
  std::size_t count = 0;
  for (const StateBelief& est : estimates) {
    const double t = est.timestamp;
    if (t < t_lo - 1e-9 || t > t_hi + 1e-9) continue;
    const auto it = std::lower_bound(
        truth.begin(), truth.end(), t,
        [](const TruthSample& s, double value) { return s.t < value; });
    TruthSample ref;
    if (it == truth.begin()) {
      ref = truth.front();
    } else if (it == truth.end()) {
      ref = truth.back();
    } else {
      ref = interpolate(*(it - 1), *it, t);
    }

    const Pose& pose = est.state.pose;
    const double residuals[9] = {
        pose.x - ref.pose.x,
        pose.y - ref.pose.y,
        pose.z - ref.pose.z,
        wrap_angle(pose.roll - ref.pose.roll),
        wrap_angle(pose.pitch - ref.pose.pitch),
        wrap_angle(pose.yaw - ref.pose.yaw),
        est.state.twist.u - ref.velocity_body.x(),
        est.state.twist.v - ref.velocity_body.y(),
        est.state.twist.w - ref.velocity_body.z(),
    };
    for (int c = 0; c < 9; ++c) sum_sq[c] += residuals[c] * residuals[c];
    ++count;
  }
  if (count == 0) {
    throw DataError("trajectory_rmse: no temporal overlap between estimates and truth");
  }
  std::array<double, 9> rmse{};
  for (int c = 0; c < 9; ++c) rmse[c] = std::sqrt(sum_sq[c] / count);
  return rmse;
}

double cloud_to_cloud(std::span<const Eigen::Vector3d> map_points,
                      std::span<const Eigen::Vector3d> truth_points) {
  if (map_points.empty() || truth_points.empty()) {
    throw DataError("cloud_to_cloud requires non-empty clouds");
  }
  const KdTree3 tree(truth_points);
  double sum = 0.0;
  for (const Eigen::Vector3d& p : map_points) sum += tree.nearest_distance(p);
  return sum / static_cast<double>(map_points.size());
}

long occupied_count(const VoxelGrid& map) {
  long count = 0;
  for (const auto& [idx, stat] : map.cells) {
    if (stat.alpha / (stat.alpha + stat.beta) > 0.5) ++count;
  }
  return count;
}

std::string report_to_keyvalue(const EvalReport& report) {
  std::ostringstream out;
  char buf[64];
  for (int c = 0; c < 9; ++c) {
    std::snprintf(buf, sizeof buf, "%.9g", report.rmse[c]);
    out << "rmse_" << kRmseComponents[c] << ' ' << buf << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.9g", report.cloud_to_cloud);
  out << "cloud_to_cloud_m " << buf << '\n';
  out << "occupied_cells " << report.occupied_cells << '\n';
  return out.str();
}

std::string report_to_table(const EvalReport& report) {
  std::ostringstream out;
  out << "Trajectory RMSE\n";
  char line[256];
  std::snprintf(line, sizeof line, "  %-6s %-8s %-8s %-8s %-8s %-8s %-8s %-8s %-8s\n",
                "x(m)", "y(m)", "z(m)", "phi", "theta", "psi", "vx", "vy", "vz");
  out << line;
  std::snprintf(line, sizeof line,
                "  %-6.3f %-8.3f %-8.3f %-8.3f %-8.3f %-8.3f %-8.3f %-8.3f %-8.3f\n",
                report.rmse[0], report.rmse[1], report.rmse[2], report.rmse[3],
                report.rmse[4], report.rmse[5], report.rmse[6], report.rmse[7],
                report.rmse[8]);
  out << line;
  out << "Map evaluation\n";
  std::snprintf(line, sizeof line,
                "  cloud-to-cloud (m): %-10.4f occupied cells: %ld\n",
                report.cloud_to_cloud, report.occupied_cells);
  out << line;
  std::snprintf(line, sizeof line, "  runtime (s): %.3f\n", report.runtime_s);
  out << line;
  return out.str();
}

}  // namespace wavenav
