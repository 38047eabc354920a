#include "wavenav/disturbance.hpp"

#include <cmath>
#include <limits>

#include "wavenav/errors.hpp"

namespace wavenav {

namespace {
constexpr double kExactTol = 1e-9;
}

DisturbanceProfile lookup_profile(const WaveCondition& wave,
                                  const DisturbanceTable& table) {
  if (table.empty()) {
    throw ConfigError("disturbance table is empty");
  }
  for (const auto& [cond, profile] : table) {
    if (std::abs(cond.amplitude - wave.amplitude) <= kExactTol &&
        std::abs(cond.frequency - wave.frequency) <= kExactTol) {
      return profile;
    }
  }
  if (wave.amplitude <= kExactTol) {
    return DisturbanceProfile::zero();
  }

  // Nearest neighbor in (amplitude, frequency) after per-axis min-max
  // normalization over the table rows.
  double amp_min = std::numeric_limits<double>::infinity(), amp_max = -amp_min;
  double freq_min = amp_min, freq_max = -amp_min;
  for (const auto& [cond, profile] : table) {
    amp_min = std::min(amp_min, cond.amplitude);
    amp_max = std::max(amp_max, cond.amplitude);
    freq_min = std::min(freq_min, cond.frequency);
    freq_max = std::max(freq_max, cond.frequency);
  }
  const double amp_range = amp_max - amp_min;
  const double freq_range = freq_max - freq_min;
  auto normalize = [](double v, double lo, double range) {
    return range > 0.0 ? (v - lo) / range : 0.0;
  };

  const double qa = normalize(wave.amplitude, amp_min, amp_range);
  const double qf = normalize(wave.frequency, freq_min, freq_range);
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double da = normalize(table[i].first.amplitude, amp_min, amp_range) - qa;
    const double df = normalize(table[i].first.frequency, freq_min, freq_range) - qf;
    const double dist = da * da + df * df;
    if (dist < best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return table[best].second;
}

Eigen::MatrixXd inflate_measurement_cov(const Eigen::MatrixXd& base_cov,
                                        const DisturbanceProfile& profile,
                                        SensorTag sensor) {
  const auto expect_dim = [&](Eigen::Index dim) {
    if (base_cov.rows() != dim || base_cov.cols() != dim) {
      throw std::invalid_argument("measurement covariance dimension mismatch");
    }
  };
  switch (sensor) {
    case SensorTag::kDvlVelocity: {
      expect_dim(3);
      Eigen::MatrixXd out = base_cov;
      out.diagonal() += profile.dvl_vel_std.array().square().matrix();
      return out;
    }
    case SensorTag::kDrOrientation: {
      expect_dim(3);
      Eigen::MatrixXd out = base_cov;
      out.diagonal() += profile.dr_orient_std.array().square().matrix();
      return out;
    }
    case SensorTag::kBarometer:
      expect_dim(1);
      return base_cov;
    case SensorTag::kImuGyro:
      expect_dim(3);
      return base_cov;
    default:
      throw std::invalid_argument("sensor carries no measurement covariance");
  }
}

DisturbanceProfile DisturbanceSchedule::at(double t) const {
  const WaveCondition cond = condition_at(t);
  if (cond.amplitude <= 0.0) return DisturbanceProfile::zero();
  return lookup_profile(cond, table);
}

WaveCondition DisturbanceSchedule::condition_at(double t) const {
  for (const auto& interval : intervals) {
    if (t >= interval.t_start && t < interval.t_end) return interval.condition;
  }
  return WaveCondition{0.0, 1.0};
}

}  // namespace wavenav
