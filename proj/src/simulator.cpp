#include "wavenav/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wavenav/errors.hpp"

namespace wavenav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic standard-normal sampler (Box-Muller) so logs are
// reproducible across standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() {
    return (rng_() >> 11) * 0x1.0p-53;  // [0, 1)
  }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over (seed, stream id)
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

}  // namespace

MotionProfile::MotionProfile(std::vector<Eigen::Vector3d> path,
                             double cruise_speed, double accel,
                             double stationary_duration)
    : path_(std::move(path)), cruise_(cruise_speed), accel_(accel) {
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < path_.size(); ++i) {
    total_length_ += (path_[i] - path_[i - 1]).norm();
    cumulative_.push_back(total_length_);
  }
  if (total_length_ <= 0.0) {
    duration_ = stationary_duration;
    return;
  }
  if (!(cruise_ > 0.0)) {
    throw ConfigError("trajectory cruise speed must be > 0 for a non-zero path");
  }
  if (!(accel_ > 0.0)) {
    throw ConfigError("trajectory acceleration must be > 0");
  }

  const double full_ramp_dist = cruise_ * cruise_ / (2.0 * accel_);
  if (2.0 * full_ramp_dist >= total_length_) {
    // Triangular profile: never reaches cruise speed.
    peak_speed_ = std::sqrt(accel_ * total_length_);
    ramp_time_ = peak_speed_ / accel_;
    duration_ = 2.0 * ramp_time_;
    cruise_window_ = {duration_ / 2.0, duration_ / 2.0};
  } else {
    peak_speed_ = cruise_;
    ramp_time_ = cruise_ / accel_;
    const double cruise_dist = total_length_ - 2.0 * full_ramp_dist;
    const double cruise_time = cruise_dist / cruise_;
    duration_ = 2.0 * ramp_time_ + cruise_time;
    cruise_window_ = {ramp_time_, ramp_time_ + cruise_time};
  }
}

double MotionProfile::speed_at(double t) const {
  if (total_length_ <= 0.0 || t <= 0.0 || t >= duration_) return 0.0;
  if (t < ramp_time_) return accel_ * t;
  if (t > duration_ - ramp_time_) return accel_ * (duration_ - t);
  return peak_speed_;
}

double MotionProfile::arc_at(double t) const {
  if (total_length_ <= 0.0) return 0.0;
  t = std::clamp(t, 0.0, duration_);
  const double t_down = duration_ - ramp_time_;
  if (t <= ramp_time_) return 0.5 * accel_ * t * t;
  const double ramp_dist = 0.5 * accel_ * ramp_time_ * ramp_time_;
  if (t <= t_down) return ramp_dist + peak_speed_ * (t - ramp_time_);
  const double remaining = duration_ - t;
  return total_length_ - 0.5 * accel_ * remaining * remaining;
}

TruthState MotionProfile::state_at(double t, double fixed_yaw) const {
  TruthState state;
  state.t = t;

  Eigen::Vector3d position = path_.empty() ? Eigen::Vector3d::Zero() : path_.front();
  Eigen::Vector3d tangent = Eigen::Vector3d::UnitX();
  if (total_length_ > 0.0) {
    const double s = std::min(arc_at(t), total_length_);
    auto seg = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    std::size_t i = seg == cumulative_.begin()
                        ? 1
                        : std::min(static_cast<std::size_t>(seg - cumulative_.begin()),
                                   path_.size() - 1);
    const double seg_len = cumulative_[i] - cumulative_[i - 1];
    const double frac = seg_len > 0.0 ? (s - cumulative_[i - 1]) / seg_len : 0.0;
    tangent = (path_[i] - path_[i - 1]).normalized();
    position = path_[i - 1] + frac * (path_[i] - path_[i - 1]);
  }

  state.pose = Pose{position.x(), position.y(), position.z(), 0.0, 0.0,
                    wrap_angle(fixed_yaw)};
  const Eigen::Vector3d v_world = speed_at(t) * tangent;
  const Eigen::Vector3d v_body = rotation(state.pose).transpose() * v_world;
  state.twist = Twist{v_body.x(), v_body.y(), v_body.z(), 0.0, 0.0, 0.0};
  return state;
}

GroundTruthLog generate_truth(const Scenario& scenario) {
  std::vector<Eigen::Vector3d> path = scenario.waypoints;
  if (path.size() < 2) {
    if (scenario.line_length < 0.0) {
      throw ConfigError("scenario line_length must be >= 0");
    }
    path = {scenario.start_position,
            scenario.start_position +
                Eigen::Vector3d(scenario.line_length, 0.0, 0.0)};
  }

  GroundTruthLog log;
  log.fixed_yaw = scenario.fixed_yaw;
  log.profile = MotionProfile(std::move(path), scenario.cruise_speed,
                              scenario.accel, scenario.stationary_duration);
  log.cruise_window = log.profile.cruise_window();

  const auto count =
      static_cast<std::size_t>(std::floor(log.duration() * log.hirate_hz));
  log.hirate.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    log.hirate.push_back(log.state_at(static_cast<double>(i) / log.hirate_hz));
  }
  return log;
}

double raycast_range(const FloorScene& scene, const Eigen::Vector3d& origin,
                     const Eigen::Vector3d& dir_world) {
  double best = kInf;
  if (dir_world.z() > 1e-12) {
    const double t = (scene.floor_z - origin.z()) / dir_world.z();
    if (t > 0.0) best = t;
  }
  for (const BoxObstacle& box : scene.boxes) {
    // Slab intersection with the box volume [x0,x1] x [y0,y1] x [top_z, floor_z].
    double t_enter = 0.0, t_exit = kInf;
    const double lo[3] = {box.x0, box.y0, box.top_z};
    const double hi[3] = {box.x1, box.y1, scene.floor_z};
    bool miss = false;
    for (int a = 0; a < 3 && !miss; ++a) {
      const double o = origin[a], d = dir_world[a];
      if (std::abs(d) < 1e-12) {
        if (o < lo[a] || o > hi[a]) miss = true;
        continue;
      }
      double t0 = (lo[a] - o) / d;
      double t1 = (hi[a] - o) / d;
      if (t0 > t1) std::swap(t0, t1);
      t_enter = std::max(t_enter, t0);
      t_exit = std::min(t_exit, t1);
      if (t_enter > t_exit) miss = true;
    }
    if (!miss && t_enter > 0.0 && t_enter < best) best = t_enter;
  }
  return best;
}

Eigen::Vector3d beam_direction(int beam_id, double tilt) {
  if (beam_id >= 4) return Eigen::Vector3d(0.0, 0.0, 1.0);
  const double azimuth = (45.0 + 90.0 * beam_id) * kPi / 180.0;
  return Eigen::Vector3d(std::sin(tilt) * std::cos(azimuth),
                         std::sin(tilt) * std::sin(azimuth), std::cos(tilt));
}

namespace {

struct WaveLookup {
  const Scenario* scenario;
  DisturbanceSchedule schedule;

  WaveCondition condition_at(double t) const { return schedule.condition_at(t); }

  double depth_ripple(double t) const {
    const WaveCondition c = condition_at(t);
    if (c.amplitude <= 0.0) return 0.0;
    return scenario->truth.range_wave_coupling * c.amplitude *
           std::sin(2.0 * kPi * c.frequency * t);
  }
};

}  // namespace

std::vector<SensorSample> synthesize_sensors(const GroundTruthLog& truth,
                                             const Scenario& scenario,
                                             const DisturbanceTable& table) {
  WaveLookup waves{&scenario, DisturbanceSchedule{scenario.waves, table}};
  const double duration = truth.duration();
  std::vector<SensorSample> samples;

  auto timestamps = [&](double rate) {
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor(duration * rate));
    out.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) out.push_back(static_cast<double>(i) / rate);
    return out;
  };

  // One generator per stream: toggling one sensor never perturbs another.
  GaussianSampler g_bar(stream_seed(scenario.seed, 0));
  GaussianSampler g_dvl(stream_seed(scenario.seed, 1));
  GaussianSampler g_imu(stream_seed(scenario.seed, 2));
  GaussianSampler g_dr(stream_seed(scenario.seed, 3));
  GaussianSampler g_beam(stream_seed(scenario.seed, 4));

  for (double t : timestamps(scenario.rates.barometer)) {
    SensorSample s;
    s.timestamp = t;
    s.tag = SensorTag::kBarometer;
    s.value[0] = truth.state_at(t).pose.z + waves.depth_ripple(t) +
                 scenario.noise.barometer_std * g_bar();
    samples.push_back(s);
  }

  for (double t : timestamps(scenario.rates.dvl)) {
    const TruthState ts = truth.state_at(t);
    const DisturbanceProfile profile = waves.schedule.at(t);
    SensorSample s;
    s.timestamp = t;
    s.tag = SensorTag::kDvlVelocity;
    s.value = ts.twist.linear();
    for (int a = 0; a < 3; ++a) {
      s.value[a] += scenario.noise.dvl_std[a] * g_dvl();
      if (profile.dvl_vel_std[a] > 0.0) s.value[a] += profile.dvl_vel_std[a] * g_dvl();
    }
    samples.push_back(s);
  }

  for (double t : timestamps(scenario.rates.imu)) {
    const TruthState ts = truth.state_at(t);
    SensorSample s;
    s.timestamp = t;
    s.tag = SensorTag::kImuGyro;
    s.value = ts.twist.angular() + scenario.truth.imu_gyro_bias;
    for (int a = 0; a < 3; ++a) s.value[a] += scenario.noise.imu_std[a] * g_imu();
    samples.push_back(s);
  }

  for (double t : timestamps(scenario.rates.dr)) {
    const TruthState ts = truth.state_at(t);
    const DisturbanceProfile profile = waves.schedule.at(t);
    SensorSample s;
    s.timestamp = t;
    s.tag = SensorTag::kDrOrientation;
    s.value = ts.pose.angles() + scenario.truth.dr_drift_rate * t;
    for (int a = 0; a < 3; ++a) {
      s.value[a] += scenario.noise.dr_std[a] * g_dr();
      if (profile.dr_orient_std[a] > 0.0) s.value[a] += profile.dr_orient_std[a] * g_dr();
      s.value[a] = wrap_angle(s.value[a]);
    }
    samples.push_back(s);
  }

  auto emit_beam = [&](double t, int beam_id) {
    const TruthState ts = truth.state_at(t);
    const Eigen::Vector3d dir_body = beam_direction(beam_id, scenario.beam_tilt);
    const Eigen::Vector3d dir_world = rotation(ts.pose) * dir_body;
    const double range = raycast_range(scenario.scene, ts.pose.position(), dir_world);
    if (!std::isfinite(range)) return;
    SensorSample s;
    s.timestamp = t;
    s.tag = SensorTag::kRangeBeam;
    s.value = dir_body;
    s.beam_id = beam_id;
    s.range = range + waves.depth_ripple(t) + scenario.noise.range_std * g_beam();
    if (s.range <= 0.0) return;
    samples.push_back(s);
  };

  for (double t : timestamps(scenario.rates.dvl)) {
    for (int beam = 0; beam < 4; ++beam) emit_beam(t, beam);
  }
  for (double t : timestamps(scenario.rates.sonar)) emit_beam(t, 4);

  std::stable_sort(samples.begin(), samples.end(),
                   [](const SensorSample& a, const SensorSample& b) {
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     if (a.tag != b.tag) return static_cast<int>(a.tag) < static_cast<int>(b.tag);
                     return a.beam_id < b.beam_id;
                   });
  return samples;
}

std::vector<SensorSample> inject_velocity_offset(
    std::span<const SensorSample> stream, const Eigen::Vector3d& offset,
    bool cruise_only, std::pair<double, double> cruise_window) {
  std::vector<SensorSample> out(stream.begin(), stream.end());
  for (SensorSample& s : out) {
    if (s.tag != SensorTag::kDvlVelocity) continue;
    if (cruise_only && (s.timestamp < cruise_window.first ||
                        s.timestamp > cruise_window.second)) {
      continue;
    }
    s.value += offset;
  }
  return out;
}

std::vector<Eigen::Vector3d> scene_truth_cloud(const FloorScene& scene,
                                               const Eigen::Vector2d& xy_min,
                                               const Eigen::Vector2d& xy_max,
                                               double spacing) {
  if (!(spacing > 0.0)) throw ConfigError("truth cloud spacing must be > 0");
  std::vector<Eigen::Vector3d> cloud;
  const auto inside_box = [&](double x, double y, const BoxObstacle& b) {
    return x >= b.x0 && x <= b.x1 && y >= b.y0 && y <= b.y1;
  };

  const auto nx = static_cast<int>(std::floor((xy_max.x() - xy_min.x()) / spacing));
  const auto ny = static_cast<int>(std::floor((xy_max.y() - xy_min.y()) / spacing));
  for (int ix = 0; ix <= nx; ++ix) {
    for (int iy = 0; iy <= ny; ++iy) {
      const double x = xy_min.x() + ix * spacing;
      const double y = xy_min.y() + iy * spacing;
      bool covered = false;
      for (const BoxObstacle& b : scene.boxes) {
        if (inside_box(x, y, b)) {
          covered = true;
          break;
        }
      }
      if (!covered) cloud.emplace_back(x, y, scene.floor_z);
    }
  }

  for (const BoxObstacle& b : scene.boxes) {
    for (double x = b.x0; x <= b.x1 + 1e-12; x += spacing) {
      for (double y = b.y0; y <= b.y1 + 1e-12; y += spacing) {
        cloud.emplace_back(x, y, b.top_z);
      }
    }
    for (double z = b.top_z; z <= scene.floor_z + 1e-12; z += spacing) {
      for (double x = b.x0; x <= b.x1 + 1e-12; x += spacing) {
        cloud.emplace_back(x, b.y0, z);
        cloud.emplace_back(x, b.y1, z);
      }
      for (double y = b.y0; y <= b.y1 + 1e-12; y += spacing) {
        cloud.emplace_back(b.x0, y, z);
        cloud.emplace_back(b.x1, y, z);
      }
    }
  }
  return cloud;
}

std::vector<RangeBeam> extract_range_beams(std::span<const SensorSample> samples) {
  std::vector<RangeBeam> beams;
  for (const SensorSample& s : samples) {
    if (s.tag != SensorTag::kRangeBeam) continue;
    RangeBeam beam;
    beam.timestamp = s.timestamp;
    beam.beam_id = s.beam_id;
    beam.range = s.range;
    beam.direction = s.value;
    beams.push_back(beam);
  }
  return beams;
}

}  // namespace wavenav
