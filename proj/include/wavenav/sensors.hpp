#pragma once

#include <string>

#include <Eigen/Dense>

namespace wavenav {

enum class SensorTag {
  kBarometer,
  kDvlVelocity,
  kImuGyro,
  kDrOrientation,
  kRangeBeam,
};

const char* to_string(SensorTag tag);

/// Parses a sensor tag from its log-file spelling. Returns false on an
/// unknown tag.
bool parse_sensor_tag(const std::string& text, SensorTag* out);

/// One timestamped measurement. `value` holds the payload:
///  - barometer: (depth, 0, 0)
///  - dvl_vel:   (u, v, w)
///  - imu_gyro:  (p, q, r)
///  - dr_orient: (roll, pitch, yaw)
///  - range_beam: unit beam direction in the body frame, plus beam_id/range.
struct SensorSample {
  double timestamp = 0.0;
  SensorTag tag = SensorTag::kBarometer;
  Eigen::Vector3d value = Eigen::Vector3d::Zero();
  int beam_id = -1;     // range_beam only: 0-3 DVL transducers, 4 sonar
  double range = 0.0;   // range_beam only

  bool finite() const;
};

}  // namespace wavenav
