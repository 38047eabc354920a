#include "wavenav/sensors.hpp"

#include <cmath>

namespace wavenav {

const char* to_string(SensorTag tag) {
  switch (tag) {
    case SensorTag::kBarometer: return "barometer";
    case SensorTag::kDvlVelocity: return "dvl_vel";
    case SensorTag::kImuGyro: return "imu_gyro";
    case SensorTag::kDrOrientation: return "dr_orient";
    case SensorTag::kRangeBeam: return "range_beam";
  }
  return "unknown";
}

bool parse_sensor_tag(const std::string& text, SensorTag* out) {
  if (text == "barometer") *out = SensorTag::kBarometer;
  else if (text == "dvl_vel") *out = SensorTag::kDvlVelocity;
  else if (text == "imu_gyro") *out = SensorTag::kImuGyro;
  else if (text == "dr_orient") *out = SensorTag::kDrOrientation;
  else if (text == "range_beam") *out = SensorTag::kRangeBeam;
  else return false;
  return true;
}

bool SensorSample::finite() const {
  return std::isfinite(timestamp) && value.allFinite() && std::isfinite(range);
}

}  // namespace wavenav
