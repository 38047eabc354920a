#include "wavenav/geometry.hpp"

namespace wavenav {

double wrap_angle(double a) {
  // Early return keeps wrap(wrap(a)) == wrap(a) exact.
  if (a > -kPi && a <= kPi) return a;
  double r = std::fmod(a + kPi, 2.0 * kPi);
  if (r <= 0.0) r += 2.0 * kPi;
  return r - kPi;
}

Pose Pose::wrapped() const {
  Pose p = *this;
  p.roll = wrap_angle(p.roll);
  p.pitch = wrap_angle(p.pitch);
  p.yaw = wrap_angle(p.yaw);
  return p;
}

std::atomic<std::uint64_t>& gimbal_proximity_count() {
  static std::atomic<std::uint64_t> count{0};
  return count;
}

Eigen::Matrix3d euler_to_rotation(double roll, double pitch, double yaw) {
  if (std::abs(pitch) > kPi / 2.0 - 0.05) {
    gimbal_proximity_count().fetch_add(1, std::memory_order_relaxed);
  }
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  Eigen::Matrix3d r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
       sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
       -sp, cp * sr, cp * cr;
  return r;
}

Eigen::Matrix3d rotation(const Pose& pose) {
  return euler_to_rotation(pose.roll, pose.pitch, pose.yaw);
}

Eigen::Vector3d body_to_world(const Pose& pose, const Eigen::Vector3d& v_body) {
  return rotation(pose) * v_body;
}

bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool is_positive_semidefinite(const Eigen::MatrixXd& m, double tol_scale) {
  if (m.rows() != m.cols()) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  if (es.info() != Eigen::Success) return false;
  const double tol = tol_scale * std::max(1.0, std::abs(m.trace()));
  return es.eigenvalues().minCoeff() >= -tol;
}

}  // namespace wavenav
