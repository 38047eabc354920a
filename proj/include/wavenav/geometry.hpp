#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace wavenav {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle into (-pi, pi]. Idempotent: values already in range are
/// returned bit-identically.
double wrap_angle(double a);

/// 6-DOF pose in the world frame. Angles are stored wrapped to (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  Eigen::Vector3d position() const { return {x, y, z}; }
  Eigen::Vector3d angles() const { return {roll, pitch, yaw}; }

  /// Returns a copy with all three angles wrapped.
  Pose wrapped() const;
};

/// Body-frame twist: linear velocity (u, v, w) and angular rates (p, q, r).
struct Twist {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;

  Eigen::Vector3d linear() const { return {u, v, w}; }
  Eigen::Vector3d angular() const { return {p, q, r}; }
};

/// Plain Gaussian container used for noise blocks and belief snapshots.
struct Gaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Body-to-world rotation from intrinsic Z-Y-X (yaw, pitch, roll) Euler
/// angles. Poses within 0.05 rad of the gimbal singularity increment
/// gimbal_proximity_count().
Eigen::Matrix3d euler_to_rotation(double roll, double pitch, double yaw);

/// Rotation of a pose's orientation block.
Eigen::Matrix3d rotation(const Pose& pose);

/// Rotates a body-frame vector into the world frame.
Eigen::Vector3d body_to_world(const Pose& pose, const Eigen::Vector3d& v_body);

/// Diagnostic counter incremented whenever a rotation is built with
/// |pitch| > pi/2 - 0.05.
std::atomic<std::uint64_t>& gimbal_proximity_count();

/// Symmetry check: max |A - A^T| entry against a relative tolerance.
bool is_symmetric(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

/// PSD check: min eigenvalue >= -tol_scale * trace.
bool is_positive_semidefinite(const Eigen::MatrixXd& m, double tol_scale = 1e-9);

}  // namespace wavenav
