#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace wavenav {

/// Static 3D KD-tree for nearest-neighbor queries over a point set.
class KdTree3 {
 public:
  KdTree3() = default;
  explicit KdTree3(std::span<const Eigen::Vector3d> points);

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }

  /// Index and squared distance of the nearest stored point.
  std::pair<std::size_t, double> nearest(const Eigen::Vector3d& query) const;

  double nearest_distance(const Eigen::Vector3d& query) const;

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int axis = 0;
    std::size_t point = 0;
  };

  int build(std::span<std::size_t> indices, int depth);
  void search(int node, const Eigen::Vector3d& query, std::size_t* best,
              double* best_sq) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace wavenav
