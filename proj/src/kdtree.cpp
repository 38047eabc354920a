#include "wavenav/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wavenav {

KdTree3::KdTree3(std::span<const Eigen::Vector3d> points)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) return;
  std::vector<std::size_t> indices(points_.size());
  std::iota(indices.begin(), indices.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(indices, 0);
}

int KdTree3::build(std::span<std::size_t> indices, int depth) {
  if (indices.empty()) return -1;
  const int axis = depth % 3;
  const std::size_t mid = indices.size() / 2;
  std::nth_element(indices.begin(), indices.begin() + mid, indices.end(),
                   [&](std::size_t a, std::size_t b) {
                     return points_[a][axis] < points_[b][axis];
                   });
  Node node;
  node.axis = axis;
  node.point = indices[mid];
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  const int left = build(indices.subspan(0, mid), depth + 1);
  const int right = build(indices.subspan(mid + 1), depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree3::search(int node, const Eigen::Vector3d& query, std::size_t* best,
                     double* best_sq) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const double d_sq = (points_[n.point] - query).squaredNorm();
  if (d_sq < *best_sq) {
    *best_sq = d_sq;
    *best = n.point;
  }
  const double delta = query[n.axis] - points_[n.point][n.axis];
  const int near = delta < 0.0 ? n.left : n.right;
  const int far = delta < 0.0 ? n.right : n.left;
  search(near, query, best, best_sq);
  if (delta * delta < *best_sq) search(far, query, best, best_sq);
}

std::pair<std::size_t, double> KdTree3::nearest(const Eigen::Vector3d& query) const {
  if (empty()) throw std::logic_error("nearest query on an empty KdTree3");
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  search(root_, query, &best, &best_sq);
  return {best, best_sq};
}

double KdTree3::nearest_distance(const Eigen::Vector3d& query) const {
  return std::sqrt(nearest(query).second);
}

}  // namespace wavenav
