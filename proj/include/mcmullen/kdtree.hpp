// Nearest-neighbour queries on planar point sets.
#pragma once

#include "mcmullen/core.hpp"

#include <vector>

namespace mcm {

class PointIndex {
 public:
  explicit PointIndex(std::vector<cplx> points);
  bool empty() const { return pts_.empty(); }
  size_t size() const { return pts_.size(); }
  /// Distance to the nearest indexed point and its index.
  std::pair<double, size_t> nearest(cplx q) const;

 private:
  struct Node {
    int lo, hi;  // range in order_
    int left = -1, right = -1;
    int axis = 0;
    double split = 0;
    double xmin, xmax, ymin, ymax;
  };
  int build(int lo, int hi);
  void search(int node, cplx q, double& best2, size_t& best) const;

  std::vector<cplx> pts_;
  std::vector<size_t> order_;
  std::vector<Node> nodes_;
};

/// Symmetric Hausdorff distance of two finite sets. Throws std::invalid_argument on empty input.
double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace mcm
