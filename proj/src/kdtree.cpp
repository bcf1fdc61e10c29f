#include "mcmullen/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mcm {

namespace {
constexpr int kLeafSize = 16;
}

PointIndex::PointIndex(std::vector<cplx> points) : pts_(std::move(points)) {
  order_.resize(pts_.size());
  std::iota(order_.begin(), order_.end(), size_t(0));
  if (!pts_.empty()) build(0, int(pts_.size()));
}

int PointIndex::build(int lo, int hi) {
  Node nd;
  nd.lo = lo;
  nd.hi = hi;
  nd.xmin = nd.ymin = std::numeric_limits<double>::infinity();
  nd.xmax = nd.ymax = -nd.xmin;
  for (int i = lo; i < hi; ++i) {
    const cplx z = pts_[order_[i]];
    nd.xmin = std::min(nd.xmin, z.real());
    nd.xmax = std::max(nd.xmax, z.real());
    nd.ymin = std::min(nd.ymin, z.imag());
    nd.ymax = std::max(nd.ymax, z.imag());
  }
  const int id = int(nodes_.size());
  nodes_.push_back(nd);
  if (hi - lo <= kLeafSize) return id;
  const int axis = (nd.xmax - nd.xmin) >= (nd.ymax - nd.ymin) ? 0 : 1;
  const int mid = (lo + hi) / 2;
  auto key = [&](size_t i) { return axis == 0 ? pts_[i].real() : pts_[i].imag(); };
  std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                   [&](size_t a, size_t b) { return key(a) < key(b); });
  const int l = build(lo, mid);
  const int r = build(mid, hi);
  nodes_[id].axis = axis;
  nodes_[id].split = key(order_[mid]);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void PointIndex::search(int id, cplx q, double& best2, size_t& best) const {
  const Node& nd = nodes_[id];
  const double dx = std::max({nd.xmin - q.real(), 0.0, q.real() - nd.xmax});
  const double dy = std::max({nd.ymin - q.imag(), 0.0, q.imag() - nd.ymax});
  if (dx * dx + dy * dy >= best2) return;
  if (nd.left < 0) {
    for (int i = nd.lo; i < nd.hi; ++i) {
      const double d2 = std::norm(pts_[order_[i]] - q);
      if (d2 < best2) {
        best2 = d2;
        best = order_[i];
      }
    }
    return;
  }
  const double v = nd.axis == 0 ? q.real() : q.imag();
  const int first = v < nd.split ? nd.left : nd.right;
  const int second = v < nd.split ? nd.right : nd.left;
  search(first, q, best2, best);
  search(second, q, best2, best);
}

std::pair<double, size_t> PointIndex::nearest(cplx q) const {
  if (pts_.empty()) throw std::logic_error("PointIndex::nearest on an empty index");
  double best2 = std::numeric_limits<double>::infinity();
  size_t best = 0;
  search(0, q, best2, best);
  return {std::sqrt(best2), best};
}

double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty point set");
  const PointIndex ia(a), ib(b);
  double d = 0;
  for (cplx z : a) d = std::max(d, ib.nearest(z).first);
  for (cplx z : b) d = std::max(d, ia.nearest(z).first);
  return d;
}

}  // namespace mcm
