#pragma once

#include <utility>
#include <vector>

#include "tgk/linalg.hpp"

namespace tgk {

// One affine inequality l(mu) = <normal, mu> - offset >= 0.
struct Facet {
  Vec normal;
  double offset = 0.0;
};

// Convex polytope P = { mu : l_k(mu) >= 0 for all k } with nonempty bounded
// interior. Validation runs LP probes along +-mu_i for boundedness and a
// Chebyshev-center LP for interior nonemptiness; both results are cached.
class MomentPolytope {
 public:
  MomentPolytope(int dim, std::vector<Facet> facets);

  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }

  double ell(int k, const Vec& mu) const {
    return facets_[k].normal.dot(mu) - facets_[k].offset;
  }
  double min_ell(const Vec& mu) const;
  bool is_interior(const Vec& mu, double min_margin = 0.0) const {
    return min_ell(mu) > min_margin;
  }

  const Vec& chebyshev_center() const { return center_; }
  double inradius() const { return inradius_; }
  // Componentwise (lo, hi) of the bounding box, from the LP probes.
  const std::pair<Vec, Vec>& bounding_box() const { return box_; }

 private:
  int dim_;
  std::vector<Facet> facets_;
  Vec center_;
  double inradius_ = 0.0;
  std::pair<Vec, Vec> box_;
};

// Tensor-product evaluation grid kept strictly inside the polytope:
// `resolution` points per axis spanning the bounding box shrunk by `margin`
// (fraction of each axis extent), then filtered so every emitted point
// satisfies l_k(mu) >= margin * inradius.
struct GridSpec {
  int resolution = 0;
  double margin = 0.0;  // must lie in (0, 0.5)
};

std::vector<Vec> interior_grid(const MomentPolytope& polytope, const GridSpec& spec);

// Convenience constructors used all over the tests.
MomentPolytope box_polytope(const Vec& lo, const Vec& hi);
MomentPolytope segment_polytope(double lo, double hi);

}  // namespace tgk
