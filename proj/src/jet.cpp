#include "jetlag/jet.hpp"

namespace jetlag {

JetPoint make_point(Dims dims, std::vector<double> t, std::vector<double> x,
                    std::vector<double> v) {
  if (t.size() != dims.p || x.size() != dims.n || v.size() != dims.vertical()) {
    throw DimensionError("jet point coordinates do not match dims");
  }
  JetPoint pt;
  pt.dims = dims;
  pt.t = std::move(t);
  pt.x = std::move(x);
  pt.v = std::move(v);
  return pt;
}

std::size_t Coord::flat(const Dims& d) const {
  switch (kind) {
    case Kind::Time: return alpha;
    case Kind::Space: return d.p + i;
    default: return d.p + d.n + d.vidx(i, alpha);
  }
}

Coord Coord::from_flat(const Dims& d, std::size_t k) {
  if (k < d.p) return time(k);
  k -= d.p;
  if (k < d.n) return space(k);
  k -= d.n;
  return velocity(k / d.p, k % d.p);
}

std::string Coord::name() const {
  switch (kind) {
    case Kind::Time: return "t" + std::to_string(alpha + 1);
    case Kind::Space: return "x" + std::to_string(i + 1);
    default: return "v" + std::to_string(i + 1) + "_" + std::to_string(alpha + 1);
  }
}

}  // namespace jetlag
