#include "jetlag/space.hpp"

namespace jetlag {

std::string to_string(NonlinearKind k) {
  switch (k) {
    case NonlinearKind::Canonical: return "canonical";
    case NonlinearKind::MetricPair: return "metric-pair";
    case NonlinearKind::Zero: return "zero";
  }
  return "?";
}

Matrix sasakian_metric(const Space& space, const JetPoint& pt) {
  const Dims& d = space.dims();
  const std::size_t p = d.p, n = d.n;
  Matrix hl = space.h().lower(pt.t);
  Matrix hu = space.h().upper(pt.t);
  Matrix g = space.g(pt);
  Matrix out(d.total(), d.total());
  for (std::size_t a = 0; a < p; ++a)
    for (std::size_t b = 0; b < p; ++b) out(a, b) = hl(a, b);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(p + i, p + j) = g(i, j);
  const std::size_t off = p + n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < p; ++b) out(off + d.vidx(i, a), off + d.vidx(j, b)) = hu(a, b) * g(i, j);
  return out;
}

}  // namespace jetlag
