#include "jetlag/metric.hpp"

#include <sstream>

namespace jetlag {

ExprMatrix::ExprMatrix(std::size_t rows, std::size_t cols, std::vector<dsl::Expr> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) throw DimensionError("expression matrix has the wrong number of entries");
}

ExprMatrix ExprMatrix::parse(const std::vector<std::vector<std::string>>& text, const Dims& dims) {
  if (text.empty()) throw DimensionError("expression matrix is empty");
  const std::size_t cols = text.front().size();
  std::vector<dsl::Expr> entries;
  for (const auto& row : text) {
    if (row.size() != cols) throw DimensionError("expression matrix rows differ in length");
    for (const auto& cell : row) entries.push_back(dsl::parse(cell, dims));
  }
  return ExprMatrix(text.size(), cols, std::move(entries));
}

bool ExprMatrix::uses(dsl::Op var_kind) const {
  for (const auto& e : entries_)
    if (e.uses(var_kind)) return true;
  return false;
}

std::vector<std::vector<std::string>> ExprMatrix::text() const {
  std::vector<std::vector<std::string>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r].push_back(dsl::format(at(r, c)));
  return out;
}

double asymmetry(const Matrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = i + 1; j < m.cols; ++j) worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

TemporalMetric TemporalMetric::flat(std::size_t p, Signature sig) {
  if (p == 0) throw DimensionError("temporal dimension must be positive");
  if (sig.pos + sig.neg != static_cast<int>(p) || sig.pos < 0 || sig.neg < 0) {
    throw DimensionError("flat temporal metric signature must sum to p");
  }
  TemporalMetric h;
  h.p_ = p;
  h.flat_ = true;
  h.signature_ = sig;
  return h;
}

TemporalMetric TemporalMetric::from_entries(ExprMatrix entries, Signature declared) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw DimensionError("temporal metric must be a nonempty square matrix");
  }
  if (entries.uses(dsl::Op::VarX) || entries.uses(dsl::Op::VarV)) {
    throw DimensionError("temporal metric entries may depend on t only");
  }
  if (declared.pos + declared.neg != static_cast<int>(entries.rows())) {
    throw DimensionError("declared temporal signature must sum to p");
  }
  TemporalMetric h;
  h.p_ = entries.rows();
  h.flat_ = false;
  h.signature_ = declared;
  h.entries_ = std::move(entries);
  return h;
}

Matrix TemporalMetric::raw(const std::vector<double>& t) const {
  if (flat_) return lower(t);
  JetPoint pt(Dims(p_, 1));
  pt.t = t;
  return entries_.eval(pt);
}

Matrix invert_metric(const Matrix& m) {
  if (m.rows != m.cols || m.rows == 0) throw DimensionError("metric must be a nonempty square matrix");
  return inverse(m);
}

DTensor h_christoffel_tensor(const TemporalMetric& h, const std::vector<double>& t) {
  Dims d(h.p(), 1);
  return DTensor({IndexSlot::temporal_upper(d), IndexSlot::temporal_lower(d), IndexSlot::temporal_lower(d)},
                 h_christoffel(h, t));
}

DTensor h_curvature_tensor(const TemporalMetric& h, const std::vector<double>& t) {
  Dims d(h.p(), 1);
  return DTensor({IndexSlot::temporal_upper(d), IndexSlot::temporal_lower(d), IndexSlot::temporal_lower(d),
                  IndexSlot::temporal_lower(d)},
                 h_curvature(h, t));
}

DTensor g_christoffel_tensor(const SpatialMetricField& g, const JetPoint& pt) {
  const Dims& d = pt.dims;
  return DTensor({IndexSlot::spatial_upper(d), IndexSlot::spatial_lower(d), IndexSlot::spatial_lower(d)},
                 spatial_christoffel(g, pt));
}

DTensor g_curvature_tensor(const SpatialMetricField& g, const JetPoint& pt) {
  const Dims& d = pt.dims;
  return DTensor({IndexSlot::spatial_upper(d), IndexSlot::spatial_lower(d), IndexSlot::spatial_lower(d),
                  IndexSlot::spatial_lower(d)},
                 spatial_curvature(g, pt));
}

TemporalMetricCheck check_temporal_metric(const TemporalMetric& h, const std::vector<std::vector<double>>& samples) {
  TemporalMetricCheck out;
  for (const auto& t : samples) {
    Matrix raw = h.raw(t);
    out.max_asymmetry = std::max(out.max_asymmetry, asymmetry(raw));
    Matrix m = h.lower(t);
    double det = determinant(m);
    out.min_abs_det = std::min(out.min_abs_det, std::abs(det));
    std::ostringstream where;
    where << "t = (";
    for (std::size_t a = 0; a < t.size(); ++a) where << (a ? ", " : "") << t[a];
    where << ")";
    if (!(std::abs(det) > degeneracy_threshold(m))) {
      out.ok = false;
      out.diagnostic = "temporal metric degenerate at " + where.str();
      return out;
    }
    Signature s = signature_of(m);
    if (s.pos != h.declared_signature().pos || s.neg != h.declared_signature().neg) {
      out.ok = false;
      out.diagnostic = "temporal metric signature (" + std::to_string(s.pos) + "," + std::to_string(s.neg) +
                       ") differs from declared at " + where.str();
      return out;
    }
  }
  return out;
}

}  // namespace jetlag
