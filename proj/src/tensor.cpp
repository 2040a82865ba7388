#include "jetlag/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace jetlag {

std::string to_string(SlotKind k) {
  switch (k) {
    case SlotKind::TemporalUpper: return "TemporalUpper";
    case SlotKind::TemporalLower: return "TemporalLower";
    case SlotKind::SpatialUpper: return "SpatialUpper";
    case SlotKind::SpatialLower: return "SpatialLower";
    case SlotKind::VerticalUpper: return "VerticalUpper";
    case SlotKind::VerticalLower: return "VerticalLower";
  }
  return "?";
}

bool IndexSlot::is_upper() const {
  return kind == SlotKind::TemporalUpper || kind == SlotKind::SpatialUpper ||
         kind == SlotKind::VerticalUpper;
}

int IndexSlot::family() const {
  switch (kind) {
    case SlotKind::TemporalUpper:
    case SlotKind::TemporalLower: return 0;
    case SlotKind::SpatialUpper:
    case SlotKind::SpatialLower: return 1;
    default: return 2;
  }
}

namespace {
std::size_t product(const std::vector<IndexSlot>& slots) {
  std::size_t n = 1;
  for (const auto& s : slots) n *= s.extent;
  return n;
}
}  // namespace

DTensor::DTensor(std::vector<IndexSlot> slots) : slots_(std::move(slots)) {
  for (const auto& s : slots_) {
    if (s.extent == 0) throw DimensionError("tensor slot " + to_string(s.kind) + " has zero extent");
  }
  data_.assign(product(slots_), 0.0);
}

DTensor::DTensor(std::vector<IndexSlot> slots, std::vector<double> data) : DTensor(std::move(slots)) {
  if (data.size() != data_.size()) throw DimensionError("tensor data length does not match slot extents");
  data_ = std::move(data);
}

std::size_t DTensor::offset(std::span<const std::size_t> idx) const {
  if (idx.size() != slots_.size()) throw DimensionError("tensor index has wrong rank");
  std::size_t off = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= slots_[k].extent) throw DimensionError("tensor index out of range");
    off = off * slots_[k].extent + idx[k];
  }
  return off;
}

std::vector<std::size_t> DTensor::unravel(std::size_t k) const {
  std::vector<std::size_t> idx(slots_.size());
  for (std::size_t s = slots_.size(); s-- > 0;) {
    idx[s] = k % slots_[s].extent;
    k /= slots_[s].extent;
  }
  return idx;
}

double DTensor::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

DTensor tensor_new(std::vector<IndexSlot> slots) {
  if (slots.empty()) throw DimensionError("tensor needs at least one slot");
  return DTensor(std::move(slots));
}

DTensor contract(const DTensor& a, const DTensor& b,
                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<bool> used_a(a.rank(), false), used_b(b.rank(), false);
  for (auto [sa, sb] : pairs) {
    if (sa >= a.rank() || sb >= b.rank()) throw ContractionError("contraction slot out of range");
    if (used_a[sa] || used_b[sb]) throw ContractionError("slot contracted twice");
    const auto& x = a.slots()[sa];
    const auto& y = b.slots()[sb];
    if (x.family() != y.family() || x.is_upper() == y.is_upper()) {
      throw ContractionError("cannot contract " + to_string(x.kind) + " with " + to_string(y.kind));
    }
    if (x.extent != y.extent) throw ContractionError("contracted slots differ in extent");
    used_a[sa] = used_b[sb] = true;
  }
  std::vector<IndexSlot> out_slots;
  std::vector<std::size_t> free_a, free_b;
  for (std::size_t s = 0; s < a.rank(); ++s)
    if (!used_a[s]) {
      out_slots.push_back(a.slots()[s]);
      free_a.push_back(s);
    }
  for (std::size_t s = 0; s < b.rank(); ++s)
    if (!used_b[s]) {
      out_slots.push_back(b.slots()[s]);
      free_b.push_back(s);
    }
  // A full contraction yields a scalar, stored as a rank-1 tensor of extent 1.
  if (out_slots.empty()) out_slots.push_back({SlotKind::SpatialLower, 1});
  DTensor out(out_slots);

  std::size_t nsum = 1;
  for (auto [sa, sb] : pairs) nsum *= a.slots()[sa].extent;
  std::vector<std::size_t> ia(a.rank()), ib(b.rank());
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto oidx = out.unravel(k);
    std::size_t pos = 0;
    for (std::size_t s : free_a) ia[s] = oidx[pos++];
    for (std::size_t s : free_b) ib[s] = oidx[pos++];
    double acc = 0.0;
    for (std::size_t m = 0; m < nsum; ++m) {
      std::size_t rem = m;
      for (std::size_t q = pairs.size(); q-- > 0;) {
        std::size_t ext = a.slots()[pairs[q].first].extent;
        ia[pairs[q].first] = ib[pairs[q].second] = rem % ext;
        rem /= ext;
      }
      acc += a.get(ia) * b.get(ib);
    }
    out.data()[k] = acc;
  }
  return out;
}

DTensor operator+(const DTensor& a, const DTensor& b) {
  if (a.slots() != b.slots()) throw DimensionError("tensor sum requires identical slots");
  DTensor r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.data()[k] += b.data()[k];
  return r;
}

DTensor operator*(double s, const DTensor& a) {
  DTensor r = a;
  for (double& x : r.data()) x *= s;
  return r;
}

DTensor delta(const IndexSlot& upper, const IndexSlot& lower) {
  DTensor d({upper, lower});
  for (std::size_t k = 0; k < upper.extent; ++k) d.at({k, k}) = 1.0;
  return d;
}

}  // namespace jetlag
