#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jetlag/jet.hpp"

namespace jetlag {

class ContractionError : public Error {
 public:
  using Error::Error;
};

enum class SlotKind {
  TemporalUpper,
  TemporalLower,
  SpatialUpper,
  SpatialLower,
  VerticalUpper,  // x^i_alpha-like: spatial upper x temporal lower
  VerticalLower,  // d/dx^i_alpha-like: spatial lower x temporal upper
};

std::string to_string(SlotKind k);

struct IndexSlot {
  SlotKind kind = SlotKind::SpatialLower;
  std::size_t extent = 0;

  static IndexSlot temporal_upper(const Dims& d) { return {SlotKind::TemporalUpper, d.p}; }
  static IndexSlot temporal_lower(const Dims& d) { return {SlotKind::TemporalLower, d.p}; }
  static IndexSlot spatial_upper(const Dims& d) { return {SlotKind::SpatialUpper, d.n}; }
  static IndexSlot spatial_lower(const Dims& d) { return {SlotKind::SpatialLower, d.n}; }
  static IndexSlot vertical_upper(const Dims& d) { return {SlotKind::VerticalUpper, d.vertical()}; }
  static IndexSlot vertical_lower(const Dims& d) { return {SlotKind::VerticalLower, d.vertical()}; }

  bool is_upper() const;
  /// 0 temporal, 1 spatial, 2 vertical.
  int family() const;

  friend bool operator==(const IndexSlot&, const IndexSlot&) = default;
};

/// Dense row-major multi-index array with declared slot valences.
/// Vertical slots take the flattened index i * p + alpha.
class DTensor {
 public:
  DTensor() = default;
  explicit DTensor(std::vector<IndexSlot> slots);
  DTensor(std::vector<IndexSlot> slots, std::vector<double> data);

  const std::vector<IndexSlot>& slots() const { return slots_; }
  std::size_t rank() const { return slots_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  std::size_t offset(std::span<const std::size_t> idx) const;
  double get(std::span<const std::size_t> idx) const { return data_[offset(idx)]; }
  void set(std::span<const std::size_t> idx, double value) { data_[offset(idx)] = value; }
  double operator()(std::initializer_list<std::size_t> idx) const {
    return get(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  double& at(std::initializer_list<std::size_t> idx) {
    return data_[offset(std::span<const std::size_t>(idx.begin(), idx.size()))];
  }

  /// Multi-index of flat position k.
  std::vector<std::size_t> unravel(std::size_t k) const;

  double max_abs() const;

 private:
  std::vector<IndexSlot> slots_;
  std::vector<double> data_;
};

/// Zero tensor with the given slots. Throws DimensionError on an empty slot
/// list or a zero extent.
DTensor tensor_new(std::vector<IndexSlot> slots);

/// Sum over the paired slots (slot of a, slot of b). Result slots are the
/// unpaired slots of a followed by those of b.
DTensor contract(const DTensor& a, const DTensor& b,
                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

DTensor operator+(const DTensor& a, const DTensor& b);
DTensor operator*(double s, const DTensor& a);

/// Kronecker delta with slots (upper, lower) of the given family.
DTensor delta(const IndexSlot& upper, const IndexSlot& lower);

}  // namespace jetlag
