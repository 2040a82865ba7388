#include "jetlag/report.hpp"

#include <cmath>
#include <cstdio>

namespace jetlag {

using nlohmann::json;

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write(const json& j, int indent, int depth, std::string& out) {
  auto newline = [&](int d) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(k).dump();
        out += indent > 0 ? ": " : ":";
        write(v, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      out += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += flat && indent > 0 ? ", " : ",";
        if (!flat) newline(depth + 1);
        write(j[k], indent, depth + 1, out);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_number(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

std::string slot_name(const IndexSlot& s) {
  switch (s.kind) {
    case SlotKind::TemporalUpper: return "TU";
    case SlotKind::TemporalLower: return "TL";
    case SlotKind::SpatialUpper: return "SU";
    case SlotKind::SpatialLower: return "SL";
    case SlotKind::VerticalUpper: return "VU";
    case SlotKind::VerticalLower: return "VL";
  }
  return "?";
}

}  // namespace

std::string write_json(const json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  out += '\n';
  return out;
}

std::string csv_row(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ',';
    out += format_number(values[k]);
  }
  out += '\n';
  return out;
}

json tensor_json(const DTensor& t) {
  json valence = json::array(), shape = json::array();
  for (const auto& s : t.slots()) {
    valence.push_back(slot_name(s));
    shape.push_back(s.extent);
  }
  return {{"valence", valence}, {"shape", shape}, {"data", t.data()}};
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json point_json(const JetPoint& pt) { return {{"t", pt.t}, {"x", pt.x}, {"v", pt.v}}; }

}  // namespace jetlag
