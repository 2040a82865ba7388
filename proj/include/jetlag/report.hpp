#pragma once

// JSON and CSV emission. Every floating-point value is printed with 17
// significant digits; object keys come out sorted.

#include <string>
#include <vector>

#include <json.hpp>

#include "jetlag/jet.hpp"
#include "jetlag/linalg.hpp"
#include "jetlag/tensor.hpp"

namespace jetlag {

/// %.17g, or "null" for non-finite values.
std::string format_number(double v);

std::string write_json(const nlohmann::json& j, int indent = 2);

std::string csv_row(const std::vector<double>& values);

nlohmann::json tensor_json(const DTensor& t);
nlohmann::json matrix_json(const Matrix& m);
nlohmann::json point_json(const JetPoint& pt);

}  // namespace jetlag
