#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "paralab/cohom.hpp"
#include "paralab/numeric.hpp"

namespace paralab::io {

using nlohmann::json;

// "x", "x,y" or "x+yi" / "x-yi".
Complex parse_complex(const std::string& s);
// Semicolon-separated complex numbers.
std::vector<Complex> parse_points(const std::string& s);
// "lo:hi".
std::pair<double, double> parse_range(const std::string& s);
// Polynomial in z: "-z", "-pi*z", "1", "z^2 - 0.5*pi*z + 1".
Rhs parse_rhs(const std::string& s);
// "+", "attracting", "-", "repelling".
PetalKind parse_side(const std::string& s);

// Full-precision decimal strings keep JSON lossless.
std::string num(const Real& x);
json to_json(const Complex& z);
json to_json(const std::vector<Complex>& v);

// RFC 4180 row with full-precision fields.
void csv_row(std::ostream& os, const std::vector<std::string>& fields);

json load_config(const std::string& path);

}  // namespace paralab::io
