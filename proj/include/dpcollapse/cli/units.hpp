#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpc::cli {

/// Bad user input; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "2.46A", "2.46Å", "25um", "25μm", "3nm", "1e-4m" into meters.
/// A bare number is rejected: every length must say what it is measured in.
double parse_length(std::string_view text, std::string_view field);

/// A separation given either as an absolute length or as a multiple of the
/// longest lattice side ("4L").
struct Separation {
  bool relative = true;
  double value = 4.0;  // multiple of L, or meters

  double resolve(double side) const { return relative ? value * side : value; }
};

Separation parse_separation(std::string_view text, std::string_view field);

/// Renders meters with the given unit suffix, e.g. format_length(2.46e-10, "A").
std::string format_length(double meters, std::string_view unit);

}  // namespace dpc::cli
