#include "dpcollapse/cli/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace dpc::cli {

namespace {

struct Unit {
  std::string_view suffix;
  double meters;
};

// Longest suffixes first so "nm" is not read as "m".
constexpr std::array<Unit, 7> kUnits{{
    {"\xC3\x85", 1e-10},   // Å
    {"\xCE\xBCm", 1e-6},   // μm
    {"\xC2\xB5m", 1e-6},   // µm (micro sign)
    {"um", 1e-6},
    {"nm", 1e-9},
    {"A", 1e-10},
    {"m", 1.0},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view field, std::string_view original) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(std::string(field) + ": cannot read a number from '" + std::string(original) + "'");
  }
  return value;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

double parse_length(std::string_view text, std::string_view field) {
  const std::string_view s = trim(text);
  for (const auto& unit : kUnits) {
    if (ends_with(s, unit.suffix) && s.size() > unit.suffix.size()) {
      return parse_number(s.substr(0, s.size() - unit.suffix.size()), field, text) * unit.meters;
    }
  }
  throw ConfigError(std::string(field) + ": length '" + std::string(text) +
                    "' needs a unit suffix (A, nm, um, m)");
}

Separation parse_separation(std::string_view text, std::string_view field) {
  const std::string_view s = trim(text);
  Separation sep;
  if (ends_with(s, "L") && s.size() > 1) {
    sep.relative = true;
    sep.value = parse_number(s.substr(0, s.size() - 1), field, text);
  } else {
    sep.relative = false;
    sep.value = parse_length(s, field);
  }
  if (!(sep.value > 0.0)) throw ConfigError(std::string(field) + ": separation must be positive");
  return sep;
}

std::string format_length(double meters, std::string_view unit) {
  for (const auto& u : kUnits) {
    if (u.suffix == unit) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g%.*s", meters / u.meters, static_cast<int>(unit.size()),
                    unit.data());
      return buf;
    }
  }
  throw std::invalid_argument("unknown length unit");
}

}  // namespace dpc::cli
