#include "iscc/perf/units.hpp"

#include <cctype>
#include <cmath>

#include "iscc/errors.hpp"

namespace iscc::units {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double parse(const std::string& text, Kind kind) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::logic_error&) {
    throw InvalidArgument("not a quantity: '" + text + "'");
  }
  std::string unit;
  for (std::size_t i = pos; i < text.size(); ++i)
    if (!std::isspace(static_cast<unsigned char>(text[i]))) unit += text[i];
  if (unit.empty()) return value;

  std::string lower;
  for (char c : unit) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  switch (kind) {
    case Kind::frequency:
      if (lower == "hz") return value;
      if (lower == "khz") return value * 1e3;
      if (lower == "mhz") return value * 1e6;
      if (lower == "ghz") return value * 1e9;
      break;
    case Kind::power:
      if (lower == "w") return value;
      if (lower == "mw") return value * 1e-3;
      if (lower == "dbm") return dbm_to_watt(value);
      break;
    case Kind::scalar:
      break;
  }
  throw InvalidArgument("unsupported unit '" + unit + "' in '" + text + "'");
}

double from_json(const nlohmann::json& j, Kind kind) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse(j.get<std::string>(), kind);
  throw InvalidArgument("expected a number or a quantity string");
}

}  // namespace iscc::units
