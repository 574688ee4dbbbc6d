#pragma once

#include <string>

#include <json.hpp>

namespace iscc::units {

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);
double linear_to_db(double lin);

enum class Kind {
  frequency,  // Hz, kHz, MHz, GHz -> Hz
  power,      // W, mW, dBm -> W
  scalar,     // bare number
};

// Parses "42GHz", "35 MHz", "26dBm", "0.5W" or a bare number (taken as SI).
double parse(const std::string& text, Kind kind);

// Accepts a JSON number (SI) or a string with a unit suffix.
double from_json(const nlohmann::json& j, Kind kind);

}  // namespace iscc::units
