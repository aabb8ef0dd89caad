#pragma once

// Run configuration files: sections of `key = value` lines, '#' comments.
// Physical values take unit suffixes; rates quoted in Hz are read as 2 pi x Hz.
// JSON with the same sections and keys is accepted as well.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chiralcav/scenario.hpp"

namespace chiralcav {

enum class Dimension {
  None,       // plain number
  Frequency,  // Hz, kHz, MHz, GHz, rad/s (returned in Hz)
  Rate,       // like Frequency, returned in rad/s
  Length,     // m, cm, mm, um, nm
  Speed,      // m/s, cm/s, mm/s, km/s
  Time,       // s, ms, us, ns
  Dipole,     // D, C*m
  Angle,      // rad, deg, or multiples of pi ("-pi/2")
  PerSecond,  // 1/s
};

// Parses a number with an optional unit suffix; returns SI units (Hz for
// Frequency, rad/s for Rate). Throws Error(Parse) on malformed input.
double parse_quantity(std::string_view text, Dimension dimension);

struct LoadedConfig {
  Scenario scenario;
  std::vector<std::string> notices;
};

LoadedConfig parse_config_text(std::string_view text);
LoadedConfig parse_config_json(std::string_view text);

// JSON when the first non-blank character is '{', key-value text otherwise.
LoadedConfig parse_config(std::string_view text);
LoadedConfig load_config(const std::string& path);

// Complete, stable key-value rendering of a scenario (full precision,
// canonical units). Parsing it back reproduces the scenario.
std::string canonical_text(const Scenario& scenario);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace chiralcav
