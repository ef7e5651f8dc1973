#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bezgcd/gpgcd.hpp"
#include "bezgcd/poly.hpp"
#include "bezgcd/testgen.hpp"

namespace bezgcd {

/// On-disk instance:
///   { "m": int, "n": int, "d": int, "polys": [[c0..c_deg], ...],
///     "true_gcd": [c0..cd] (optional), "true_factors": [[...], ...] (optional) }
/// Coefficients are ascending. Doubles are written in shortest round-trip
/// form, so reading back reproduces every coefficient bit for bit.
struct InstanceFile {
  int m = 0;
  int n = 0;
  int d = 0;
  std::vector<Polynomial> polys;
  std::optional<Polynomial> true_gcd;
  std::optional<std::vector<Polynomial>> true_factors;
};

InstanceFile to_instance_file(const Instance& instance, int d);

nlohmann::json to_json(const InstanceFile& file);
/// Validates shape and degrees; throws ParseError on any mismatch.
InstanceFile instance_from_json(const nlohmann::json& j);

InstanceFile read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const InstanceFile& file);

/// Solve output: gcd, refined polynomials, cofactors and metrics.
nlohmann::json result_to_json(const SolveResult& result);

/// Fixed-width numeric formatting for CSV: 17 significant digits, "nan" for NaN.
std::string format_double(double v);

}  // namespace bezgcd
