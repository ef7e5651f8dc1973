#include "bezgcd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bezgcd/errors.hpp"

namespace bezgcd {

namespace {

nlohmann::json coeffs_json(const Polynomial& p) {
  return nlohmann::json(std::vector<double>(p.coeffs().begin(), p.coeffs().end()));
}

Polynomial poly_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string(what) + ": expected a nonempty array of numbers");
  std::vector<double> c;
  c.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError(std::string(what) + ": non-numeric coefficient");
    c.push_back(v.get<double>());
  }
  return Polynomial(std::move(c));
}

int int_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw ParseError(std::string("instance: missing integer field \"") + key + "\"");
  return j.at(key).get<int>();
}

}  // namespace

InstanceFile to_instance_file(const Instance& instance, int d) {
  InstanceFile f;
  f.m = instance.polys.front().degree();
  f.n = static_cast<int>(instance.polys.size());
  f.d = d;
  f.polys = instance.polys;
  f.true_gcd = instance.true_gcd;
  f.true_factors = instance.true_factors;
  return f;
}

nlohmann::json to_json(const InstanceFile& file) {
  nlohmann::json j;
  j["m"] = file.m;
  j["n"] = file.n;
  j["d"] = file.d;
  j["polys"] = nlohmann::json::array();
  for (const Polynomial& p : file.polys) j["polys"].push_back(coeffs_json(p));
  if (file.true_gcd) j["true_gcd"] = coeffs_json(*file.true_gcd);
  if (file.true_factors) {
    j["true_factors"] = nlohmann::json::array();
    for (const Polynomial& p : *file.true_factors) j["true_factors"].push_back(coeffs_json(p));
  }
  return j;
}

InstanceFile instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("instance: top level must be an object");
  InstanceFile f;
  f.m = int_field(j, "m");
  f.n = int_field(j, "n");
  f.d = int_field(j, "d");
  if (!j.contains("polys") || !j.at("polys").is_array())
    throw ParseError("instance: missing array field \"polys\"");
  for (const auto& p : j.at("polys")) f.polys.push_back(poly_from_json(p, "polys"));

  if (static_cast<int>(f.polys.size()) != f.n)
    throw ParseError("instance: \"n\" does not match the number of polynomials");
  if (f.polys.empty() || f.polys.front().degree() != f.m)
    throw ParseError("instance: first polynomial must have m + 1 coefficients");
  for (const Polynomial& p : f.polys)
    if (p.degree() > f.m) throw ParseError("instance: polynomial longer than m + 1 coefficients");

  if (j.contains("true_gcd")) {
    f.true_gcd = poly_from_json(j.at("true_gcd"), "true_gcd");
    if (f.true_gcd->degree() != f.d) throw ParseError("instance: true_gcd must have d + 1 coefficients");
  }
  if (j.contains("true_factors")) {
    if (!j.at("true_factors").is_array()) throw ParseError("instance: true_factors must be an array");
    std::vector<Polynomial> factors;
    for (const auto& p : j.at("true_factors")) factors.push_back(poly_from_json(p, "true_factors"));
    if (static_cast<int>(factors.size()) != f.n)
      throw ParseError("instance: true_factors count does not match n");
    for (std::size_t i = 0; i < factors.size(); ++i)
      if (factors[i].degree() != f.polys[i].degree() - f.d)
        throw ParseError("instance: true_factors degree mismatch");
    f.true_factors = std::move(factors);
  }
  return f;
}

InstanceFile read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

void write_instance(const std::filesystem::path& path, const InstanceFile& file) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(file).dump(1) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

nlohmann::json result_to_json(const SolveResult& r) {
  nlohmann::json j;
  j["gcd"] = coeffs_json(r.gcd);
  j["refined"] = nlohmann::json::array();
  for (const Polynomial& p : r.refined) j["refined"].push_back(coeffs_json(p));
  j["cofactors"] = nlohmann::json::array();
  for (const Polynomial& p : r.cofactors) j["cofactors"].push_back(coeffs_json(p));
  j["perturbation"] = r.perturbation;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["remainder_norm"] = r.remainder_norm;
  j["constraint_residual"] = r.constraint_residual;
  j["degenerate"] = r.degenerate;
  j["column_order"] = r.order == ColumnOrder::Leading ? "leading" : "trailing";
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace bezgcd
