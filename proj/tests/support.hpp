#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bezgcd/poly.hpp"

namespace bezgcd::test {

inline Polynomial random_poly(std::mt19937_64& rng, int degree, double bound = 10.0) {
  std::uniform_real_distribution<double> u(-bound, bound);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (double& v : c) v = u(rng);
  if (std::abs(c.back()) < 0.5) c.back() = c.back() < 0 ? -1.0 : 1.0;
  return Polynomial(std::move(c));
}

inline Polynomial monic(const Polynomial& p) { return p.scaled(1.0 / p.leading()); }

/// F_i = C_i H with deg F_i = m for every i.
struct ExactSystem {
  Polynomial h;
  std::vector<Polynomial> cofactors;
  std::vector<Polynomial> polys;
};

inline ExactSystem exact_system(std::mt19937_64& rng, int m, int n, int d) {
  ExactSystem s;
  s.h = monic(random_poly(rng, d, 3.0));
  for (int i = 0; i < n; ++i) {
    s.cofactors.push_back(random_poly(rng, m - d, 3.0));
    s.polys.push_back(mul(s.cofactors.back(), s.h));
  }
  return s;
}

}  // namespace bezgcd::test
