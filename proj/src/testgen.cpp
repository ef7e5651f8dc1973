#include "bezgcd/testgen.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "bezgcd/errors.hpp"

namespace bezgcd {

void InstanceSpec::validate() const {
  if (d < 1 || d >= m) throw InvalidProblem("InstanceSpec: need 1 <= d < m");
  if (n < 2) throw InvalidProblem("InstanceSpec: need n >= 2");
  if (!(e >= 0.0) || !std::isfinite(e)) throw InvalidProblem("InstanceSpec: need e >= 0");
  if (count < 1) throw InvalidProblem("InstanceSpec: need count >= 1");
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

class CoefficientSource {
 public:
  explicit CoefficientSource(std::uint64_t seed) : engine_(seed) {}

  // 53 random bits mapped to [-bound, bound]; avoids the implementation-defined
  // std::uniform_real_distribution so streams agree across standard libraries.
  double next() {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return -coefficient_bound + 2.0 * coefficient_bound * u;
  }

  Polynomial draw(int degree) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    do {
      for (double& v : c) v = next();
    } while (std::abs(c.back()) < leading_rejection_threshold);
    return Polynomial(std::move(c));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

Instance generate_instance(int m, int n, int d, double e, std::uint64_t stream_seed) {
  CoefficientSource source(stream_seed);
  Instance inst;
  inst.noise_norm = e;
  inst.true_gcd = source.draw(d);
  inst.polys.reserve(static_cast<std::size_t>(n));
  inst.true_factors.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Polynomial cofactor = source.draw(m - d);
    const Polynomial noise = source.draw(m - 1);
    Polynomial clean = mul(cofactor, inst.true_gcd);
    inst.polys.push_back(add(clean, noise.scaled(e / norm2(noise))));
    inst.true_factors.push_back(std::move(cofactor));
  }
  return inst;
}

std::vector<Instance> generate(const InstanceSpec& spec) {
  spec.validate();
  std::vector<Instance> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k)
    out.push_back(
        generate_instance(spec.m, spec.n, spec.d, spec.e, substream_seed(spec.seed, static_cast<std::uint64_t>(k))));
  return out;
}

}  // namespace bezgcd
