#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "psl/keys.hpp"
#include "psl/rng.hpp"

namespace psl {

// Number of Bernoulli(p) trials needed for k successes. Support starts at k:
// the variate counts trials, not failures.
struct NegBinomial {
  std::int64_t k = 1;
  double p = 0.5;
};

struct Binomial {
  std::int64_t m = 1;  // trials
  double p = 0.5;
};

struct UniformInt {
  Key lo = 0;
  Key hi = 0;  // inclusive
};

using DistributionSpec = std::variant<NegBinomial, Binomial, UniformInt>;

// Throws std::invalid_argument naming the offending parameter.
// NB/geometric require 0 < p <= 1 (p = 0 would never terminate);
// binomial requires 0 <= p <= 1 and m >= 1; uniform requires lo <= hi.
void validate(const DistributionSpec& spec);
std::string describe(const DistributionSpec& spec);

enum class NbMethod { BernoulliSim, GeometricSum };

// Trials up to and including the first success; P(X = x) = (1-p)^(x-1) p.
std::int64_t geometric_sample(double p, RngStream& rng);

// Inverse transform ceil(ln(1-u) / ln(1-p)) clamped to >= 1, u in [0, 1).
// Exposed so the formula itself can be checked against hand values.
std::int64_t geometric_inverse(double u, double p);

// GeometricSum sums k inverse-transform geometrics (one uniform each);
// BernoulliSim runs the trials literally. Distributionally identical;
// GeometricSum is the default since small p makes literal trials ~k/p work.
std::int64_t nb_sample(std::int64_t k, double p, RngStream& rng,
                       NbMethod method = NbMethod::GeometricSum);

std::int64_t binomial_sample(std::int64_t m, double p, RngStream& rng);

// n i.i.d. draws from spec; deterministic given (spec, n, seed).
KeyArray generate_dataset(const DistributionSpec& spec, std::size_t n,
                          std::uint64_t seed,
                          NbMethod method = NbMethod::GeometricSum);

}  // namespace psl
