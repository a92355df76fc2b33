#include "psl/distgen.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace psl {

namespace {

void check_prob_open_zero(double p, const char* who) {
  if (!(p > 0.0) || p > 1.0)
    throw std::invalid_argument(std::string(who) + ": p must be in (0, 1], got " +
                                std::to_string(p));
}

}  // namespace

void validate(const DistributionSpec& spec) {
  if (const auto* nb = std::get_if<NegBinomial>(&spec)) {
    if (nb->k < 1)
      throw std::invalid_argument("nb: k must be >= 1, got " + std::to_string(nb->k));
    check_prob_open_zero(nb->p, "nb");
  } else if (const auto* b = std::get_if<Binomial>(&spec)) {
    if (b->m < 1)
      throw std::invalid_argument("binomial: m must be >= 1, got " + std::to_string(b->m));
    if (!(b->p >= 0.0) || b->p > 1.0)
      throw std::invalid_argument("binomial: p must be in [0, 1], got " +
                                  std::to_string(b->p));
  } else {
    const auto& u = std::get<UniformInt>(spec);
    if (u.lo > u.hi)
      throw std::invalid_argument("uniform: lo must be <= hi, got [" +
                                  std::to_string(u.lo) + ", " + std::to_string(u.hi) + "]");
  }
}

std::string describe(const DistributionSpec& spec) {
  if (const auto* nb = std::get_if<NegBinomial>(&spec))
    return "nb(k=" + std::to_string(nb->k) + ", p=" + std::to_string(nb->p) + ")";
  if (const auto* b = std::get_if<Binomial>(&spec))
    return "binomial(m=" + std::to_string(b->m) + ", p=" + std::to_string(b->p) + ")";
  const auto& u = std::get<UniformInt>(spec);
  return "uniform[" + std::to_string(u.lo) + ", " + std::to_string(u.hi) + "]";
}

std::int64_t geometric_inverse(double u, double p) {
  check_prob_open_zero(p, "geometric");
  if (p == 1.0) return 1;
  // ceil(ln(1-u) / ln(1-p)); log1p keeps precision for small p and u.
  const double x = std::ceil(std::log1p(-u) / std::log1p(-p));
  return x < 1.0 ? 1 : static_cast<std::int64_t>(x);
}

std::int64_t geometric_sample(double p, RngStream& rng) {
  check_prob_open_zero(p, "geometric");
  if (p == 1.0) return 1;
  return geometric_inverse(rng.next_unit(), p);
}

std::int64_t nb_sample(std::int64_t k, double p, RngStream& rng, NbMethod method) {
  if (k < 1)
    throw std::invalid_argument("nb: k must be >= 1, got " + std::to_string(k));
  check_prob_open_zero(p, "nb");
  if (method == NbMethod::BernoulliSim) {
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    while (successes < k) {
      ++trials;
      if (rng.next_unit() < p) ++successes;
    }
    return trials;
  }
  std::int64_t trials = 0;
  for (std::int64_t i = 0; i < k; ++i) trials += geometric_sample(p, rng);
  return trials;
}

std::int64_t binomial_sample(std::int64_t m, double p, RngStream& rng) {
  if (m < 1)
    throw std::invalid_argument("binomial: m must be >= 1, got " + std::to_string(m));
  if (!(p >= 0.0) || p > 1.0)
    throw std::invalid_argument("binomial: p must be in [0, 1], got " + std::to_string(p));
  std::int64_t successes = 0;
  for (std::int64_t i = 0; i < m; ++i)
    if (rng.next_unit() < p) ++successes;
  return successes;
}

KeyArray generate_dataset(const DistributionSpec& spec, std::size_t n,
                          std::uint64_t seed, NbMethod method) {
  validate(spec);
  RngStream rng(seed);
  KeyArray keys;
  keys.reserve(n);
  if (const auto* nb = std::get_if<NegBinomial>(&spec)) {
    for (std::size_t i = 0; i < n; ++i) keys.push_back(nb_sample(nb->k, nb->p, rng, method));
  } else if (const auto* b = std::get_if<Binomial>(&spec)) {
    for (std::size_t i = 0; i < n; ++i) keys.push_back(binomial_sample(b->m, b->p, rng));
  } else {
    const auto& u = std::get<UniformInt>(spec);
    // unsigned arithmetic: span wraps to 0 only for the full 64-bit range
    const std::uint64_t span =
        static_cast<std::uint64_t>(u.hi) - static_cast<std::uint64_t>(u.lo) + 1;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t r = span == 0 ? rng.next_u64() : rng.next_below(span);
      keys.push_back(static_cast<Key>(static_cast<std::uint64_t>(u.lo) + r));
    }
  }
  return keys;
}

}  // namespace psl
