#pragma once

// Splittable counter-based random streams.  Every consumer derives its own
// stream from (master_seed, trial_id, purpose), so results are bit-identical
// no matter how trials are scheduled across threads.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace critnoise {

enum class StreamPurpose : std::uint64_t {
  core = 1,       // base graph / core sample
  sprinkle1 = 2,  // first sprinkling pass
  sprinkle2 = 3,  // second sprinkling pass
  noise = 4,      // direct noise resampling
  coalescent = 5,
  blowup = 6,
  excursion = 7,
  tree = 8,
  misc = 9,
};

namespace detail {
// SplitMix64 output mix (Steele, Lea, Flood).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
}  // namespace detail

// Weyl-sequence generator with a per-stream increment.  Distinct derived
// streams get distinct odd increments, so they live on distinct orbits.
class Rng {
 public:
  Rng(std::uint64_t state, std::uint64_t gamma)
      : state_(state), gamma_(gamma | 1ull) {}

  explicit Rng(std::uint64_t seed)
      : Rng(detail::mix64(seed), detail::mix64(seed ^ detail::kGolden)) {}

  std::uint64_t next_u64() {
    state_ += gamma_;
    return detail::mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform in [0, bound), rejection-debiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound < 2) return 0;
    const std::uint64_t lim = bound * (~0ull / bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= lim);
    return v % bound;
  }

  // Number of failures before the first success at rate p, given
  // log1m_p = log1p(-p).  Caller handles p <= 0 and p >= 1.
  std::uint64_t geometric_skip(double log1m_p) {
    const double u = uniform01();
    const double s = std::log(1.0 - u) / log1m_p;
    if (s >= 9.2e18) return ~0ull >> 1;
    return static_cast<std::uint64_t>(s);
  }

  // Standard normal via the polar method; the spare is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double a, b, r;
    do {
      a = 2.0 * uniform01() - 1.0;
      b = 2.0 * uniform01() - 1.0;
      r = a * a + b * b;
    } while (r >= 1.0 || r == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r) / r);
    spare_ = b * f;
    has_spare_ = true;
    return a * f;
  }

  // Binomial(trials, p) by geometric success counting; exact at any mean,
  // cost proportional to the number of successes.
  std::uint64_t binomial_exact(std::uint64_t trials, double p) {
    if (trials == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    const double log1m_p = std::log1p(-p);
    std::uint64_t count = 0, pos = 0;
    for (;;) {
      const std::uint64_t skip = geometric_skip(log1m_p);
      if (skip >= trials - pos) break;
      pos += skip + 1;
      ++count;
      if (pos >= trials) break;
    }
    return count;
  }

  // Binomial(trials, p).  Exact below mean 30, normal approximation
  // (rounded, clamped) above.
  std::uint64_t binomial(std::uint64_t trials, double p) {
    if (trials == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return trials;
    const double mean = static_cast<double>(trials) * p;
    if (mean < 30.0) return binomial_exact(trials, p);
    const double sd = std::sqrt(mean * (1.0 - p));
    const double v = mean + sd * normal();
    if (v <= 0.0) return 0;
    if (v >= static_cast<double>(trials)) return trials;
    return static_cast<std::uint64_t>(v + 0.5);
  }

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// One stream per (master_seed, trial_id, purpose[, salt]).  salt
// distinguishes replicates that share a trial and purpose, e.g. inner
// sprinkling repetitions.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial_id,
                         StreamPurpose purpose, std::uint64_t salt = 0) {
  using detail::kGolden;
  using detail::mix64;
  std::uint64_t k = mix64(master_seed + kGolden);
  k = mix64(k ^ (trial_id + kGolden));
  k = mix64(k ^ (static_cast<std::uint64_t>(purpose) + kGolden));
  k = mix64(k ^ (salt + kGolden));
  return Rng(k, mix64(k + kGolden));
}

}  // namespace critnoise
