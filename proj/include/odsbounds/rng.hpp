#pragma once
// Counter-style generator with explicit 64-bit seeding and cheap substreams.
// std:: distributions are implementation-defined, which would break the
// byte-identical reproducibility contract, so draws are implemented here.

#include <cmath>
#include <cstdint>
#include <vector>

namespace odsbounds {

namespace detail {
// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(detail::mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

  // Independent stream for replicate `stream` of a study seeded with `seed`.
  static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(detail::mix64(seed) ^ detail::mix64(0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // Standard normal via Box-Muller; draws a fresh pair of uniforms each call.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Scaled normal; sd == 0 yields exactly 0 while still consuming draws.
  double normal(double sd) { return sd * normal(); }

 private:
  std::uint64_t state_;
};

// Multinomial draw by CDF inversion; probs need not be exactly normalized
// (the last positive category absorbs rounding).
inline std::vector<std::uint64_t> multinomial(Rng& rng, std::uint64_t n,
                                              const std::vector<double>& probs) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  double total = 0.0;
  for (double p : probs) total += p;
  for (std::uint64_t i = 0; i < n; ++i) {
    double u = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = probs.size() - 1;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      acc += probs[k];
      if (u <= acc) {
        pick = k;
        break;
      }
    }
    ++counts[pick];
  }
  return counts;
}

}  // namespace odsbounds
