#ifndef PHMM_RNG_HPP_
#define PHMM_RNG_HPP_

#include <compare>
#include <cstdint>

#include <boost/random/normal_distribution.hpp>

#include "phmm/types.hpp"

namespace phmm {

/// Identifies one independent noise source: a replica (PHMM copy, FPT
/// sample worker, ...) at a given macro step. Negative macro indices are
/// reserved for fast-process equilibration bursts.
struct StreamKey {
  std::int64_t replica = 0;
  std::int64_t macro_index = 0;

  friend auto operator<=>(const StreamKey&, const StreamKey&) = default;
};

/// Counter-based random stream.
///
/// Draw k of the stream (root_seed, key) is a pure function of
/// (root_seed, key, k): the SplitMix64 output function applied to a Weyl
/// sequence whose origin is a hash of the seed and key. Nothing is shared
/// between streams, so results never depend on which thread draws first.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t root_seed, StreamKey key);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    ++counter_;
    return mix64(origin_ + counter_ * kGolden);
  }

  /// Standard normal variate (ziggurat).
  double normal() { return boost::random::normal_distribution<double>{}(*this); }

  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t root_seed() const { return root_seed_; }
  StreamKey key() const { return key_; }
  /// Number of 64-bit words consumed so far.
  std::uint64_t draws() const { return counter_; }

  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  std::uint64_t root_seed_;
  StreamKey key_;
  std::uint64_t origin_;
  std::uint64_t counter_ = 0;
};

/// Child seed for an independent sub-experiment (sample index, lambda, ...).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0);

/// Fills `out` with i.i.d. standard normals.
inline void fill_standard_normal(RngStream& stream, VectorRef out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = stream.normal();
}

/// Wiener increment: `dim` independent N(0, dt) samples.
Vector gaussian_increment(RngStream& stream, Eigen::Index dim, double dt);

}  // namespace phmm

#endif  // PHMM_RNG_HPP_
