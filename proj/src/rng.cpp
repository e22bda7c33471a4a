#include "phmm/rng.hpp"

#include <cmath>

namespace phmm {

RngStream::RngStream(std::uint64_t root_seed, StreamKey key)
    : root_seed_(root_seed), key_(key) {
  std::uint64_t h = mix64(root_seed ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ (static_cast<std::uint64_t>(key.replica) * 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(key.macro_index) * 0xaef17502108ef2d9ULL));
  origin_ = h;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = RngStream::mix64(root ^ 0xbb67ae8584caa73bULL);
  h = RngStream::mix64(h + a * 0x9e3779b97f4a7c15ULL);
  return RngStream::mix64(h + b * 0xc2b2ae3d27d4eb4fULL);
}

Vector gaussian_increment(RngStream& stream, Eigen::Index dim, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("gaussian_increment: dt must be positive");
  if (dim < 0) throw ArgumentError("gaussian_increment: negative dimension");
  Vector out(dim);
  fill_standard_normal(stream, out);
  out *= std::sqrt(dt);
  return out;
}

}  // namespace phmm
