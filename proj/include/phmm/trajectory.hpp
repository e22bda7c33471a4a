#ifndef PHMM_TRAJECTORY_HPP_
#define PHMM_TRAJECTORY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "phmm/types.hpp"

namespace phmm {

/// Time-stamped slow path (and optionally the fast path) with provenance.
///
/// States are stored column-major in one contiguous buffer so the whole
/// path can be viewed as a d x n Eigen matrix without copying.
class Trajectory {
 public:
  struct Meta {
    std::string scheme;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
  };

  explicit Trajectory(Eigen::Index slow_dim, Eigen::Index fast_dim = 0);

  /// Appends a record; times must be strictly increasing.
  void append(double t, ConstVectorRef x);
  void append(double t, ConstVectorRef x, ConstVectorRef y);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  Eigen::Index slow_dim() const { return slow_dim_; }
  Eigen::Index fast_dim() const { return fast_dim_; }
  bool has_fast() const { return fast_dim_ > 0; }

  const std::vector<double>& times() const { return times_; }
  double time(std::size_t i) const { return times_[i]; }

  Eigen::Map<const Vector> state(std::size_t i) const {
    return Eigen::Map<const Vector>(slow_.data() + i * slow_dim_, slow_dim_);
  }
  Eigen::Map<const Vector> fast_state(std::size_t i) const {
    return Eigen::Map<const Vector>(fast_.data() + i * fast_dim_, fast_dim_);
  }
  /// All slow states as columns.
  Eigen::Map<const Matrix> slow_states() const {
    return Eigen::Map<const Matrix>(slow_.data(), slow_dim_, static_cast<Eigen::Index>(size()));
  }
  Eigen::Map<const Vector> back() const { return state(size() - 1); }

  void reserve(std::size_t n);

  Meta meta;

 private:
  Eigen::Index slow_dim_;
  Eigen::Index fast_dim_;
  std::vector<double> times_;
  std::vector<double> slow_;
  std::vector<double> fast_;
};

/// Time grid helper: number of steps of size h needed to reach T, i.e.
/// ceil(T/h) without being thrown off by representation error in T/h.
std::int64_t step_count(double T, double h);

}  // namespace phmm

#endif  // PHMM_TRAJECTORY_HPP_
