#include "phmm/trajectory.hpp"

#include <cmath>

namespace phmm {

Trajectory::Trajectory(Eigen::Index slow_dim, Eigen::Index fast_dim)
    : slow_dim_(slow_dim), fast_dim_(fast_dim) {
  if (slow_dim < 1 || fast_dim < 0) throw ArgumentError("Trajectory: bad dimensions");
}

void Trajectory::append(double t, ConstVectorRef x) {
  if (has_fast()) throw ArgumentError("Trajectory: fast state required");
  if (x.size() != slow_dim_) throw DimensionError("Trajectory: slow state dimension mismatch");
  if (!times_.empty() && !(t > times_.back())) {
    throw ArgumentError("Trajectory: times must be strictly increasing");
  }
  times_.push_back(t);
  slow_.insert(slow_.end(), x.data(), x.data() + x.size());
}

void Trajectory::append(double t, ConstVectorRef x, ConstVectorRef y) {
  if (!has_fast()) {
    append(t, x);
    return;
  }
  if (x.size() != slow_dim_ || y.size() != fast_dim_) {
    throw DimensionError("Trajectory: state dimension mismatch");
  }
  if (!times_.empty() && !(t > times_.back())) {
    throw ArgumentError("Trajectory: times must be strictly increasing");
  }
  times_.push_back(t);
  slow_.insert(slow_.end(), x.data(), x.data() + x.size());
  fast_.insert(fast_.end(), y.data(), y.data() + y.size());
}

void Trajectory::reserve(std::size_t n) {
  times_.reserve(n);
  slow_.reserve(n * static_cast<std::size_t>(slow_dim_));
  fast_.reserve(n * static_cast<std::size_t>(fast_dim_));
}

std::int64_t step_count(double T, double h) {
  if (!(h > 0.0) || !(T > 0.0)) throw ArgumentError("step_count: T and h must be positive");
  const double r = T / h;
  const double n = std::round(r);
  if (std::abs(r - n) <= 1e-9 * std::max(1.0, n)) return static_cast<std::int64_t>(n);
  return static_cast<std::int64_t>(std::ceil(r));
}

}  // namespace phmm
