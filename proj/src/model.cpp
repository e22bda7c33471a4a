#include "phmm/model.hpp"

#include <utility>

namespace phmm {

namespace {

void check_size(const char* what, Eigen::Index got, Eigen::Index want) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace

FastSlowModel::FastSlowModel(Eigen::Index slow_dim, Eigen::Index fast_dim, Drift f, Drift g,
                             Diffusion sigma, std::string name)
    : slow_dim_(slow_dim),
      fast_dim_(fast_dim),
      f_(std::move(f)),
      g_(std::move(g)),
      sigma_(std::move(sigma)),
      name_(std::move(name)) {
  if (slow_dim_ < 1 || fast_dim_ < 1) throw ArgumentError("FastSlowModel: dimensions must be positive");
  if (!f_ || !g_ || !sigma_) throw ArgumentError("FastSlowModel: empty vector field");
}

void FastSlowModel::slow_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const {
  Vector v = f_(x, y);
  check_size("slow drift", v.size(), slow_dim_);
  out = v;
}

void FastSlowModel::fast_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const {
  Vector v = g_(x, y);
  check_size("fast drift", v.size(), fast_dim_);
  out = v;
}

void FastSlowModel::fast_diffusion(ConstVectorRef x, ConstVectorRef y, MatrixRef out) const {
  Matrix s = sigma_(x, y);
  check_size("fast diffusion rows", s.rows(), fast_dim_);
  check_size("fast diffusion cols", s.cols(), fast_dim_);
  out = s;
}

FastSlowModel& FastSlowModel::with_averaged_drift(Averaged F) {
  averaged_ = std::move(F);
  return *this;
}

Vector FastSlowModel::averaged_drift(ConstVectorRef x) const {
  if (!averaged_) throw ArgumentError("model '" + name_ + "' has no closed-form averaged drift");
  Vector v = averaged_(x);
  check_size("averaged drift", v.size(), slow_dim_);
  return v;
}

}  // namespace phmm
