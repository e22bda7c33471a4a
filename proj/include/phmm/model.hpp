#ifndef PHMM_MODEL_HPP_
#define PHMM_MODEL_HPP_

#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <string>

#include "phmm/types.hpp"

namespace phmm {

/// A fast-slow system
///
///   dX = f(X, Y) dt
///   dY = (1/eps) g(X, Y) dt + (1/sqrt(eps)) sigma(X, Y) dW
///
/// with X in R^d (slow) and Y in R^e (fast). The vector fields write into
/// caller-owned storage so the integrators never allocate per step.
///
/// Optional members picked up when present:
///   Vector averaged_drift(ConstVectorRef x) const      closed-form F(x)
///   double fast_relaxation_time(ConstVectorRef x) const  unit-rate time scale
///   Vector fast_reference(ConstVectorRef x) const       start point for Y_x
template <class M>
concept FastSlowSystem = requires(const M& m, ConstVectorRef x, ConstVectorRef y,
                                  VectorRef out, MatrixRef sig) {
  { m.slow_dim() } -> std::convertible_to<Eigen::Index>;
  { m.fast_dim() } -> std::convertible_to<Eigen::Index>;
  m.slow_drift(x, y, out);
  m.fast_drift(x, y, out);
  m.fast_diffusion(x, y, sig);
};

template <class M>
concept HasAveragedDrift = requires(const M& m, ConstVectorRef x) {
  { m.averaged_drift(x) } -> std::convertible_to<Vector>;
};

struct State {
  double t = 0.0;
  Vector x;
  Vector y;
};

inline bool all_finite(const State& s) {
  return std::isfinite(s.t) && s.x.allFinite() && s.y.allFinite();
}

/// Relaxation time of the frozen-x fast process in unit-rate time (1 if the
/// model does not say).
template <FastSlowSystem M>
double fast_relaxation_time(const M& m, ConstVectorRef x) {
  if constexpr (requires { { m.fast_relaxation_time(x) } -> std::convertible_to<double>; }) {
    return m.fast_relaxation_time(x);
  } else {
    return 1.0;
  }
}

/// Starting point used when the fast process has to be re-equilibrated.
template <FastSlowSystem M>
Vector fast_reference(const M& m, ConstVectorRef x) {
  if constexpr (requires { { m.fast_reference(x) } -> std::convertible_to<Vector>; }) {
    return m.fast_reference(x);
  } else {
    return Vector::Zero(m.fast_dim());
  }
}

/// User-defined model from plain callables. Every evaluation is checked
/// against the declared dimensions.
class FastSlowModel {
 public:
  using Drift = std::function<Vector(ConstVectorRef, ConstVectorRef)>;
  using Diffusion = std::function<Matrix(ConstVectorRef, ConstVectorRef)>;
  using Averaged = std::function<Vector(ConstVectorRef)>;

  FastSlowModel(Eigen::Index slow_dim, Eigen::Index fast_dim, Drift f, Drift g,
                Diffusion sigma, std::string name = "custom");

  Eigen::Index slow_dim() const { return slow_dim_; }
  Eigen::Index fast_dim() const { return fast_dim_; }
  const std::string& name() const { return name_; }

  void slow_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const;
  void fast_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const;
  void fast_diffusion(ConstVectorRef x, ConstVectorRef y, MatrixRef out) const;

  /// Attaches a closed-form averaged drift (enables the averaged scheme).
  FastSlowModel& with_averaged_drift(Averaged F);
  bool has_averaged_drift() const { return static_cast<bool>(averaged_); }
  Vector averaged_drift(ConstVectorRef x) const;

 private:
  Eigen::Index slow_dim_;
  Eigen::Index fast_dim_;
  Drift f_;
  Drift g_;
  Diffusion sigma_;
  Averaged averaged_;
  std::string name_;
};

}  // namespace phmm

#endif  // PHMM_MODEL_HPP_
