#ifndef PHMM_DIRECT_HPP_
#define PHMM_DIRECT_HPP_

#include <cmath>
#include <cstdint>
#include <string>

#include "phmm/model.hpp"
#include "phmm/rng.hpp"
#include "phmm/trajectory.hpp"

namespace phmm {

/// Euler-Maruyama on the full stiff system with slow-time step h:
///
///   x' = x + h f(x, y)
///   y' = y + (h/eps) g(x, y) + sqrt(h/eps) sigma(x, y) xi,   xi ~ N(0, I)
///
/// Holds its scratch vectors so advancing never allocates.
template <FastSlowSystem Model>
class DirectStepper {
 public:
  DirectStepper(const Model& model, double eps, double h)
      : model_(model),
        h_(h),
        drift_scale_(h / eps),
        noise_scale_(std::sqrt(h / eps)),
        f_(model.slow_dim()),
        g_(model.fast_dim()),
        xi_(model.fast_dim()),
        sig_(model.fast_dim(), model.fast_dim()) {
    if (!(eps > 0.0)) throw ArgumentError("direct step: eps must be positive");
    if (!(h > 0.0)) throw ArgumentError("direct step: h must be positive");
  }

  double h() const { return h_; }

  /// Advances `s` by one step; `step` only labels the error.
  void advance(State& s, RngStream& stream, std::int64_t step = -1) {
    model_.slow_drift(s.x, s.y, f_);
    model_.fast_drift(s.x, s.y, g_);
    model_.fast_diffusion(s.x, s.y, sig_);
    fill_standard_normal(stream, xi_);
    s.x.noalias() += h_ * f_;
    s.y.noalias() += drift_scale_ * g_ + noise_scale_ * sig_.lazyProduct(xi_);
    s.t += h_;
    if (!s.x.allFinite() || !s.y.allFinite()) {
      throw IntegrationError("direct integration produced a non-finite state at t=" +
                                 std::to_string(s.t),
                             s.t, step);
    }
  }

 private:
  const Model& model_;
  double h_;
  double drift_scale_;
  double noise_scale_;
  Vector f_;
  Vector g_;
  Vector xi_;
  Matrix sig_;
};

template <FastSlowSystem Model>
State direct_step(const Model& model, const State& state, double eps, double h,
                  RngStream& stream) {
  DirectStepper<Model> stepper(model, eps, h);
  State next = state;
  stepper.advance(next, stream);
  return next;
}

/// Runs ceil(T/h) direct steps from (x0, y0) at t = 0, recording the initial
/// state and every `record_stride`-th state after it.
template <FastSlowSystem Model>
Trajectory direct_integrate(const Model& model, ConstVectorRef x0, ConstVectorRef y0, double eps,
                            double h, double T, RngStream& stream, std::int64_t record_stride = 1,
                            bool record_fast = false) {
  if (!(h > 0.0) || !(T >= h * (1.0 - 1e-12))) throw ArgumentError("direct_integrate: need T >= h > 0");
  if (record_stride < 1) throw ArgumentError("direct_integrate: record_stride must be >= 1");
  if (x0.size() != model.slow_dim() || y0.size() != model.fast_dim()) {
    throw DimensionError("direct_integrate: initial state dimension mismatch");
  }
  DirectStepper<Model> stepper(model, eps, h);
  const std::int64_t steps = step_count(T, h);

  Trajectory traj(model.slow_dim(), record_fast ? model.fast_dim() : 0);
  traj.meta.scheme = "direct";
  traj.meta.seed = stream.root_seed();
  traj.reserve(static_cast<std::size_t>(steps / record_stride + 1));

  State s{0.0, x0, y0};
  traj.append(0.0, s.x, s.y);
  for (std::int64_t k = 1; k <= steps; ++k) {
    stepper.advance(s, stream, k);
    if (k % record_stride == 0) traj.append(static_cast<double>(k) * h, s.x, s.y);
  }
  return traj;
}

}  // namespace phmm

#endif  // PHMM_DIRECT_HPP_
