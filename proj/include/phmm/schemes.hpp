#ifndef PHMM_SCHEMES_HPP_
#define PHMM_SCHEMES_HPP_

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phmm/direct.hpp"
#include "phmm/model.hpp"
#include "phmm/parallel.hpp"
#include "phmm/rng.hpp"
#include "phmm/trajectory.hpp"

namespace phmm {

enum class Scheme { direct, hmm, phmm, averaged };

std::string_view scheme_name(Scheme s);
/// Throws ArgumentError for unknown names.
Scheme parse_scheme(std::string_view name);

/// Step sizes of the multiscale schemes.
///
/// `micro_dt` is the step of the unit-rate fast process, so one micro step
/// covers eps * micro_dt of slow time and a macro step satisfies
/// macro_dt = lambda * micro_count * eps * micro_dt. Either macro_dt or
/// micro_count is chosen by the user; the other is derived.
struct SchemeConfig {
  enum class Mode { fixed_macro_dt, fixed_micro_count };

  double eps = 0.0;
  int lambda = 1;
  double macro_dt = 0.0;
  double micro_dt = 0.0;
  std::int64_t micro_count = 0;
  std::uint64_t root_seed = 0;
  Mode mode = Mode::fixed_macro_dt;
  /// Re-equilibrate every burst from fast_reference(x) instead of carrying
  /// the previous end state over.
  bool cold_restart = false;
  double cold_restart_fast_time = 50.0;

  /// Derives M = round(macro_dt / (lambda eps micro_dt)); rejects configs
  /// whose macro_dt is not an integer multiple to 1e-12 relative.
  static SchemeConfig from_macro_dt(double eps, int lambda, double macro_dt, double micro_dt,
                                    std::uint64_t seed);
  static SchemeConfig from_micro_count(double eps, int lambda, std::int64_t micro_count,
                                       double micro_dt, std::uint64_t seed);

  /// Same config at another speed-up factor, keeping whichever of
  /// macro_dt / micro_count was fixed by the user.
  SchemeConfig with_lambda(int lambda) const;
  SchemeConfig with_seed(std::uint64_t seed) const;

  /// lambda * eps > 0.1: the scheme is still run, but the separation of
  /// scales it relies on is questionable.
  bool speedup_warning() const { return lambda * eps > 0.1; }

  /// Slow-time length of one micro step.
  double direct_dt() const { return eps * micro_dt; }

  std::uint64_t hash() const;
};

/// Slow iterate and the fast state of every replica (one for HMM).
struct MacroState {
  std::int64_t n = 0;
  Vector x;
  std::vector<Vector> replica_fast;
};

struct BurstResult {
  Vector f_avg;
  Vector y_end;
};

/// One forward Euler step of the averaged equation: x + dt F(x).
template <class Field>
Vector averaged_step(Field&& F, ConstVectorRef x, double dt) {
  if (!(dt > 0.0)) throw ArgumentError("averaged_step: dt must be positive");
  Vector out = x + dt * Vector(F(x));
  if (!out.allFinite()) throw IntegrationError("averaged step produced a non-finite state", dt, 0);
  return out;
}

namespace detail {

template <FastSlowSystem Model>
struct BurstScratch {
  Vector f, g, xi;
  Matrix sig;
  void resize(Eigen::Index d, Eigen::Index e) {
    if (f.size() != d) f.resize(d);
    if (g.size() != e) {
      g.resize(e);
      xi.resize(e);
      sig.resize(e, e);
    }
  }
};

template <FastSlowSystem Model>
BurstScratch<Model>& burst_scratch(const Model& model) {
  static thread_local BurstScratch<Model> s;
  s.resize(model.slow_dim(), model.fast_dim());
  return s;
}

/// Unit-rate Euler-Maruyama for the frozen-x fast process, `steps` steps:
///   y <- y + dt g(x, y) + sqrt(dt) sigma(x, y) xi.
/// When `f_avg` is given it receives (1/steps) sum_{m=1..steps} f(x, y_m).
template <FastSlowSystem Model>
void fast_burst(const Model& model, ConstVectorRef x, VectorRef y, double dt, std::int64_t steps,
                RngStream& stream, Vector* f_avg, double macro_time = NAN) {
  auto& s = burst_scratch(model);
  const double sqrt_dt = std::sqrt(dt);
  if (f_avg != nullptr) f_avg->setZero(model.slow_dim());
  for (std::int64_t m = 1; m <= steps; ++m) {
    model.fast_drift(x, y, s.g);
    model.fast_diffusion(x, y, s.sig);
    fill_standard_normal(stream, s.xi);
    y.noalias() += dt * s.g + sqrt_dt * s.sig.lazyProduct(s.xi);
    if (!y.allFinite()) {
      const auto key = stream.key();
      throw IntegrationError("fast burst produced a non-finite state (macro step " +
                                 std::to_string(key.macro_index) + ", micro step " +
                                 std::to_string(m) + ", replica " + std::to_string(key.replica) +
                                 ")",
                             macro_time, m, key.macro_index, m, key.replica);
    }
    if (f_avg != nullptr) {
      model.slow_drift(x, y, s.f);
      *f_avg += s.f;
    }
  }
  if (f_avg != nullptr) *f_avg /= static_cast<double>(steps);
}

inline double macro_time(const SchemeConfig& cfg, std::int64_t n) {
  return static_cast<double>(n) * cfg.macro_dt;
}

/// Key used for the start-up equilibration of replica j.
inline StreamKey equilibration_key(std::int64_t replica) { return {replica, -1}; }
/// Key used for a cold restart of replica j before macro step n.
inline StreamKey cold_restart_key(std::int64_t replica, std::int64_t n) { return {replica, -(n + 2)}; }

template <FastSlowSystem Model>
std::int64_t equilibration_steps(const Model& model, ConstVectorRef x, double micro_dt,
                                 double fast_time) {
  const double tau = fast_relaxation_time(model, x);
  return static_cast<std::int64_t>(std::ceil(fast_time * tau / micro_dt));
}

template <FastSlowSystem Model>
void prepare_burst_start(const Model& model, ConstVectorRef x, VectorRef y,
                         const SchemeConfig& cfg, std::int64_t replica, std::int64_t n) {
  if (!cfg.cold_restart) return;
  y = fast_reference(model, x);
  RngStream warm(cfg.root_seed, cold_restart_key(replica, n));
  fast_burst(model, x, y, cfg.micro_dt,
             equilibration_steps(model, x, cfg.micro_dt, cfg.cold_restart_fast_time), warm,
             nullptr, macro_time(cfg, n));
}

/// In-place HMM macro step with an explicit stream.
template <FastSlowSystem Model>
void hmm_advance(const Model& model, MacroState& st, const SchemeConfig& cfg,
                 RngStream& stream, Vector& f_avg) {
  prepare_burst_start(model, st.x, st.replica_fast[0], cfg, 0, st.n);
  fast_burst(model, st.x, st.replica_fast[0], cfg.micro_dt, cfg.micro_count, stream, &f_avg,
             macro_time(cfg, st.n));
  st.x.noalias() += cfg.macro_dt * f_avg;
  ++st.n;
  if (!st.x.allFinite()) {
    throw IntegrationError("HMM macro step produced a non-finite slow state", macro_time(cfg, st.n),
                           st.n, st.n - 1);
  }
}

/// In-place PHMM macro step; replica j draws from stream key (j, n).
/// Bursts may run on `pool`; the reduction is always in ascending j.
template <FastSlowSystem Model>
void phmm_advance(const Model& model, MacroState& st, const SchemeConfig& cfg,
                  std::vector<Vector>& f_avgs, WorkerPool* pool,
                  std::span<RngStream> streams = {}) {
  const auto lambda = static_cast<std::size_t>(cfg.lambda);
  f_avgs.resize(lambda);
  auto one = [&](std::size_t j) {
    const auto jj = static_cast<std::int64_t>(j);
    prepare_burst_start(model, st.x, st.replica_fast[j], cfg, jj, st.n);
    if (streams.empty()) {
      RngStream stream(cfg.root_seed, {jj, st.n});
      fast_burst(model, st.x, st.replica_fast[j], cfg.micro_dt, cfg.micro_count, stream,
                 &f_avgs[j], macro_time(cfg, st.n));
    } else {
      fast_burst(model, st.x, st.replica_fast[j], cfg.micro_dt, cfg.micro_count, streams[j],
                 &f_avgs[j], macro_time(cfg, st.n));
    }
  };
  parallel_for(pool, lambda, one);
  Vector sum = f_avgs[0];
  for (std::size_t j = 1; j < lambda; ++j) sum += f_avgs[j];
  st.x.noalias() += cfg.macro_dt * (sum / static_cast<double>(cfg.lambda));
  ++st.n;
  if (!st.x.allFinite()) {
    throw IntegrationError("PHMM macro step produced a non-finite slow state",
                           macro_time(cfg, st.n), st.n, st.n - 1);
  }
}

}  // namespace detail

/// Runs the frozen-x fast process for `fast_time` relaxation times (unit-rate
/// time) starting at `y0` and returns the end state.
template <FastSlowSystem Model>
Vector equilibrate_fast(const Model& model, ConstVectorRef x, ConstVectorRef y0, double micro_dt,
                        double fast_time, RngStream& stream) {
  if (!(micro_dt > 0.0)) throw ArgumentError("equilibrate_fast: micro_dt must be positive");
  Vector y = y0;
  const auto steps = detail::equilibration_steps(model, x, micro_dt, fast_time);
  if (steps > 0) detail::fast_burst(model, x, y, micro_dt, steps, stream, nullptr);
  return y;
}

/// M unit-rate micro steps with the slow variable frozen. Returns the
/// Birkhoff average of f over the post-update states y_1..y_M and y_M.
template <FastSlowSystem Model>
BurstResult hmm_micro_burst(const Model& model, ConstVectorRef x_frozen, ConstVectorRef y0,
                            const SchemeConfig& cfg, RngStream& stream) {
  BurstResult r{Vector::Zero(model.slow_dim()), y0};
  detail::fast_burst(model, x_frozen, r.y_end, cfg.micro_dt, cfg.micro_count, stream, &r.f_avg,
                     detail::macro_time(cfg, stream.key().macro_index));
  return r;
}

/// x_{n+1} = x_n + macro_dt * f_avg from one burst; the burst's end state
/// seeds the next burst.
template <FastSlowSystem Model>
MacroState hmm_step(const Model& model, const MacroState& state, const SchemeConfig& cfg,
                    RngStream& stream) {
  if (state.replica_fast.size() != 1) throw ArgumentError("hmm_step: expected one fast state");
  MacroState next = state;
  Vector f_avg;
  detail::hmm_advance(model, next, cfg, stream, f_avg);
  return next;
}

/// x_{n+1} = x_n + macro_dt * (1/lambda) sum_j f_avg_j from lambda
/// independent bursts, one per stream.
template <FastSlowSystem Model>
MacroState phmm_step(const Model& model, const MacroState& state, const SchemeConfig& cfg,
                     std::span<RngStream> streams, WorkerPool* pool = nullptr) {
  const auto lambda = static_cast<std::size_t>(cfg.lambda);
  if (state.replica_fast.size() != lambda) {
    throw ArgumentError("phmm_step: expected " + std::to_string(lambda) + " fast states");
  }
  if (streams.size() != lambda) throw ArgumentError("phmm_step: need one stream per replica");
  MacroState next = state;
  std::vector<Vector> f_avgs;
  detail::phmm_advance(model, next, cfg, f_avgs, pool, streams);
  return next;
}

struct RunOptions {
  /// Record every stride-th step (micro steps for direct, macro otherwise).
  std::int64_t record_stride = 1;
  /// If positive, every replica's fast state is first equilibrated at x0 for
  /// this many relaxation times (stream key (j, -1)); otherwise all replicas
  /// start at y0.
  double fast_equilibration = 0.0;
  bool record_fast = false;
  WorkerPool* pool = nullptr;
  std::uint64_t config_hash = 0;
};

/// Slow-time length of one step of `scheme`.
double scheme_step(Scheme scheme, const SchemeConfig& cfg);

/// Steps `scheme` at most `max_steps` times from (x0, y0). After every step
/// calls visit(step, t, x, y) with y the fast state of replica 0 (empty for
/// the averaged scheme); stops early when visit returns false. Returns the
/// number of steps taken.
template <FastSlowSystem Model, class Visitor>
std::int64_t drive_scheme(const Model& model, Scheme scheme, ConstVectorRef x0,
                          ConstVectorRef y0, const SchemeConfig& cfg, std::int64_t max_steps,
                          const RunOptions& opt, Visitor&& visit) {
  if (x0.size() != model.slow_dim() || y0.size() != model.fast_dim()) {
    throw DimensionError("initial state dimension mismatch");
  }
  const Vector empty_fast;
  const std::size_t replicas =
      scheme == Scheme::phmm ? static_cast<std::size_t>(cfg.lambda) : std::size_t{1};
  std::vector<Vector> fast(replicas, Vector(y0));
  if (opt.fast_equilibration > 0.0 && scheme != Scheme::averaged) {
    for (std::size_t j = 0; j < replicas; ++j) {
      RngStream warm(cfg.root_seed, detail::equilibration_key(static_cast<std::int64_t>(j)));
      fast[j] = equilibrate_fast(model, x0, y0, cfg.micro_dt, opt.fast_equilibration, warm);
    }
  }

  switch (scheme) {
    case Scheme::direct: {
      const double h = cfg.direct_dt();
      DirectStepper<Model> stepper(model, cfg.eps, h);
      RngStream stream(cfg.root_seed, {0, 0});
      State s{0.0, x0, fast[0]};
      for (std::int64_t k = 1; k <= max_steps; ++k) {
        stepper.advance(s, stream, k);
        if (!visit(k, static_cast<double>(k) * h, s.x, s.y)) return k;
      }
      return max_steps;
    }
    case Scheme::hmm: {
      MacroState st{0, x0, std::move(fast)};
      Vector f_avg;
      for (std::int64_t k = 1; k <= max_steps; ++k) {
        RngStream stream(cfg.root_seed, {0, st.n});
        detail::hmm_advance(model, st, cfg, stream, f_avg);
        if (!visit(k, detail::macro_time(cfg, k), st.x, st.replica_fast[0])) return k;
      }
      return max_steps;
    }
    case Scheme::phmm: {
      MacroState st{0, x0, std::move(fast)};
      std::vector<Vector> f_avgs;
      for (std::int64_t k = 1; k <= max_steps; ++k) {
        detail::phmm_advance(model, st, cfg, f_avgs, opt.pool);
        if (!visit(k, detail::macro_time(cfg, k), st.x, st.replica_fast[0])) return k;
      }
      return max_steps;
    }
    case Scheme::averaged: {
      if constexpr (HasAveragedDrift<Model>) {
        Vector x = x0;
        for (std::int64_t k = 1; k <= max_steps; ++k) {
          x.noalias() += cfg.macro_dt * model.averaged_drift(x);
          if (!x.allFinite()) {
            throw IntegrationError("averaged scheme produced a non-finite state",
                                   detail::macro_time(cfg, k), k, k - 1);
          }
          if (!visit(k, detail::macro_time(cfg, k), x, empty_fast)) return k;
        }
        return max_steps;
      } else {
        throw ArgumentError("averaged scheme needs a model with a closed-form averaged drift");
      }
    }
  }
  return 0;
}

/// Integrates `scheme` over [0, T] (ceil(T/step) steps) recording the slow
/// state every `opt.record_stride` steps, starting with the initial state.
template <FastSlowSystem Model>
Trajectory run_scheme(const Model& model, Scheme scheme, ConstVectorRef x0, ConstVectorRef y0,
                      const SchemeConfig& cfg, double T, const RunOptions& opt = {}) {
  const double step = scheme_step(scheme, cfg);
  if (!(T >= step * (1.0 - 1e-12))) throw ArgumentError("run_scheme: T must be at least one step");
  if (opt.record_stride < 1) throw ArgumentError("run_scheme: record_stride must be >= 1");
  const bool keep_fast = opt.record_fast && scheme != Scheme::averaged;
  const std::int64_t steps = step_count(T, step);

  Trajectory traj(model.slow_dim(), keep_fast ? model.fast_dim() : 0);
  traj.meta.scheme = std::string(scheme_name(scheme));
  traj.meta.config_hash = opt.config_hash != 0 ? opt.config_hash : cfg.hash();
  traj.meta.seed = cfg.root_seed;
  traj.reserve(static_cast<std::size_t>(steps / opt.record_stride + 1));

  if (keep_fast) {
    traj.append(0.0, x0, y0);
  } else {
    traj.append(0.0, x0);
  }
  drive_scheme(model, scheme, x0, y0, cfg, steps, opt,
               [&](std::int64_t k, double t, ConstVectorRef x, ConstVectorRef y) {
                 if (k % opt.record_stride == 0) {
                   if (keep_fast) {
                     traj.append(t, x, y);
                   } else {
                     traj.append(t, x);
                   }
                 }
                 return true;
               });
  return traj;
}

}  // namespace phmm

#endif  // PHMM_SCHEMES_HPP_
