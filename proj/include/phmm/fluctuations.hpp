#ifndef PHMM_FLUCTUATIONS_HPP_
#define PHMM_FLUCTUATIONS_HPP_

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "phmm/models.hpp"
#include "phmm/schemes.hpp"
#include "phmm/trajectory.hpp"

namespace phmm {

// ---------------------------------------------------------------------------
// Trajectory statistics

/// Sample variance (divisor n - 1) of each slow component over the records
/// with t > burn_in. Throws EstimationError with fewer than 2 such records.
Vector stationary_variance(const Trajectory& traj, double burn_in);
Vector stationary_mean(const Trajectory& traj, double burn_in);

struct Histogram {
  std::vector<double> edges;
  /// counts[i] holds samples in [edges[i], edges[i+1]); the last bin is
  /// closed on the right.
  std::vector<std::int64_t> counts;
  std::int64_t underflow = 0;
  std::int64_t overflow = 0;

  std::int64_t total() const;
  /// Counts normalised by total() and bin width.
  std::vector<double> density() const;
};

/// Histogram of slow component `component` over records with t > burn_in.
Histogram histogram(const Trajectory& traj, double burn_in, std::span<const double> edges,
                    Eigen::Index component = 0);
Histogram histogram(std::span<const double> samples, std::span<const double> edges);

/// n + 1 equally spaced edges on [lo, hi].
std::vector<double> uniform_edges(double lo, double hi, int bins);

/// Right-continuous step function F(x) = #{values <= x} / n.
class EmpiricalCDF {
 public:
  /// Throws EstimationError on an empty sample, ArgumentError on NaN.
  explicit EmpiricalCDF(std::vector<double> values);

  double operator()(double x) const;
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  /// Smallest value v with F(v) >= p, p in (0, 1].
  double quantile(double p) const;
  double median() const { return quantile(0.5); }

 private:
  std::vector<double> values_;
};

/// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b);
double ks_distance(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// First passage

enum class Crossing { upcrossing, downcrossing };

/// Escape problem: start every run at `start_point` and stop when slow
/// component `component` reaches `target_threshold` from the side implied
/// by `direction`. Each sample restarts at the start point.
struct BasinSpec {
  double start_point = 0.0;
  double target_threshold = 0.0;
  Crossing direction = Crossing::upcrossing;
  Eigen::Index component = 0;

  /// Throws ArgumentError unless the threshold lies strictly on the side of
  /// the start point given by `direction`.
  void validate() const;
  bool reached(double x) const {
    return direction == Crossing::upcrossing ? x >= target_threshold : x <= target_threshold;
  }
};

struct FirstPassageSample {
  double elapsed = 0.0;
  bool censored = false;
  std::string scheme;
  int lambda = 1;
};

struct FptOptions {
  /// Runs still inside the basin at t_cap are censored.
  double t_cap = 0.0;
  /// Fast relaxation times of frozen-x equilibration at the start point.
  double fast_burn_in = 50.0;
  /// Test for the crossing every check_stride steps only.
  std::int64_t check_stride = 1;
  WorkerPool* pool = nullptr;
};

/// Elapsed times of the uncensored samples.
std::vector<double> passage_times(std::span<const FirstPassageSample> samples);
std::int64_t censored_count(std::span<const FirstPassageSample> samples);

/// Runs `n_samples` independent escapes. Sample i uses root seed
/// derive_seed(cfg.root_seed, i), so the result does not depend on the
/// number of workers. Throws EstimationError if every sample is censored.
template <FastSlowSystem Model>
std::vector<FirstPassageSample> first_passage_times(const Model& model, Scheme scheme,
                                                    const SchemeConfig& cfg, const BasinSpec& basin,
                                                    std::int64_t n_samples, const FptOptions& opt) {
  basin.validate();
  if (n_samples < 1) throw ArgumentError("first_passage_times: n_samples must be >= 1");
  if (!(opt.t_cap > 0.0)) throw ArgumentError("first_passage_times: t_cap must be positive");
  if (opt.check_stride < 1) throw ArgumentError("first_passage_times: check_stride must be >= 1");
  if (basin.component < 0 || basin.component >= model.slow_dim()) {
    throw DimensionError("first_passage_times: basin component out of range");
  }

  const Vector x0 = Vector::Constant(model.slow_dim(), basin.start_point);
  const Vector y0 = fast_reference(model, x0);
  const std::int64_t max_steps = step_count(opt.t_cap, scheme_step(scheme, cfg));
  const int lambda = scheme == Scheme::direct ? 1 : cfg.lambda;

  std::vector<FirstPassageSample> out(static_cast<std::size_t>(n_samples));
  parallel_for(opt.pool, out.size(), [&](std::size_t i) {
    const SchemeConfig ci = cfg.with_seed(derive_seed(cfg.root_seed, i));
    RunOptions ro;
    ro.fast_equilibration = opt.fast_burn_in;
    double hit = -1.0;
    drive_scheme(model, scheme, x0, y0, ci, max_steps, ro,
                 [&](std::int64_t k, double t, ConstVectorRef x, ConstVectorRef) {
                   if (k % opt.check_stride == 0 && basin.reached(x[basin.component])) {
                     hit = t;
                     return false;
                   }
                   return true;
                 });
    auto& s = out[i];
    s.scheme = std::string(scheme_name(scheme));
    s.lambda = lambda;
    s.censored = hit < 0.0;
    s.elapsed = s.censored ? opt.t_cap : hit;
  });

  if (censored_count(out) == n_samples) {
    throw EstimationError("first_passage_times: all " + std::to_string(n_samples) +
                          " samples censored at t_cap = " + std::to_string(opt.t_cap) +
                          "; increase t_cap");
  }
  return out;
}

struct MfptRow {
  int lambda = 1;
  double mfpt = 0.0;
  double stderr_ = 0.0;
  std::int64_t n = 0;
  std::int64_t n_censored = 0;
};

/// Mean and standard error of the uncensored samples.
MfptRow summarize_passages(std::span<const FirstPassageSample> samples, int lambda);

/// MFPT for every lambda. The samples for a given lambda use root seed
/// derive_seed(cfg_base.root_seed, lambda), shared between schemes, so HMM
/// and PHMM coincide exactly at lambda = 1.
template <FastSlowSystem Model>
std::vector<MfptRow> mean_first_passage_vs_lambda(const Model& model, Scheme scheme,
                                                  const SchemeConfig& cfg_base,
                                                  const BasinSpec& basin,
                                                  std::span<const int> lambdas,
                                                  std::int64_t n_samples, const FptOptions& opt) {
  if (lambdas.empty()) throw ArgumentError("mean_first_passage_vs_lambda: no lambdas given");
  std::vector<MfptRow> rows;
  rows.reserve(lambdas.size());
  for (int lambda : lambdas) {
    const SchemeConfig c = cfg_base.with_lambda(lambda).with_seed(
        derive_seed(cfg_base.root_seed, static_cast<std::uint64_t>(lambda)));
    const auto samples = first_passage_times(model, scheme, c, basin, n_samples, opt);
    rows.push_back(summarize_passages(samples, lambda));
  }
  return rows;
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope x. Needs two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fits log MFPT = a + b / lambda (a = intercept, b = slope).
LineFit fit_log_mfpt(std::span<const MfptRow> rows);

/// Log-asymptotic HMM escape time calibrated at (lambda0, mfpt0):
///   mfpt0 exp(V / eps (1/lambda - 1/lambda0)).
double ldp_escape_prediction(double v_barrier, double eps, double lambda, double lambda0,
                             double mfpt0);

// ---------------------------------------------------------------------------
// Large deviations of the non-diffusive model

/// H(x, p) = -nu x p + (gamma(x) - sqrt(gamma(x)^2 - 2 sigma^2 p)) / 2.
/// Throws DomainError where the square root is undefined.
double hamiltonian_nondiffusive(double x, double p, const NonDiffusiveModel& model);

/// V'(x) = (nu x gamma(x) - sigma^2/2) / (nu^2 x^2), x > 0.
double quasipotential_derivative(double x, const NonDiffusiveModel& model);

/// V(x) - V(x_ref) by adaptive Gauss-Kronrod quadrature of V'. Both points
/// must be positive (V' is singular at 0).
double quasipotential(double x_ref, double x, const NonDiffusiveModel& model);

/// The closed-form V' solves H(x, V') = 0 only where nu x gamma(x) <= sigma^2;
/// returns the first x > 0 where that stops holding (+inf if never on
/// (0, 100]). Beyond it the closed form picks the spurious root of the
/// squared equation.
double quasipotential_branch_limit(const NonDiffusiveModel& model);

}  // namespace phmm

#endif  // PHMM_FLUCTUATIONS_HPP_
