#include "phmm/fluctuations.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace phmm {

namespace {

std::size_t first_after(const Trajectory& traj, double burn_in) {
  const auto& t = traj.times();
  return static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), burn_in) - t.begin());
}

void check_edges(std::span<const double> edges) {
  if (edges.size() < 2) throw ArgumentError("histogram: need at least two bin edges");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ArgumentError("histogram: bin edges must be strictly ascending");
  }
}

void add_sample(Histogram& h, double v) {
  const auto& e = h.edges;
  if (v < e.front()) {
    ++h.underflow;
  } else if (v > e.back()) {
    ++h.overflow;
  } else {
    auto it = std::upper_bound(e.begin(), e.end(), v);
    auto bin = static_cast<std::size_t>(it - e.begin()) - 1;
    if (bin == h.counts.size()) --bin;  // v == last edge
    ++h.counts[bin];
  }
}

}  // namespace

Vector stationary_mean(const Trajectory& traj, double burn_in) {
  const std::size_t start = first_after(traj, burn_in);
  const auto n = static_cast<Eigen::Index>(traj.size() - start);
  if (n < 1) throw EstimationError("stationary_mean: no samples after burn-in");
  return traj.slow_states().rightCols(n).rowwise().mean();
}

Vector stationary_variance(const Trajectory& traj, double burn_in) {
  const std::size_t start = first_after(traj, burn_in);
  const auto n = static_cast<Eigen::Index>(traj.size() - start);
  if (n < 2) {
    throw EstimationError("stationary_variance: fewer than 2 samples after burn-in " +
                          std::to_string(burn_in));
  }
  const auto block = traj.slow_states().rightCols(n);
  const Vector mean = block.rowwise().mean();
  return (block.colwise() - mean).rowwise().squaredNorm() / static_cast<double>(n - 1);
}

std::int64_t Histogram::total() const {
  std::int64_t s = underflow + overflow;
  for (auto c : counts) s += c;
  return s;
}

std::vector<double> Histogram::density() const {
  const double n = static_cast<double>(total());
  std::vector<double> d(counts.size(), 0.0);
  if (n == 0.0) return d;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d[i] = static_cast<double>(counts[i]) / (n * (edges[i + 1] - edges[i]));
  }
  return d;
}

Histogram histogram(std::span<const double> samples, std::span<const double> edges) {
  check_edges(edges);
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (double v : samples) add_sample(h, v);
  return h;
}

Histogram histogram(const Trajectory& traj, double burn_in, std::span<const double> edges,
                    Eigen::Index component) {
  check_edges(edges);
  if (component < 0 || component >= traj.slow_dim()) {
    throw DimensionError("histogram: component out of range");
  }
  const std::size_t start = first_after(traj, burn_in);
  if (start >= traj.size()) throw EstimationError("histogram: no samples after burn-in");
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.counts.assign(edges.size() - 1, 0);
  for (std::size_t i = start; i < traj.size(); ++i) add_sample(h, traj.state(i)[component]);
  return h;
}

std::vector<double> uniform_edges(double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw ArgumentError("uniform_edges: need bins >= 1 and hi > lo");
  std::vector<double> e(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) e[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
  return e;
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw EstimationError("empirical CDF of an empty sample");
  for (double v : values_) {
    if (std::isnan(v)) throw ArgumentError("empirical CDF: NaN in sample");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalCDF::operator()(double x) const {
  const auto k = std::upper_bound(values_.begin(), values_.end(), x) - values_.begin();
  return static_cast<double>(k) / static_cast<double>(values_.size());
}

double EmpiricalCDF::quantile(double p) const {
  if (!(p > 0.0 && p <= 1.0)) throw ArgumentError("quantile: p must lie in (0, 1]");
  const double n = static_cast<double>(values_.size());
  auto k = static_cast<std::size_t>(std::ceil(p * n - 1e-12));
  k = std::clamp<std::size_t>(k, 1, values_.size());
  return values_[k - 1];
}

double ks_distance(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  const auto& va = a.values();
  const auto& vb = b.values();
  const double na = static_cast<double>(va.size());
  const double nb = static_cast<double>(vb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  // Walk the merged jump points; ties advance both samples before comparing.
  while (i < va.size() && j < vb.size()) {
    const double x = std::min(va[i], vb[j]);
    while (i < va.size() && va[i] == x) ++i;
    while (j < vb.size() && vb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  // Once one sample is exhausted its CDF sits at 1 and the gap only shrinks.
  return d;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  return ks_distance(EmpiricalCDF({a.begin(), a.end()}), EmpiricalCDF({b.begin(), b.end()}));
}

void BasinSpec::validate() const {
  if (!std::isfinite(start_point) || !std::isfinite(target_threshold)) {
    throw ArgumentError("basin: start point and threshold must be finite");
  }
  if (direction == Crossing::upcrossing && !(target_threshold > start_point)) {
    throw ArgumentError("basin: an upcrossing needs target_threshold > start_point");
  }
  if (direction == Crossing::downcrossing && !(target_threshold < start_point)) {
    throw ArgumentError("basin: a downcrossing needs target_threshold < start_point");
  }
}

std::vector<double> passage_times(std::span<const FirstPassageSample> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.censored) out.push_back(s.elapsed);
  }
  return out;
}

std::int64_t censored_count(std::span<const FirstPassageSample> samples) {
  return std::count_if(samples.begin(), samples.end(),
                       [](const FirstPassageSample& s) { return s.censored; });
}

MfptRow summarize_passages(std::span<const FirstPassageSample> samples, int lambda) {
  const auto t = passage_times(samples);
  MfptRow row;
  row.lambda = lambda;
  row.n = static_cast<std::int64_t>(t.size());
  row.n_censored = censored_count(samples);
  if (t.empty()) throw EstimationError("mfpt: every sample censored");
  const Eigen::Map<const Vector> v(t.data(), static_cast<Eigen::Index>(t.size()));
  row.mfpt = v.mean();
  if (t.size() > 1) {
    const double var = (v.array() - row.mfpt).square().sum() / static_cast<double>(t.size() - 1);
    row.stderr_ = std::sqrt(var / static_cast<double>(t.size()));
  }
  return row;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line: need >= 2 paired points");
  const Eigen::Map<const Vector> vx(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::Map<const Vector> vy(y.data(), static_cast<Eigen::Index>(y.size()));
  const double mx = vx.mean();
  const double my = vy.mean();
  const double sxx = (vx.array() - mx).square().sum();
  if (!(sxx > 0.0)) throw ArgumentError("fit_line: x values are all equal");
  const double sxy = ((vx.array() - mx) * (vy.array() - my)).sum();
  const double syy = (vy.array() - my).square().sum();
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

LineFit fit_log_mfpt(std::span<const MfptRow> rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (!(r.mfpt > 0.0)) throw EstimationError("fit_log_mfpt: MFPT must be positive");
    x.push_back(1.0 / r.lambda);
    y.push_back(std::log(r.mfpt));
  }
  return fit_line(x, y);
}

double ldp_escape_prediction(double v_barrier, double eps, double lambda, double lambda0,
                             double mfpt0) {
  if (!(mfpt0 > 0.0)) throw ArgumentError("ldp_escape_prediction: calibration MFPT must be positive");
  if (!(eps > 0.0) || !(lambda > 0.0) || !(lambda0 > 0.0)) {
    throw ArgumentError("ldp_escape_prediction: eps and lambdas must be positive");
  }
  return mfpt0 * std::exp(v_barrier / eps * (1.0 / lambda - 1.0 / lambda0));
}

double hamiltonian_nondiffusive(double x, double p, const NonDiffusiveModel& model) {
  const double g = NonDiffusiveModel::gamma(x);
  const double s2 = model.sigma() * model.sigma();
  const double disc = g * g - 2.0 * s2 * p;
  if (disc < 0.0) {
    throw DomainError("hamiltonian: p = " + std::to_string(p) + " outside the domain at x = " +
                      std::to_string(x));
  }
  return -model.nu() * x * p + 0.5 * (g - std::sqrt(disc));
}

double quasipotential_derivative(double x, const NonDiffusiveModel& model) {
  if (!(x > 0.0)) throw DomainError("quasipotential_derivative: x must be positive");
  const double nu = model.nu();
  const double s2 = model.sigma() * model.sigma();
  return (nu * x * NonDiffusiveModel::gamma(x) - 0.5 * s2) / (nu * nu * x * x);
}

double quasipotential(double x_ref, double x, const NonDiffusiveModel& model) {
  if (!(x_ref > 0.0) || !(x > 0.0)) {
    throw DomainError("quasipotential: integration path crosses x = 0");
  }
  if (x == x_ref) return 0.0;
  auto dv = [&model](double s) { return quasipotential_derivative(s, model); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      dv, std::min(x_ref, x), std::max(x_ref, x), 15, 1e-10, &err);
  return x > x_ref ? v : -v;
}

double quasipotential_branch_limit(const NonDiffusiveModel& model) {
  const double s2 = model.sigma() * model.sigma();
  auto excess = [&](double x) { return model.nu() * x * NonDiffusiveModel::gamma(x) - s2; };
  constexpr double h = 1e-3;
  double a = h;
  if (excess(a) > 0.0) return 0.0;
  for (double b = 2 * h; b <= 100.0; b += h) {
    if (excess(b) > 0.0) {
      double l = a, r = b;
      while (r - l > 1e-12) {
        const double m = 0.5 * (l + r);
        (excess(m) > 0.0 ? r : l) = m;
      }
      return 0.5 * (l + r);
    }
    a = b;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace phmm
