#ifndef PHMM_MODELS_HPP_
#define PHMM_MODELS_HPP_

#include <array>
#include <cmath>
#include <string_view>

#include "phmm/model.hpp"
#include "phmm/schemes.hpp"

namespace phmm {

/// dX/dt = Y - X,  dY = (theta/eps)(mu X - Y) dt + (sigma/sqrt(eps)) dW.
/// Averaged drift (mu - 1) x; requires mu < 1.
class LinearOUModel {
 public:
  LinearOUModel(double theta, double mu, double sigma);

  static constexpr std::string_view kName = "linear_ou";

  double theta() const { return theta_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  Eigen::Index slow_dim() const { return 1; }
  Eigen::Index fast_dim() const { return 1; }

  void slow_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const { out[0] = y[0] - x[0]; }
  void fast_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const {
    out[0] = theta_ * (mu_ * x[0] - y[0]);
  }
  void fast_diffusion(ConstVectorRef, ConstVectorRef, MatrixRef out) const { out(0, 0) = sigma_; }

  double averaged_drift(double x) const { return (mu_ - 1.0) * x; }
  Vector averaged_drift(ConstVectorRef x) const { return Vector::Constant(1, averaged_drift(x[0])); }
  double fast_relaxation_time(ConstVectorRef) const { return 1.0 / theta_; }
  Vector fast_reference(ConstVectorRef x) const { return Vector::Constant(1, mu_ * x[0]); }

 private:
  double theta_, mu_, sigma_;
};

/// dX/dt = Y - X^3, fast process as in LinearOUModel. Averaged drift
/// mu x - x^3: stable equilibria at +-sqrt(mu), saddle at 0; requires mu > 0.
class DoubleWellModel {
 public:
  DoubleWellModel(double theta, double mu, double sigma);

  static constexpr std::string_view kName = "double_well";

  double theta() const { return theta_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  Eigen::Index slow_dim() const { return 1; }
  Eigen::Index fast_dim() const { return 1; }

  void slow_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const {
    out[0] = y[0] - x[0] * x[0] * x[0];
  }
  void fast_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const {
    out[0] = theta_ * (mu_ * x[0] - y[0]);
  }
  void fast_diffusion(ConstVectorRef, ConstVectorRef, MatrixRef out) const { out(0, 0) = sigma_; }

  double averaged_drift(double x) const { return mu_ * x - x * x * x; }
  Vector averaged_drift(ConstVectorRef x) const { return Vector::Constant(1, averaged_drift(x[0])); }
  double fast_relaxation_time(ConstVectorRef) const { return 1.0 / theta_; }
  Vector fast_reference(ConstVectorRef x) const { return Vector::Constant(1, mu_ * x[0]); }

 private:
  double theta_, mu_, sigma_;
};

/// dX/dt = Y^2 - nu X,  dY = -(1/eps) gamma(X) Y dt + (sigma/sqrt(eps)) dW
/// with gamma(x) = x^4/10 - x^2 + 3 (minimum 0.5 at x^2 = 5).
/// Averaged drift sigma^2 / (2 gamma(x)) - nu x.
class NonDiffusiveModel {
 public:
  NonDiffusiveModel(double nu, double sigma);

  static constexpr std::string_view kName = "non_diffusive";

  double nu() const { return nu_; }
  double sigma() const { return sigma_; }

  static double gamma(double x) {
    const double x2 = x * x;
    return x2 * x2 / 10.0 - x2 + 3.0;
  }
  static double gamma_prime(double x) { return 0.4 * x * x * x - 2.0 * x; }

  Eigen::Index slow_dim() const { return 1; }
  Eigen::Index fast_dim() const { return 1; }

  void slow_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const {
    out[0] = y[0] * y[0] - nu_ * x[0];
  }
  void fast_drift(ConstVectorRef x, ConstVectorRef y, VectorRef out) const {
    out[0] = -gamma(x[0]) * y[0];
  }
  void fast_diffusion(ConstVectorRef, ConstVectorRef, MatrixRef out) const { out(0, 0) = sigma_; }

  double averaged_drift(double x) const { return sigma_ * sigma_ / (2.0 * gamma(x)) - nu_ * x; }
  double averaged_drift_derivative(double x) const {
    const double g = gamma(x);
    return -sigma_ * sigma_ * gamma_prime(x) / (2.0 * g * g) - nu_;
  }
  Vector averaged_drift(ConstVectorRef x) const { return Vector::Constant(1, averaged_drift(x[0])); }
  double fast_relaxation_time(ConstVectorRef x) const { return 1.0 / gamma(x[0]); }
  Vector fast_reference(ConstVectorRef) const { return Vector::Zero(1); }

 private:
  double nu_, sigma_;
};

inline double averaged_drift(const LinearOUModel& m, double x) { return m.averaged_drift(x); }
inline double averaged_drift(const DoubleWellModel& m, double x) { return m.averaged_drift(x); }
inline double averaged_drift(const NonDiffusiveModel& m, double x) { return m.averaged_drift(x); }

/// Birkhoff estimate of F(x): the frozen-x fast process is started at
/// fast_reference(x), run for `burn_in` units of unit-rate fast time, then f
/// is averaged over the next `averaging_time` units (post-update states).
template <FastSlowSystem Model>
Vector empirical_averaged_drift(const Model& model, ConstVectorRef x, double micro_dt,
                                double burn_in, double averaging_time, RngStream& stream) {
  if (!(averaging_time > 0.0)) throw ArgumentError("empirical_averaged_drift: averaging time must be positive");
  if (!(micro_dt > 0.0) || burn_in < 0.0) throw ArgumentError("empirical_averaged_drift: bad step or burn-in");
  Vector y = fast_reference(model, x);
  const auto burn_steps = static_cast<std::int64_t>(std::ceil(burn_in / micro_dt));
  if (burn_steps > 0) detail::fast_burst(model, x, y, micro_dt, burn_steps, stream, nullptr);
  const auto avg_steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(averaging_time / micro_dt)));
  Vector f_avg;
  detail::fast_burst(model, x, y, micro_dt, avg_steps, stream, &f_avg);
  return f_avg;
}

/// Stationary variance of the slow variable of the linear model predicted by
/// the central limit theorem:
///   direct, phmm:  eps sigma^2 / (2 theta^2 (1 - mu))
///   hmm:           lambda times that.
/// The slow fluctuation is dZ = (mu - 1) Z dt + eta dV with
/// eta^2 = int_{-inf}^{inf} Cov(Y(0), Y(s)) ds = sigma^2 / theta^2.
double clt_stationary_variance_linear(const LinearOUModel& model, double eps, int lambda,
                                      Scheme scheme);

struct FixedPoint {
  double x;
  bool stable;
};

/// The three equilibria of the averaged non-diffusive model on (0, inf),
/// ascending: left stable, unstable, right stable. Sign-change scan on
/// [1e-6, 10] at resolution 1e-3 followed by bisection to 1e-10. Throws
/// DomainError unless exactly three roots with stability (+, -, +) exist.
std::array<FixedPoint, 3> fixed_points(const NonDiffusiveModel& model);

}  // namespace phmm

#endif  // PHMM_MODELS_HPP_
