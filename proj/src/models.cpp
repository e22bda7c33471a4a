#include "phmm/models.hpp"

#include <string>
#include <vector>

namespace phmm {

LinearOUModel::LinearOUModel(double theta, double mu, double sigma)
    : theta_(theta), mu_(mu), sigma_(sigma) {
  if (!(theta > 0.0)) throw DomainError("linear_ou: theta must be positive");
  if (!(mu < 1.0)) throw DomainError("linear_ou: mu must be < 1 for a stable averaged system");
  if (!(sigma >= 0.0)) throw DomainError("linear_ou: sigma must be nonnegative");
}

DoubleWellModel::DoubleWellModel(double theta, double mu, double sigma)
    : theta_(theta), mu_(mu), sigma_(sigma) {
  if (!(theta > 0.0)) throw DomainError("double_well: theta must be positive");
  if (!(mu > 0.0)) throw DomainError("double_well: mu must be positive for two wells");
  if (!(sigma >= 0.0)) throw DomainError("double_well: sigma must be nonnegative");
}

NonDiffusiveModel::NonDiffusiveModel(double nu, double sigma) : nu_(nu), sigma_(sigma) {
  if (!(nu > 0.0)) throw DomainError("non_diffusive: nu must be positive");
  if (!(sigma > 0.0)) throw DomainError("non_diffusive: sigma must be positive");
}

double clt_stationary_variance_linear(const LinearOUModel& model, double eps, int lambda,
                                      Scheme scheme) {
  if (!(model.mu() < 1.0)) throw DomainError("clt variance: mu >= 1 has no stationary regime");
  if (!(eps > 0.0) || lambda < 1) throw ArgumentError("clt variance: need eps > 0, lambda >= 1");
  const double theta = model.theta();
  const double base =
      eps * model.sigma() * model.sigma() / (2.0 * theta * theta * (1.0 - model.mu()));
  switch (scheme) {
    case Scheme::direct:
    case Scheme::phmm:
      return base;
    case Scheme::hmm:
      return static_cast<double>(lambda) * base;
    case Scheme::averaged:
      break;
  }
  throw ArgumentError("clt variance: the averaged scheme has no fluctuations");
}

std::array<FixedPoint, 3> fixed_points(const NonDiffusiveModel& model) {
  constexpr double lo = 1e-6;
  constexpr double hi = 10.0;
  constexpr double step = 1e-3;
  constexpr double tol = 1e-10;

  auto F = [&](double x) { return model.averaged_drift(x); };
  std::vector<double> roots;
  double a = lo;
  double fa = F(a);
  const auto n = static_cast<long>(std::ceil((hi - lo) / step));
  for (long i = 1; i <= n; ++i) {
    const double b = std::min(hi, lo + static_cast<double>(i) * step);
    const double fb = F(b);
    if (fa == 0.0) {
      roots.push_back(a);
    } else if ((fa < 0.0) != (fb < 0.0) && fb != 0.0) {
      double l = a, r = b, fl = fa;
      while (r - l > tol) {
        const double m = 0.5 * (l + r);
        const double fm = F(m);
        if ((fm < 0.0) == (fl < 0.0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      roots.push_back(0.5 * (l + r));
    }
    a = b;
    fa = fb;
  }
  if (roots.size() != 3) {
    throw DomainError("non_diffusive: expected 3 equilibria of the averaged drift, found " +
                      std::to_string(roots.size()));
  }
  std::array<FixedPoint, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = {roots[i], model.averaged_drift_derivative(roots[i]) < 0.0};
  }
  if (!out[0].stable || out[1].stable || !out[2].stable) {
    throw DomainError("non_diffusive: equilibria are not ordered stable/unstable/stable");
  }
  return out;
}

}  // namespace phmm
