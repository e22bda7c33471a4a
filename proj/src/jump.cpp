#include "phmm/jump.hpp"

#include <cmath>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

namespace phmm {

namespace {

// Slack for "stays in the orthant": states are x0 + eps * integers, so only
// accumulated rounding has to be tolerated.
constexpr double kOrthantSlack = 1e-9;

bool leaves_orthant(ConstVectorRef x, const Vector& nu, double eps) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] + eps * nu[i] < -kOrthantSlack) return true;
  }
  return false;
}

void check_run_args(const JumpModel& model, ConstVectorRef x0, double T) {
  if (x0.size() != model.dim()) throw DimensionError("jump run: x0 has the wrong dimension");
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("jump run: T must be positive");
  if (model.reactions().empty()) throw ArgumentError("jump run: model has no reactions");
}

}  // namespace

JumpModel::JumpModel(Eigen::Index dim, double eps) : dim_(dim), eps_(eps) {
  if (dim < 1) throw ArgumentError("jump model: dimension must be >= 1");
  if (!(eps > 0.0)) throw ArgumentError("jump model: eps must be positive");
}

JumpModel& JumpModel::add_reaction(Propensity a, Vector nu, std::string name) {
  if (!a) throw ArgumentError("jump model: empty propensity");
  if (nu.size() != dim_) throw DimensionError("jump model: stoichiometry has the wrong dimension");
  if (name.empty()) name = "r" + std::to_string(reactions_.size());
  reactions_.push_back({std::move(a), std::move(nu), std::move(name)});
  return *this;
}

double JumpModel::propensities(ConstVectorRef x, std::vector<double>& out) const {
  out.resize(reactions_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < reactions_.size(); ++k) {
    const auto& r = reactions_[k];
    double a = r.propensity(x);
    if (!std::isfinite(a)) {
      throw IntegrationError("propensity of reaction '" + r.name + "' is not finite", NAN, -1);
    }
    if (a < 0.0) throw DomainError("propensity of reaction '" + r.name + "' is negative");
    if (a > 0.0 && leaves_orthant(x, r.stoichiometry, eps_)) a = 0.0;
    out[k] = a;
    total += a;
  }
  if (!std::isfinite(total)) throw IntegrationError("total propensity overflowed", NAN, -1);
  return total;
}

JumpModel birth_death_model(double b, double d, double eps) {
  if (!(b >= 0.0) || !(d >= 0.0)) throw ArgumentError("birth-death: rates must be nonnegative");
  JumpModel m(1, eps);
  m.add_reaction([b](ConstVectorRef) { return b; }, Vector::Ones(1), "birth");
  m.add_reaction([d](ConstVectorRef x) { return d * x[0]; }, -Vector::Ones(1), "death");
  if (d > 0.0) m.relaxation_time = 1.0 / d;
  return m;
}

JumpRun ssa_run(const JumpModel& model, ConstVectorRef x0, double T, RngStream& stream,
                bool record_events) {
  check_run_args(model, x0, T);
  const double inv_eps = 1.0 / model.eps();
  const auto& rx = model.reactions();

  JumpRun run;
  run.path = Trajectory(model.dim());
  run.path.meta.scheme = "ssa";
  run.path.meta.seed = stream.root_seed();
  run.path.append(0.0, x0);

  Vector net = Vector::Zero(model.dim());
  Vector x = x0;
  std::vector<double> a;
  double t = 0.0;
  double t_last = 0.0;
  for (;;) {
    const double a0 = model.propensities(x, a);
    if (a0 == 0.0) {
      run.absorbed = true;
      if (!record_events && run.events > 0) run.path.append(t_last, x);
      return run;
    }
    t += boost::random::exponential_distribution<double>(a0 * inv_eps)(stream);
    if (t >= T) break;
    double u = stream.uniform_open() * a0;
    std::size_t k = 0;
    while (k + 1 < a.size() && (u >= a[k] || a[k] == 0.0)) {
      u -= a[k];
      ++k;
    }
    // Rounding can leave u just past the last positive propensity.
    while (a[k] == 0.0) --k;
    net += rx[k].stoichiometry;
    x = x0 + model.eps() * net;
    ++run.events;
    t_last = t;
    if (record_events) run.path.append(t, x);
  }
  run.path.append(T, x);
  return run;
}

JumpRun tau_leap_run(const JumpModel& model, ConstVectorRef x0, double T, double tau,
                     RngStream& stream, bool record_leaps) {
  check_run_args(model, x0, T);
  if (!(tau > 0.0)) throw ArgumentError("tau_leap_run: tau must be positive");
  const double eps = model.eps();
  const auto& rx = model.reactions();
  const std::int64_t leaps = step_count(T, tau);

  JumpRun run;
  run.path = Trajectory(model.dim());
  run.path.meta.scheme = "tau_leap";
  run.path.meta.seed = stream.root_seed();
  run.path.append(0.0, x0);

  Vector net = Vector::Zero(model.dim());
  Vector x = x0;
  std::vector<double> a;
  for (std::int64_t n = 0; n < leaps; ++n) {
    const double t0 = static_cast<double>(n) * tau;
    const double t1 = n + 1 == leaps ? T : static_cast<double>(n + 1) * tau;
    const double a0 = model.propensities(x, a);
    if (a0 == 0.0) {
      run.absorbed = true;
      if (!record_leaps && n > 0) run.path.append(t0, x);
      return run;
    }
    const double h = (t1 - t0) / eps;
    std::vector<std::int64_t> counts(a.size(), 0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] > 0.0) counts[k] = boost::random::poisson_distribution<std::int64_t, double>(a[k] * h)(stream);
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (counts[k] == 0) continue;
      const Vector& nu = rx[k].stoichiometry;
      std::int64_t cap = counts[k];
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (nu[i] < 0.0) {
          const auto room = static_cast<std::int64_t>(std::floor((x[i] + kOrthantSlack) / (eps * -nu[i])));
          cap = std::min(cap, std::max<std::int64_t>(room, 0));
        }
      }
      net += static_cast<double>(cap) * nu;
      x = x0 + eps * net;
      run.events += cap;
    }
    if (record_leaps || n + 1 == leaps) run.path.append(t1, x);
  }
  return run;
}

std::vector<Vector> jump_final_states(const JumpModel& model, ConstVectorRef x0, double T,
                                      double tau, std::int64_t runs, std::uint64_t root_seed,
                                      WorkerPool* pool) {
  if (runs < 1) throw ArgumentError("jump_final_states: runs must be >= 1");
  std::vector<Vector> out(static_cast<std::size_t>(runs));
  parallel_for(pool, out.size(), [&](std::size_t i) {
    RngStream stream(root_seed, {static_cast<std::int64_t>(i), 0});
    const JumpRun r = tau > 0.0 ? tau_leap_run(model, x0, T, tau, stream, false)
                                : ssa_run(model, x0, T, stream, false);
    out[i] = r.path.back();
  });
  return out;
}

}  // namespace phmm
