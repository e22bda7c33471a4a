#include <cmath>
#include <vector>

#include "doctest.h"

#include "oracles.hpp"
#include "phmm/fluctuations.hpp"
#include "phmm/jump.hpp"

using phmm::Vector;

namespace {

std::vector<double> first(const std::vector<Vector>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x[0]);
  return out;
}

}  // namespace

TEST_CASE("pure death is absorbed at zero") {
  const auto m = phmm::birth_death_model(0.0, 1.0, 0.01);
  phmm::RngStream s(1, {0, 0});
  const auto r = phmm::ssa_run(m, Vector::Constant(1, 0.05), 100.0, s);
  CHECK(r.absorbed);
  CHECK(r.events == 5);
  CHECK(r.path.size() == 6);
  CHECK(r.path.back()[0] == doctest::Approx(0.0).epsilon(1e-15));

  phmm::RngStream s2(1, {0, 0});
  const auto q = phmm::ssa_run(m, Vector::Constant(1, 0.05), 100.0, s2, false);
  CHECK(q.path.size() == 2);
  CHECK(q.path.back()[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(q.path.time(1) == r.path.time(5));
}

TEST_CASE("SSA events move the state by one scaled jump") {
  const auto m = phmm::birth_death_model(1.0, 1.0, 0.01);
  phmm::RngStream s(2, {0, 0});
  const auto r = phmm::ssa_run(m, Vector::Ones(1), 1.0, s);
  REQUIRE(r.path.size() == static_cast<std::size_t>(r.events) + 2);
  for (std::size_t i = 1; i + 1 < r.path.size(); ++i) {
    REQUIRE(std::abs(std::abs(r.path.state(i)[0] - r.path.state(i - 1)[0]) - 0.01) < 1e-12);
    REQUIRE(r.path.time(i) > r.path.time(i - 1));
  }
  CHECK(r.path.time(r.path.size() - 1) == 1.0);
  // states are lattice points of x0 + eps Z
  const double k = (r.path.back()[0] - 1.0) / 0.01;
  CHECK(std::abs(k - std::round(k)) < 1e-9);
}

TEST_CASE("pure birth SSA has Poisson counts") {
  const double eps = 0.01, T = 2.0;
  const auto m = phmm::birth_death_model(1.0, 0.0, eps);
  const auto xs = first(phmm::jump_final_states(m, Vector::Zero(1), T, 0.0, 5000, 3));
  // X(T) = eps N, N ~ Poisson(T / eps)
  const double mean = T, var = eps * T;
  CHECK(std::abs(oracle::mean(xs) - mean) < 5.0 * std::sqrt(var / xs.size()));
  CHECK(oracle::variance(xs) == doctest::Approx(var).epsilon(5.0 * std::sqrt(2.0 / xs.size())));
}

TEST_CASE("tau-leaping is exact for constant propensities") {
  const auto m = phmm::birth_death_model(1.0, 0.0, 0.01);
  const auto ssa = first(phmm::jump_final_states(m, Vector::Zero(1), 2.0, 0.0, 5000, 4));
  const auto leap = first(phmm::jump_final_states(m, Vector::Zero(1), 2.0, 0.3, 5000, 5));
  CHECK(phmm::ks_distance(ssa, leap) < 0.05);
}

TEST_CASE("birth-death moments from the fixed point") {
  // From n0 = 1/eps: N(T) = Bin(n0, p) + Poisson((1 - p)/eps), p = exp(-T),
  // so E X = 1 and Var X = eps (1 - p^2).
  const double eps = 0.01, T = 1.0;
  const auto m = phmm::birth_death_model(1.0, 1.0, eps);
  const auto xs = first(phmm::jump_final_states(m, Vector::Ones(1), T, 0.0, 10000, 6));
  const double var = eps * (1.0 - std::exp(-2.0 * T));
  CHECK(std::abs(oracle::mean(xs) - 1.0) < 5.0 * std::sqrt(var / xs.size()));
  CHECK(oracle::variance(xs) == doctest::Approx(var).epsilon(0.08));
}

TEST_CASE("stationary variance scales linearly with eps") {
  std::vector<double> le, lv;
  for (double eps : {0.1, 0.05, 0.02, 0.01}) {
    const auto m = phmm::birth_death_model(1.0, 1.0, eps);
    const auto xs = first(phmm::jump_final_states(m, Vector::Ones(1), 5.0, 0.0, 2000, 7));
    le.push_back(std::log(eps));
    lv.push_back(std::log(oracle::variance(xs)));
  }
  const auto fit = phmm::fit_line(le, lv);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fit.r_squared > 0.95);
}

TEST_CASE("tau-leap error shrinks with tau") {
  const auto m = phmm::birth_death_model(1.0, 1.0, 0.01);
  const auto ssa = first(phmm::jump_final_states(m, Vector::Zero(1), 1.0, 0.0, 10000, 8));
  double prev = 1.0;
  for (double tau : {0.2, 0.1, 0.05}) {
    const auto leap = first(phmm::jump_final_states(m, Vector::Zero(1), 1.0, tau, 10000, 9));
    const double d = phmm::ks_distance(ssa, leap);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("tau-leaping never leaves the orthant") {
  const auto m = phmm::birth_death_model(0.1, 10.0, 0.01);
  phmm::RngStream s(10, {0, 0});
  const auto r = phmm::tau_leap_run(m, Vector::Ones(1), 20.0, 1.0, s);
  for (std::size_t i = 0; i < r.path.size(); ++i) REQUIRE(r.path.state(i)[0] >= 0.0);
  CHECK(r.path.time(r.path.size() - 1) == 20.0);

  phmm::RngStream s2(10, {0, 0});
  const auto last = phmm::tau_leap_run(m, Vector::Ones(1), 1.5, 1.0, s2);
  CHECK(last.path.size() == 3);
  CHECK(last.path.time(2) == 1.5);
}

TEST_CASE("propensity validation") {
  phmm::JumpModel bad(1, 0.1);
  bad.add_reaction([](phmm::ConstVectorRef) { return -1.0; }, Vector::Ones(1));
  phmm::RngStream s(1, {0, 0});
  CHECK_THROWS_AS(phmm::ssa_run(bad, Vector::Ones(1), 1.0, s), phmm::DomainError);

  phmm::JumpModel inf(1, 0.1);
  inf.add_reaction([](phmm::ConstVectorRef) { return INFINITY; }, Vector::Ones(1));
  CHECK_THROWS_AS(phmm::tau_leap_run(inf, Vector::Ones(1), 1.0, 0.1, s), phmm::IntegrationError);

  phmm::JumpModel m(2, 0.1);
  CHECK_THROWS_AS(m.add_reaction([](phmm::ConstVectorRef) { return 1.0; }, Vector::Ones(1)), phmm::DimensionError);
  CHECK_THROWS_AS(phmm::ssa_run(m, Vector::Ones(2), 1.0, s), phmm::ArgumentError);
  CHECK_THROWS_AS(phmm::JumpModel(1, 0.0), phmm::ArgumentError);

  // a jump that would leave the orthant is switched off
  const auto bd = phmm::birth_death_model(1.0, 1.0, 0.1);
  std::vector<double> a;
  CHECK(bd.propensities(Vector::Constant(1, 0.05), a) == doctest::Approx(1.0));
  CHECK(a[1] == 0.0);
  CHECK(bd.reactions()[0].name == "birth");
}

TEST_CASE("final states do not depend on the worker pool") {
  const auto m = phmm::birth_death_model(1.0, 1.0, 0.01);
  phmm::WorkerPool pool(4);
  const auto a = first(phmm::jump_final_states(m, Vector::Ones(1), 1.0, 0.1, 300, 11));
  const auto b = first(phmm::jump_final_states(m, Vector::Ones(1), 1.0, 0.1, 300, 11, &pool));
  CHECK(a == b);
}
