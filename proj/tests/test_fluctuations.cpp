#include <cmath>
#include <vector>

#include "doctest.h"

#include "oracles.hpp"
#include "phmm/fluctuations.hpp"

using phmm::Vector;

namespace {

phmm::Trajectory path(const std::vector<double>& xs, double dt = 1.0) {
  phmm::Trajectory t(1);
  for (std::size_t i = 0; i < xs.size(); ++i) t.append(dt * static_cast<double>(i), Vector::Constant(1, xs[i]));
  return t;
}

const phmm::NonDiffusiveModel kNd(1.0, std::sqrt(3.0));

}  // namespace

TEST_CASE("stationary statistics skip records up to the burn-in") {
  const auto t = path({100.0, 1.0, 2.0, 3.0, 4.0});
  CHECK(phmm::stationary_mean(t, 0.0)[0] == doctest::Approx(2.5));
  CHECK(phmm::stationary_variance(t, 0.0)[0] == doctest::Approx(5.0 / 3.0));
  CHECK(phmm::stationary_variance(path({2.0, 2.0, 2.0}), -1.0)[0] == 0.0);
  CHECK_THROWS_AS(phmm::stationary_variance(t, 3.0), phmm::EstimationError);
  CHECK_THROWS_AS(phmm::stationary_mean(t, 4.0), phmm::EstimationError);
}

TEST_CASE("histogram binning") {
  const std::vector<double> edges{0.0, 1.0, 2.0};
  auto h = phmm::histogram(std::vector<double>{0.5}, edges);
  CHECK(h.counts == std::vector<std::int64_t>{1, 0});

  h = phmm::histogram(std::vector<double>{-1.0, 0.0, 1.0, 2.0, 2.5, 1.999}, edges);
  CHECK(h.underflow == 1);
  CHECK(h.overflow == 1);
  CHECK(h.counts == std::vector<std::int64_t>{1, 3});  // last bin closed
  CHECK(h.total() == 6);
  const auto d = h.density();
  CHECK(d[0] + d[1] == doctest::Approx(4.0 / 6.0));

  CHECK_THROWS_AS(phmm::histogram(std::vector<double>{1.0}, std::vector<double>{0.0, 0.0}), phmm::ArgumentError);
  CHECK_THROWS_AS(phmm::histogram(std::vector<double>{1.0}, std::vector<double>{1.0}), phmm::ArgumentError);
  CHECK(phmm::histogram(std::vector<double>{}, edges).density() == std::vector<double>{0.0, 0.0});
}

TEST_CASE("trajectory histogram respects burn-in") {
  const auto t = path({5.0, 0.5, 0.5, 1.5});
  const auto h = phmm::histogram(t, 0.0, phmm::uniform_edges(0.0, 2.0, 2));
  CHECK(h.counts == std::vector<std::int64_t>{2, 1});
  CHECK(h.overflow == 0);
  CHECK_THROWS_AS(phmm::histogram(t, 0.0, phmm::uniform_edges(0.0, 2.0, 2), 1), phmm::DimensionError);
  CHECK_THROWS_AS(phmm::uniform_edges(1.0, 0.0, 3), phmm::ArgumentError);
}

TEST_CASE("empirical CDF and quantiles") {
  const phmm::EmpiricalCDF F({3.0, 1.0, 2.0, 2.0});
  CHECK(F(0.5) == 0.0);
  CHECK(F(1.0) == 0.25);
  CHECK(F(2.0) == 0.75);
  CHECK(F(10.0) == 1.0);
  CHECK(F.quantile(0.25) == 1.0);
  CHECK(F.quantile(0.26) == 2.0);
  CHECK(F.median() == 2.0);
  CHECK(F.quantile(1.0) == 3.0);
  CHECK_THROWS_AS(F.quantile(0.0), phmm::ArgumentError);
  CHECK_THROWS_AS(phmm::EmpiricalCDF({}), phmm::EstimationError);
  CHECK_THROWS_AS(phmm::EmpiricalCDF({1.0, NAN}), phmm::ArgumentError);
}

TEST_CASE("KS distance properties") {
  const std::vector<double> a{1, 2, 3, 4}, b{5, 6, 7};
  CHECK(phmm::ks_distance(a, a) == 0.0);
  CHECK(phmm::ks_distance(a, b) == 1.0);
  CHECK(phmm::ks_distance(b, a) == 1.0);
  CHECK(phmm::ks_distance(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}) == 0.5);
}

TEST_CASE("KS distance agrees with a brute-force evaluation, ties included") {
  phmm::RngStream s(4, {0, 0});
  for (int trial = 0; trial < 50; ++trial) {
    const auto na = 1 + static_cast<int>(s() % 40), nb = 1 + static_cast<int>(s() % 40);
    std::vector<double> a, b;
    // rounding creates ties within and across samples
    for (int i = 0; i < na; ++i) a.push_back(std::round(4.0 * s.normal()) / 2.0);
    for (int i = 0; i < nb; ++i) b.push_back(std::round(4.0 * s.normal() + (trial % 3)) / 2.0);
    const double d = phmm::ks_distance(a, b);
    REQUIRE(d == doctest::Approx(oracle::brute_force_ks(a, b)).epsilon(1e-14));
    REQUIRE(d == phmm::ks_distance(b, a));
    REQUIRE(d >= 0.0);
    REQUIRE(d <= 1.0);
  }
}

TEST_CASE("basin validation") {
  phmm::BasinSpec b{0.0, 1.0, phmm::Crossing::upcrossing};
  CHECK_NOTHROW(b.validate());
  CHECK(b.reached(1.0));
  CHECK_FALSE(b.reached(0.99));
  b.direction = phmm::Crossing::downcrossing;
  CHECK_THROWS_AS(b.validate(), phmm::ArgumentError);
  b.target_threshold = -1.0;
  CHECK(b.reached(-1.5));
  b.start_point = NAN;
  CHECK_THROWS_AS(b.validate(), phmm::ArgumentError);
}

TEST_CASE("noise-free first passage follows the averaged flow") {
  const phmm::LinearOUModel m(1.0, 0.5, 0.0);
  const auto c = phmm::SchemeConfig::from_micro_count(0.01, 1, 10, 0.1, 3);
  const phmm::BasinSpec basin{1.0, 0.5, phmm::Crossing::downcrossing};
  phmm::FptOptions opt;
  opt.t_cap = 10.0;
  for (auto scheme : {phmm::Scheme::hmm, phmm::Scheme::phmm, phmm::Scheme::averaged, phmm::Scheme::direct}) {
    const auto s = phmm::first_passage_times(m, scheme, c, basin, 3, opt);
    for (const auto& x : s) {
      CHECK_FALSE(x.censored);
      CHECK(x.elapsed == doctest::Approx(std::log(2.0) / 0.5).epsilon(0.05));
    }
  }
}

TEST_CASE("first passage censoring and errors") {
  const phmm::LinearOUModel m(1.0, 0.5, 1.0);
  const auto c = phmm::SchemeConfig::from_micro_count(0.01, 1, 10, 0.1, 3);
  phmm::FptOptions opt;
  opt.t_cap = 0.5;
  const phmm::BasinSpec far{0.0, 50.0, phmm::Crossing::upcrossing};
  CHECK_THROWS_AS(phmm::first_passage_times(m, phmm::Scheme::hmm, c, far, 4, opt), phmm::EstimationError);
  opt.t_cap = 0.0;
  CHECK_THROWS_AS(phmm::first_passage_times(m, phmm::Scheme::hmm, c, far, 4, opt), phmm::ArgumentError);

  std::vector<phmm::FirstPassageSample> s(3);
  s[0].elapsed = 1.0;
  s[1].elapsed = 3.0;
  s[2].elapsed = 9.0;
  s[2].censored = true;
  CHECK(phmm::passage_times(s) == std::vector<double>{1.0, 3.0});
  CHECK(phmm::censored_count(s) == 1);
  const auto row = phmm::summarize_passages(s, 2);
  CHECK(row.mfpt == 2.0);
  CHECK(row.stderr_ == doctest::Approx(1.0));
  CHECK(row.n == 2);
  CHECK(row.n_censored == 1);
}

TEST_CASE("a coarser crossing check only delays detection") {
  const phmm::LinearOUModel m(1.0, 0.5, 5.0);
  const auto c = phmm::SchemeConfig::from_micro_count(0.01, 1, 2, 0.1, 8);
  const phmm::BasinSpec basin{0.0, 0.5, phmm::Crossing::upcrossing};
  phmm::FptOptions opt;
  opt.t_cap = 200.0;
  opt.fast_burn_in = 5.0;
  const auto fine = phmm::first_passage_times(m, phmm::Scheme::hmm, c, basin, 500, opt);
  opt.check_stride = 10;
  const auto coarse = phmm::first_passage_times(m, phmm::Scheme::hmm, c, basin, 500, opt);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    REQUIRE(coarse[i].elapsed >= fine[i].elapsed - 1e-12);
    const double k = coarse[i].elapsed / (10 * c.macro_dt);
    REQUIRE(std::abs(k - std::round(k)) < 1e-6);
  }
  CHECK(phmm::ks_distance(phmm::passage_times(fine), phmm::passage_times(coarse)) < 0.05);
}

TEST_CASE("MFPT sweep: HMM and PHMM agree at lambda = 1") {
  const phmm::DoubleWellModel m(1.0, 1.0, 15.0);
  const auto c = phmm::SchemeConfig::from_macro_dt(1e-3, 1, 0.006, 0.05, 4);
  const phmm::BasinSpec basin{-1.0, 0.0, phmm::Crossing::upcrossing};
  phmm::FptOptions opt;
  opt.t_cap = 400.0;
  opt.fast_burn_in = 5.0;
  const std::vector<int> lambdas{1};
  const auto h = phmm::mean_first_passage_vs_lambda(m, phmm::Scheme::hmm, c, basin, lambdas, 8, opt);
  const auto p = phmm::mean_first_passage_vs_lambda(m, phmm::Scheme::phmm, c, basin, lambdas, 8, opt);
  CHECK(h[0].mfpt == p[0].mfpt);
  CHECK(h[0].n + h[0].n_censored == 8);
}

TEST_CASE("line fits") {
  const std::vector<double> x{1.0, 0.5, 0.25}, y{3.0, 2.0, 1.5};
  const auto f = phmm::fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(phmm::fit_line(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), phmm::ArgumentError);

  std::vector<phmm::MfptRow> rows;
  for (int l : {1, 2, 4}) rows.push_back({l, 0.1 * std::exp(3.0 / l), 0.0, 10, 0});
  const auto g = phmm::fit_log_mfpt(rows);
  CHECK(g.slope == doctest::Approx(3.0));
  CHECK(g.intercept == doctest::Approx(std::log(0.1)));
}

TEST_CASE("LDP escape prediction") {
  CHECK(phmm::ldp_escape_prediction(0.1, 0.01, 2.0, 2.0, 7.0) == 7.0);
  CHECK(phmm::ldp_escape_prediction(0.1, 0.01, 1.0, 2.0, 7.0) == doctest::Approx(7.0 * std::exp(5.0)));
  CHECK(phmm::ldp_escape_prediction(0.1, 0.01, 4.0, 2.0, 7.0) == doctest::Approx(7.0 * std::exp(-2.5)));
  CHECK_THROWS_AS(phmm::ldp_escape_prediction(0.1, 0.01, 1.0, 1.0, 0.0), phmm::ArgumentError);
}

TEST_CASE("Hamiltonian of the non-diffusive model") {
  const auto fp = phmm::fixed_points(kNd);
  for (double x : {0.3, 1.0, 2.0, 3.0}) {
    CHECK(phmm::hamiltonian_nondiffusive(x, 0.0, kNd) == 0.0);
    // dH/dp at p = 0 is the averaged drift
    const double h = 1e-6;
    const double dH = (phmm::hamiltonian_nondiffusive(x, h, kNd) - phmm::hamiltonian_nondiffusive(x, -h, kNd)) / (2 * h);
    CHECK(dH == doctest::Approx(kNd.averaged_drift(x)).epsilon(1e-6));
    // convex in p
    for (double p : {-2.0, -0.5, 0.02}) {
      const double c = phmm::hamiltonian_nondiffusive(x, p + 0.01, kNd) - 2 * phmm::hamiltonian_nondiffusive(x, p, kNd) +
                       phmm::hamiltonian_nondiffusive(x, p - 0.01, kNd);
      CHECK(c > 0.0);
    }
  }
  for (const auto& f : fp) {
    const double dH = (phmm::hamiltonian_nondiffusive(f.x, 1e-6, kNd) - phmm::hamiltonian_nondiffusive(f.x, -1e-6, kNd)) / 2e-6;
    CHECK(std::abs(dH) < 1e-6);
  }
  const double g = phmm::NonDiffusiveModel::gamma(1.0);
  CHECK_THROWS_AS(phmm::hamiltonian_nondiffusive(1.0, g * g / 6.0 + 0.1, kNd), phmm::DomainError);
}

TEST_CASE("V' solves H(x, V') = 0 up to the branch limit") {
  const double lim = phmm::quasipotential_branch_limit(kNd);
  CHECK(lim == doctest::Approx(2.7291).epsilon(1e-4));
  CHECK(kNd.nu() * lim * phmm::NonDiffusiveModel::gamma(lim) == doctest::Approx(3.0));
  for (double x = 0.3; x < lim - 1e-3; x += 0.01) {
    REQUIRE(std::abs(phmm::hamiltonian_nondiffusive(x, phmm::quasipotential_derivative(x, kNd), kNd)) < 1e-8);
  }
  // past the limit the closed form is the spurious root
  CHECK(std::abs(phmm::hamiltonian_nondiffusive(3.0, phmm::quasipotential_derivative(3.0, kNd), kNd)) > 0.1);
}

TEST_CASE("quasi-potential shape") {
  const auto fp = phmm::fixed_points(kNd);
  for (const auto& f : fp) CHECK(std::abs(phmm::quasipotential_derivative(f.x, kNd)) < 1e-9);
  CHECK(phmm::quasipotential(1.3, 1.3, kNd) == 0.0);

  const double left = phmm::quasipotential(fp[0].x, fp[1].x, kNd);
  const double right = phmm::quasipotential(fp[2].x, fp[1].x, kNd);
  CHECK(left == doctest::Approx(0.45462).epsilon(1e-4));
  CHECK(right == doctest::Approx(0.03934).epsilon(1e-3));
  CHECK(left / right > 5.0);

  // increasing from the left well to the saddle, decreasing after it
  for (double x = fp[0].x + 0.05; x < fp[1].x; x += 0.05) CHECK(phmm::quasipotential_derivative(x, kNd) > 0.0);
  for (double x = fp[1].x + 0.05; x < fp[2].x; x += 0.05) CHECK(phmm::quasipotential_derivative(x, kNd) < 0.0);

  // antisymmetric in its endpoints, additive over intervals
  CHECK(phmm::quasipotential(fp[1].x, fp[0].x, kNd) == doctest::Approx(-left).epsilon(1e-12));
  CHECK(phmm::quasipotential(0.4, 2.0, kNd) ==
        doctest::Approx(phmm::quasipotential(0.4, 1.0, kNd) + phmm::quasipotential(1.0, 2.0, kNd)).epsilon(1e-10));

  CHECK_THROWS_AS(phmm::quasipotential(-1.0, 1.0, kNd), phmm::DomainError);
  CHECK_THROWS_AS(phmm::quasipotential(0.5, 0.0, kNd), phmm::DomainError);
  CHECK_THROWS_AS(phmm::quasipotential_derivative(0.0, kNd), phmm::DomainError);
}

TEST_CASE("quasi-potential quadrature against composite Simpson") {
  auto dv = [](double x) {
    const double g = phmm::NonDiffusiveModel::gamma(x);
    return (x * g - 1.5) / (x * x);
  };
  for (auto [a, b] : {std::pair{0.3, 3.0}, std::pair{0.5553241, 1.7713637}, std::pair{1.0, 1.01}}) {
    const double ref = oracle::simpson(dv, a, b, 20000);
    CHECK(phmm::quasipotential(a, b, kNd) == doctest::Approx(ref).epsilon(1e-9));
  }
}
