#include "experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include "json.hpp"

#include "phmm/fluctuations.hpp"
#include "phmm/jump.hpp"
#include "phmm/models.hpp"
#include "phmm/schemes.hpp"

namespace phmm::cli {

namespace {

using SdeModel = std::variant<LinearOUModel, DoubleWellModel, NonDiffusiveModel>;

const Cell kEmpty = std::string();

template <class F>
auto as_config_error(const ConfigFile& c, const std::string& section, const std::string& key, F&& f) {
  try {
    return f();
  } catch (const phmm::Error& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what(), c.line_of(section, key));
  }
}

SdeModel read_sde_model(const ConfigFile& c) {
  const std::string name = c.get_string("model", "name");
  return as_config_error(c, "model", "name", [&]() -> SdeModel {
    if (name == LinearOUModel::kName) {
      return LinearOUModel(c.get_double("model", "theta"), c.get_double("model", "mu"),
                           c.get_double("model", "sigma"));
    }
    if (name == DoubleWellModel::kName) {
      return DoubleWellModel(c.get_double("model", "theta"), c.get_double("model", "mu"),
                             c.get_double("model", "sigma"));
    }
    if (name == NonDiffusiveModel::kName) {
      return NonDiffusiveModel(c.get_double("model", "nu"), c.get_double("model", "sigma"));
    }
    throw ConfigError("[model] name: unknown model '" + name +
                          "' (expected linear_ou, double_well or non_diffusive)",
                      c.line_of("model", "name"));
  });
}

struct SchemePlan {
  std::vector<Scheme> schemes;
  std::vector<int> lambdas;
  std::vector<SchemeConfig> configs;  // one per lambda

  const SchemeConfig& at(int lambda) const {
    const auto it = std::find(lambdas.begin(), lambdas.end(), lambda);
    return configs[static_cast<std::size_t>(it - lambdas.begin())];
  }
  bool uses(Scheme s) const { return std::find(schemes.begin(), schemes.end(), s) != schemes.end(); }
};

SchemePlan read_schemes(const ConfigFile& c, std::uint64_t seed) {
  SchemePlan p;
  for (const auto& s : c.get_strings("scheme", "name")) {
    p.schemes.push_back(as_config_error(c, "scheme", "name", [&] { return parse_scheme(s); }));
  }
  for (auto l : c.get_ints("scheme", "lambda")) {
    if (l < 1 || l > 1'000'000) {
      throw ConfigError("[scheme] lambda: must be a positive integer", c.line_of("scheme", "lambda"));
    }
    if (std::find(p.lambdas.begin(), p.lambdas.end(), l) != p.lambdas.end()) {
      throw ConfigError("[scheme] lambda: duplicate value " + std::to_string(l), c.line_of("scheme", "lambda"));
    }
    p.lambdas.push_back(static_cast<int>(l));
  }
  const double eps = c.get_double("scheme", "eps");
  const double micro_dt = c.get_double("scheme", "micro_dt");
  const bool by_dt = c.has("scheme", "macro_dt");
  const bool by_count = c.has("scheme", "micro_count");
  if (by_dt == by_count) {
    throw ConfigError("[scheme]: set exactly one of macro_dt and micro_count");
  }
  const std::string key = by_dt ? "macro_dt" : "micro_count";
  const double macro_dt = by_dt ? c.get_double("scheme", "macro_dt") : 0.0;
  const std::int64_t count = by_count ? c.get_int("scheme", "micro_count") : 0;
  const bool cold = c.get_bool("scheme", "cold_restart", false);
  const double cold_time = c.get_double("scheme", "cold_restart_fast_time", 50.0);
  for (int l : p.lambdas) {
    SchemeConfig sc = as_config_error(c, "scheme", key, [&] {
      return by_dt ? SchemeConfig::from_macro_dt(eps, l, macro_dt, micro_dt, seed)
                   : SchemeConfig::from_micro_count(eps, l, count, micro_dt, seed);
    });
    sc.cold_restart = cold;
    sc.cold_restart_fast_time = cold_time;
    p.configs.push_back(sc);
  }
  return p;
}

struct RunPlan {
  double T = 0.0;
  double burn_in = 0.0;
  double x0 = 0.0;
  std::optional<double> y0;
  std::optional<double> record_dt;
  double fast_equilibration = 10.0;
};

RunPlan read_run(const ConfigFile& c, bool stationary) {
  RunPlan r;
  r.x0 = c.get_double("run", "x0");
  if (c.has("run", "y0")) r.y0 = c.get_double("run", "y0");
  if (stationary) {
    r.T = c.get_double("run", "T");
    r.burn_in = c.get_double("run", "burn_in", 0.0);
    if (!(r.T > 0.0)) throw ConfigError("[run] T: must be positive", c.line_of("run", "T"));
    if (!(r.burn_in >= 0.0) || r.burn_in >= r.T) {
      throw ConfigError("[run] burn_in: must lie in [0, T)", c.line_of("run", "burn_in"));
    }
    if (c.has("run", "record_dt")) {
      r.record_dt = c.get_double("run", "record_dt");
      if (!(*r.record_dt > 0.0)) throw ConfigError("[run] record_dt: must be positive", c.line_of("run", "record_dt"));
    }
  }
  r.fast_equilibration = c.get_double("run", "fast_equilibration", 10.0);
  if (r.fast_equilibration < 0.0) {
    throw ConfigError("[run] fast_equilibration: must be >= 0", c.line_of("run", "fast_equilibration"));
  }
  return r;
}

BasinSpec read_basin(const ConfigFile& c) {
  BasinSpec b;
  b.start_point = c.get_double("basin", "start");
  b.target_threshold = c.get_double("basin", "threshold");
  const std::string dir = c.get_string("basin", "direction", b.target_threshold > b.start_point ? "up" : "down");
  if (dir == "up") {
    b.direction = Crossing::upcrossing;
  } else if (dir == "down") {
    b.direction = Crossing::downcrossing;
  } else {
    throw ConfigError("[basin] direction: expected up or down", c.line_of("basin", "direction"));
  }
  as_config_error(c, "basin", "threshold", [&] { b.validate(); return 0; });
  return b;
}

BasinSpec reversed(const BasinSpec& b) {
  BasinSpec r = b;
  std::swap(r.start_point, r.target_threshold);
  r.direction = b.direction == Crossing::upcrossing ? Crossing::downcrossing : Crossing::upcrossing;
  return r;
}

std::string direction_label(const BasinSpec& b) {
  return b.direction == Crossing::upcrossing ? "left_to_right" : "right_to_left";
}

FptOptions read_fpt_options(const ConfigFile& c) {
  FptOptions o;
  o.t_cap = c.get_double("analysis", "t_cap");
  o.fast_burn_in = c.get_double("analysis", "fast_burn_in", 50.0);
  o.check_stride = c.get_int("analysis", "check_stride", 1);
  if (!(o.t_cap > 0.0)) throw ConfigError("[analysis] t_cap: must be positive", c.line_of("analysis", "t_cap"));
  if (o.check_stride < 1) {
    throw ConfigError("[analysis] check_stride: must be >= 1", c.line_of("analysis", "check_stride"));
  }
  return o;
}

std::int64_t read_positive(const ConfigFile& c, const std::string& section, const std::string& key) {
  const auto v = c.get_int(section, key);
  if (v < 1) throw ConfigError("[" + section + "] " + key + ": must be >= 1", c.line_of(section, key));
  return v;
}

// One stationary run of a (scheme, lambda) pair.
struct Job {
  Scheme scheme;
  int lambda;
  SchemeConfig cfg;
};

std::vector<Job> stationary_jobs(const SchemePlan& sp, std::uint64_t seed) {
  std::vector<Job> jobs;
  for (Scheme s : sp.schemes) {
    if (s == Scheme::direct) {
      jobs.push_back({s, 1, sp.configs.front().with_seed(derive_seed(seed, 0))});
      continue;
    }
    for (int l : sp.lambdas) jobs.push_back({s, l, sp.at(l).with_seed(derive_seed(seed, static_cast<std::uint64_t>(l)))});
  }
  return jobs;
}

template <class Model>
Trajectory stationary_run(const Model& m, const Job& job, const RunPlan& rp, const SchemePlan& sp,
                          std::uint64_t hash) {
  const Vector x0 = Vector::Constant(1, rp.x0);
  const Vector y0 = rp.y0 ? Vector::Constant(1, *rp.y0) : fast_reference(m, x0);
  RunOptions ro;
  ro.fast_equilibration = rp.fast_equilibration;
  ro.config_hash = hash;
  const double step = scheme_step(job.scheme, job.cfg);
  double record_dt = rp.record_dt.value_or(job.scheme == Scheme::direct ? sp.configs.front().macro_dt : step);
  ro.record_stride = std::max<std::int64_t>(1, std::llround(record_dt / step));
  return run_scheme(m, job.scheme, x0, y0, job.cfg, rp.T, ro);
}

Cell cell(double v) { return v; }
Cell cell(std::int64_t v) { return v; }
Cell cell(int v) { return static_cast<std::int64_t>(v); }
Cell cell(std::string v) { return v; }
Cell cell(std::string_view v) { return std::string(v); }
Cell cell(const char* v) { return std::string(v); }

std::string num(double v) { return format_cell(v); }

// ---------------------------------------------------------------------------

Experiment plan_histogram(Experiment ex, const ConfigFile& c) {
  const SdeModel model = read_sde_model(c);
  const SchemePlan sp = read_schemes(c, ex.seed);
  const RunPlan rp = read_run(c, true);
  const double lo = c.get_double("analysis", "lo");
  const double hi = c.get_double("analysis", "hi");
  const auto bins = read_positive(c, "analysis", "bins");
  const auto edges = as_config_error(c, "analysis", "bins", [&] { return uniform_edges(lo, hi, static_cast<int>(bins)); });
  const auto hash = ex.config_hash;

  ex.run = [=](WorkerPool* pool) {
    const auto jobs = stationary_jobs(sp, ex.seed);
    std::vector<Histogram> hists(jobs.size());
    parallel_for(pool, jobs.size(), [&](std::size_t i) {
      std::visit([&](const auto& m) {
        hists[i] = histogram(stationary_run(m, jobs[i], rp, sp, hash), rp.burn_in, edges);
      }, model);
    });
    Table t;
    t.columns = {"scheme", "lambda", "bin_lo", "bin_hi", "count", "density"};
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto dens = hists[i].density();
      for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        t.rows.push_back({cell(scheme_name(jobs[i].scheme)), cell(jobs[i].lambda), cell(edges[b]),
                          cell(edges[b + 1]), cell(hists[i].counts[b]), cell(dens[b])});
      }
      t.notes.emplace_back("outside_range " + std::string(scheme_name(jobs[i].scheme)) + " lambda=" +
                               std::to_string(jobs[i].lambda),
                           "underflow=" + std::to_string(hists[i].underflow) +
                               " overflow=" + std::to_string(hists[i].overflow));
    }
    return ExperimentResult{{t}, std::to_string(jobs.size()) + " histograms"};
  };
  return ex;
}

Experiment plan_variance(Experiment ex, const ConfigFile& c) {
  const SdeModel model = read_sde_model(c);
  const SchemePlan sp = read_schemes(c, ex.seed);
  const RunPlan rp = read_run(c, true);
  const auto hash = ex.config_hash;

  ex.run = [=](WorkerPool* pool) {
    const auto jobs = stationary_jobs(sp, ex.seed);
    std::vector<std::pair<double, double>> stats(jobs.size());
    parallel_for(pool, jobs.size(), [&](std::size_t i) {
      std::visit([&](const auto& m) {
        const auto tr = stationary_run(m, jobs[i], rp, sp, hash);
        stats[i] = {stationary_variance(tr, rp.burn_in)[0], stationary_mean(tr, rp.burn_in)[0]};
      }, model);
    });
    Table t;
    t.columns = {"scheme", "lambda", "variance", "mean", "clt_prediction"};
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      Cell pred = kEmpty;
      if (const auto* lin = std::get_if<LinearOUModel>(&model)) {
        pred = clt_stationary_variance_linear(*lin, jobs[i].cfg.eps, jobs[i].lambda, jobs[i].scheme);
      }
      t.rows.push_back({cell(scheme_name(jobs[i].scheme)), cell(jobs[i].lambda), cell(stats[i].first),
                        cell(stats[i].second), pred});
    }
    return ExperimentResult{{t}, std::to_string(jobs.size()) + " variance estimates"};
  };
  return ex;
}

Experiment plan_mfpt(Experiment ex, const ConfigFile& c) {
  const SdeModel model = read_sde_model(c);
  const SchemePlan sp = read_schemes(c, ex.seed);
  const BasinSpec basin = read_basin(c);
  const FptOptions fo = read_fpt_options(c);
  const auto samples = read_positive(c, "analysis", "samples");
  std::optional<double> barrier;
  if (c.has("analysis", "ldp_barrier")) barrier = c.get_double("analysis", "ldp_barrier");
  if (!barrier && sp.uses(Scheme::hmm) && sp.lambdas.size() < 2) {
    throw ConfigError("[analysis]: the LDP curve needs ldp_barrier or at least two lambdas to fit one");
  }

  ex.run = [=](WorkerPool* pool) {
    FptOptions o = fo;
    o.pool = pool;
    Table t;
    t.columns = {"scheme", "lambda", "mfpt", "stderr", "n", "n_censored"};
    std::vector<MfptRow> hmm_rows;
    for (Scheme s : sp.schemes) {
      std::vector<MfptRow> rows;
      std::visit([&](const auto& m) {
        if (s == Scheme::direct) {
          const auto smp = first_passage_times(m, s, sp.configs.front().with_seed(derive_seed(ex.seed, 0)),
                                               basin, samples, o);
          rows.push_back(summarize_passages(smp, 1));
        } else {
          rows = mean_first_passage_vs_lambda(m, s, sp.configs.front(), basin, sp.lambdas, samples, o);
        }
      }, model);
      for (const auto& r : rows) {
        t.rows.push_back({cell(scheme_name(s)), cell(r.lambda), cell(r.mfpt), cell(r.stderr_), cell(r.n),
                          cell(r.n_censored)});
      }
      if (s == Scheme::hmm) hmm_rows = rows;
    }
    std::string summary = std::to_string(t.rows.size()) + " MFPT rows";
    if (!hmm_rows.empty()) {
      const auto cal = *std::min_element(hmm_rows.begin(), hmm_rows.end(),
                                         [](const MfptRow& a, const MfptRow& b) { return a.lambda < b.lambda; });
      const double eps = sp.configs.front().eps;
      double v = 0.0;
      if (barrier) {
        v = *barrier;
      } else {
        const auto fit = fit_log_mfpt(hmm_rows);
        v = fit.slope * eps;
        t.notes.emplace_back("hmm_fit", "log_mfpt = " + num(fit.intercept) + " + " + num(fit.slope) +
                                            " / lambda, r_squared = " + num(fit.r_squared));
        summary += ", HMM fit b = " + num(fit.slope) + " (R^2 " + num(fit.r_squared) + ")";
      }
      t.notes.emplace_back("ldp_curve", "barrier = " + num(v) + ", calibrated at lambda = " +
                                            std::to_string(cal.lambda));
      for (int l : sp.lambdas) {
        t.rows.push_back({cell("ldp_prediction"), cell(l), cell(ldp_escape_prediction(v, eps, l, cal.lambda, cal.mfpt)),
                          kEmpty, kEmpty, kEmpty});
      }
    }
    return ExperimentResult{{t}, summary};
  };
  return ex;
}

Experiment plan_fpt_cdf(Experiment ex, const ConfigFile& c) {
  const SdeModel model = read_sde_model(c);
  const SchemePlan sp = read_schemes(c, ex.seed);
  const BasinSpec basin = read_basin(c);
  const bool both = c.get_bool("analysis", "both_directions", false);
  const FptOptions fo = read_fpt_options(c);
  const auto samples = read_positive(c, "analysis", "samples");

  ex.run = [=](WorkerPool* pool) {
    FptOptions o = fo;
    o.pool = pool;
    Table cdf;
    cdf.columns = {"scheme", "lambda", "direction", "k", "time", "cdf"};
    Table sum;
    sum.suffix = "_summary";
    sum.columns = {"scheme", "lambda", "direction", "n", "n_censored", "mean", "median", "ks_vs_direct"};

    std::vector<BasinSpec> basins{basin};
    if (both) basins.push_back(reversed(basin));
    for (std::uint64_t d = 0; d < basins.size(); ++d) {
      const auto& b = basins[d];
      std::optional<std::vector<double>> direct_times;
      for (Scheme s : sp.schemes) {
        const std::vector<int> lams = s == Scheme::direct ? std::vector<int>{1} : sp.lambdas;
        for (int l : lams) {
          const std::uint64_t key = s == Scheme::direct ? 0 : static_cast<std::uint64_t>(l);
          const SchemeConfig cfg = sp.at(s == Scheme::direct ? sp.lambdas.front() : l)
                                       .with_seed(derive_seed(ex.seed, key, d));
          std::vector<FirstPassageSample> smp;
          std::visit([&](const auto& m) { smp = first_passage_times(m, s, cfg, b, samples, o); }, model);
          std::vector<double> all;
          for (const auto& x : smp) all.push_back(x.elapsed);
          const auto times = passage_times(smp);
          const EmpiricalCDF F(times);
          const double n_total = static_cast<double>(smp.size());
          for (std::size_t k = 0; k < F.values().size(); ++k) {
            cdf.rows.push_back({cell(scheme_name(s)), cell(l), cell(direction_label(b)),
                                cell(static_cast<std::int64_t>(k + 1)), cell(F.values()[k]),
                                cell(static_cast<double>(k + 1) / n_total)});
          }
          const auto row = summarize_passages(smp, l);
          Cell ks = kEmpty;
          if (s == Scheme::direct) {
            direct_times = all;
          } else if (direct_times) {
            ks = ks_distance(*direct_times, all);
          }
          sum.rows.push_back({cell(scheme_name(s)), cell(l), cell(direction_label(b)), cell(row.n),
                              cell(row.n_censored), cell(row.mfpt), cell(F.median()), ks});
        }
      }
    }
    return ExperimentResult{{cdf, sum}, std::to_string(sum.rows.size()) + " passage-time distributions"};
  };
  return ex;
}

Experiment plan_quasipotential(Experiment ex, const ConfigFile& c) {
  const SdeModel any = read_sde_model(c);
  const auto* nd = std::get_if<NonDiffusiveModel>(&any);
  if (nd == nullptr) {
    throw ConfigError("[model] name: the quasipotential analysis needs the non_diffusive model",
                      c.line_of("model", "name"));
  }
  const NonDiffusiveModel model = *nd;
  const auto fp = as_config_error(c, "model", "name", [&] { return fixed_points(model); });
  const double lo = c.get_double("analysis", "x_lo");
  const double hi = c.get_double("analysis", "x_hi");
  const auto points = read_positive(c, "analysis", "points");
  const double x_ref = c.get_double("analysis", "x_ref", fp[0].x);
  if (!(lo > 0.0) || !(hi > lo) || points < 2 || !(x_ref > 0.0)) {
    throw ConfigError("[analysis]: need 0 < x_lo < x_hi, points >= 2 and x_ref > 0");
  }

  ex.run = [=](WorkerPool*) {
    Table t;
    t.columns = {"x", "V", "dV", "F", "H", "valid_branch"};
    const double limit = quasipotential_branch_limit(model);
    for (std::int64_t i = 0; i < points; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
      const double dv = quasipotential_derivative(x, model);
      Cell h = std::numeric_limits<double>::quiet_NaN();
      try {
        h = hamiltonian_nondiffusive(x, dv, model);
      } catch (const DomainError&) {
      }
      t.rows.push_back({cell(x), cell(quasipotential(x_ref, x, model)), cell(dv),
                        cell(model.averaged_drift(x)), h, cell(static_cast<std::int64_t>(x <= limit))});
    }
    const double left = quasipotential(fp[0].x, fp[1].x, model);
    const double right = quasipotential(fp[2].x, fp[1].x, model);
    t.notes.emplace_back("fixed_points", num(fp[0].x) + " (stable), " + num(fp[1].x) + " (unstable), " +
                                             num(fp[2].x) + " (stable)");
    t.notes.emplace_back("barriers", "left = " + num(left) + ", right = " + num(right));
    t.notes.emplace_back("branch_limit", num(limit));
    return ExperimentResult{{t}, "barriers left " + num(left) + ", right " + num(right)};
  };
  return ex;
}

Experiment plan_jump(Experiment ex, const ConfigFile& c) {
  const std::string name = c.get_string("model", "name");
  if (name != "birth_death") {
    throw ConfigError("[model] name: jump_compare supports the birth_death model", c.line_of("model", "name"));
  }
  const double b = c.get_double("model", "b");
  const double d = c.get_double("model", "d");
  const double eps = c.get_double("model", "eps");
  const JumpModel model = as_config_error(c, "model", "eps", [&] { return birth_death_model(b, d, eps); });
  const double x0 = c.get_double("run", "x0");
  const double T = c.get_double("run", "T");
  const auto runs = read_positive(c, "analysis", "runs");
  const auto taus = c.get_doubles("analysis", "taus");
  if (!(T > 0.0)) throw ConfigError("[run] T: must be positive", c.line_of("run", "T"));
  if (!(x0 >= 0.0)) throw ConfigError("[run] x0: must be nonnegative", c.line_of("run", "x0"));
  for (double tau : taus) {
    if (!(tau > 0.0)) throw ConfigError("[analysis] taus: must be positive", c.line_of("analysis", "taus"));
  }

  ex.run = [=](WorkerPool* pool) {
    const Vector start = Vector::Constant(1, x0);
    auto column = [](const std::vector<Vector>& v) {
      std::vector<double> out;
      for (const auto& s : v) out.push_back(s[0]);
      return out;
    };
    auto moments = [](const std::vector<double>& v) {
      const Eigen::Map<const Vector> m(v.data(), static_cast<Eigen::Index>(v.size()));
      const double mean = m.mean();
      const double var = v.size() > 1 ? (m.array() - mean).square().sum() / static_cast<double>(v.size() - 1) : 0.0;
      return std::pair{mean, var};
    };
    Table t;
    t.columns = {"method", "tau_relax", "tau", "runs", "mean", "variance", "ks_vs_ssa"};
    const auto ssa = column(jump_final_states(model, start, T, 0.0, runs, derive_seed(ex.seed, 0), pool));
    const auto [sm, sv] = moments(ssa);
    t.rows.push_back({cell("ssa"), kEmpty, kEmpty, cell(runs), cell(sm), cell(sv), kEmpty});
    double worst = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const double tau = taus[i] * model.relaxation_time;
      const auto tl = column(jump_final_states(model, start, T, tau, runs, derive_seed(ex.seed, i + 1), pool));
      const auto [m, v] = moments(tl);
      const double ks = ks_distance(ssa, tl);
      worst = std::max(worst, ks);
      t.rows.push_back({cell("tau_leap"), cell(taus[i]), cell(tau), cell(runs), cell(m), cell(v), cell(ks)});
    }
    return ExperimentResult{{t}, "largest KS distance to SSA " + num(worst)};
  };
  return ex;
}

}  // namespace

Experiment plan_experiment(const std::string& name, const ConfigFile& c) {
  Experiment ex;
  ex.name = name;
  ex.config_hash = c.hash();
  ex.description = c.get_string("output", "description", "");
  ex.seed = c.get_uint("run", "seed", 1);
  ex.analysis = c.get_string("analysis", "type");
  if (ex.analysis == "histogram") {
    ex = plan_histogram(std::move(ex), c);
  } else if (ex.analysis == "variance_vs_lambda") {
    ex = plan_variance(std::move(ex), c);
  } else if (ex.analysis == "mfpt_vs_lambda") {
    ex = plan_mfpt(std::move(ex), c);
  } else if (ex.analysis == "fpt_cdf") {
    ex = plan_fpt_cdf(std::move(ex), c);
  } else if (ex.analysis == "quasipotential") {
    ex = plan_quasipotential(std::move(ex), c);
  } else if (ex.analysis == "jump_compare") {
    ex = plan_jump(std::move(ex), c);
  } else {
    throw ConfigError("[analysis] type: unknown analysis '" + ex.analysis +
                          "' (expected histogram, variance_vs_lambda, mfpt_vs_lambda, fpt_cdf, "
                          "quasipotential or jump_compare)",
                      c.line_of("analysis", "type"));
  }
  c.check_all_used();
  return ex;
}

std::string format_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  char buf[64];
  if (const auto* i = std::get_if<std::int64_t>(&c)) {
    auto r = std::to_chars(buf, buf + sizeof buf, *i);
    return std::string(buf, r.ptr);
  }
  const double v = std::get<double>(c);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<std::filesystem::path> write_outputs(const Experiment& ex, const ExperimentResult& res,
                                                 const OutputOptions& opt) {
  std::filesystem::create_directories(opt.dir);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(ex.config_hash));
  std::vector<std::filesystem::path> paths;
  for (const auto& t : res.tables) {
    const auto csv = opt.dir / (ex.name + t.suffix + ".csv");
    std::ofstream out(csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv.string());
    out << "# tool: phmm " << opt.tool_version << "\n";
    out << "# config: " << ex.name << "\n";
    if (!ex.description.empty()) out << "# description: " << ex.description << "\n";
    out << "# config_hash: " << hash << "\n";
    out << "# seed: " << ex.seed << "\n";
    out << "# analysis: " << ex.analysis << "\n";
    for (const auto& [k, v] : t.notes) out << "# " << k << ": " << v << "\n";
    out << "# generated: " << opt.timestamp << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
      out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + csv.string());
    paths.push_back(csv);

    if (opt.json) {
      nlohmann::ordered_json j;
      j["tool"] = "phmm " + opt.tool_version;
      j["config"] = ex.name;
      j["description"] = ex.description;
      j["config_hash"] = hash;
      j["seed"] = ex.seed;
      j["analysis"] = ex.analysis;
      j["generated"] = opt.timestamp;
      j["notes"] = nlohmann::ordered_json::object();
      for (const auto& [k, v] : t.notes) j["notes"][k] = v;
      j["columns"] = t.columns;
      auto rows = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row) std::visit([&r](const auto& v) { r.push_back(v); }, c);
        rows.push_back(std::move(r));
      }
      j["rows"] = std::move(rows);
      const auto path = opt.dir / (ex.name + t.suffix + ".json");
      std::ofstream js(path, std::ios::binary);
      js << j.dump(1) << "\n";
      if (!js) throw std::runtime_error("write failed for " + path.string());
      paths.push_back(path);
    }
  }
  return paths;
}

}  // namespace phmm::cli
