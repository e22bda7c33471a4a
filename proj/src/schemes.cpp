#include "phmm/schemes.hpp"

#include <bit>
#include <cmath>

namespace phmm {

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::direct:
      return "direct";
    case Scheme::hmm:
      return "hmm";
    case Scheme::phmm:
      return "phmm";
    case Scheme::averaged:
      return "averaged";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "direct") return Scheme::direct;
  if (name == "hmm") return Scheme::hmm;
  if (name == "phmm") return Scheme::phmm;
  if (name == "averaged") return Scheme::averaged;
  throw ArgumentError("unknown scheme '" + std::string(name) +
                      "' (expected direct, hmm, phmm or averaged)");
}

namespace {

void check_common(double eps, int lambda, double micro_dt) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ArgumentError("scheme config: eps must be positive");
  if (lambda < 1) throw ArgumentError("scheme config: lambda must be a positive integer");
  if (!(micro_dt > 0.0) || !std::isfinite(micro_dt)) {
    throw ArgumentError("scheme config: micro_dt must be positive");
  }
}

}  // namespace

SchemeConfig SchemeConfig::from_macro_dt(double eps, int lambda, double macro_dt, double micro_dt,
                                         std::uint64_t seed) {
  check_common(eps, lambda, micro_dt);
  if (!(macro_dt > 0.0) || !std::isfinite(macro_dt)) {
    throw ArgumentError("scheme config: macro_dt must be positive");
  }
  const double unit = static_cast<double>(lambda) * eps * micro_dt;
  const double m = std::round(macro_dt / unit);
  if (m < 1.0 || std::abs(m * unit - macro_dt) > 1e-12 * macro_dt) {
    throw ArgumentError("scheme config: macro_dt = " + std::to_string(macro_dt) +
                        " is not an integer multiple of lambda*eps*micro_dt = " +
                        std::to_string(unit));
  }
  SchemeConfig c;
  c.eps = eps;
  c.lambda = lambda;
  c.macro_dt = macro_dt;
  c.micro_dt = micro_dt;
  c.micro_count = static_cast<std::int64_t>(m);
  c.root_seed = seed;
  c.mode = Mode::fixed_macro_dt;
  return c;
}

SchemeConfig SchemeConfig::from_micro_count(double eps, int lambda, std::int64_t micro_count,
                                            double micro_dt, std::uint64_t seed) {
  check_common(eps, lambda, micro_dt);
  if (micro_count < 1) throw ArgumentError("scheme config: micro_count must be >= 1");
  SchemeConfig c;
  c.eps = eps;
  c.lambda = lambda;
  c.micro_dt = micro_dt;
  c.micro_count = micro_count;
  c.macro_dt = static_cast<double>(lambda) * static_cast<double>(micro_count) * eps * micro_dt;
  c.root_seed = seed;
  c.mode = Mode::fixed_micro_count;
  return c;
}

SchemeConfig SchemeConfig::with_lambda(int new_lambda) const {
  SchemeConfig c = mode == Mode::fixed_macro_dt
                       ? from_macro_dt(eps, new_lambda, macro_dt, micro_dt, root_seed)
                       : from_micro_count(eps, new_lambda, micro_count, micro_dt, root_seed);
  c.cold_restart = cold_restart;
  c.cold_restart_fast_time = cold_restart_fast_time;
  return c;
}

SchemeConfig SchemeConfig::with_seed(std::uint64_t seed) const {
  SchemeConfig c = *this;
  c.root_seed = seed;
  return c;
}

std::uint64_t SchemeConfig::hash() const {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  auto add = [&h](std::uint64_t v) { h = RngStream::mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6))); };
  add(std::bit_cast<std::uint64_t>(eps));
  add(static_cast<std::uint64_t>(lambda));
  add(std::bit_cast<std::uint64_t>(macro_dt));
  add(std::bit_cast<std::uint64_t>(micro_dt));
  add(static_cast<std::uint64_t>(micro_count));
  add(root_seed);
  add(cold_restart ? 1 : 0);
  return h;
}

double scheme_step(Scheme scheme, const SchemeConfig& cfg) {
  return scheme == Scheme::direct ? cfg.direct_dt() : cfg.macro_dt;
}

}  // namespace phmm
