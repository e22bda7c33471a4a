#include <string>

#include "doctest.h"

#include "config.hpp"
#include "experiment.hpp"

using phmm::cli::ConfigError;
using phmm::cli::ConfigFile;

namespace {

int error_line(const std::string& text) {
  try {
    ConfigFile::parse(text);
  } catch (const ConfigError& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST_CASE("parse sections, comments and values") {
  const auto c = ConfigFile::parse(
      "# header\n"
      "[model]\n"
      "name = linear_ou   # trailing comment\n"
      "  theta=2\n"
      "\n"
      "[scheme]\n"
      "lambda = 1, 2 ,4\n"
      "names = hmm,phmm\n"
      "flag = yes\n");
  CHECK(c.get_string("model", "name") == "linear_ou");
  CHECK(c.get_double("model", "theta") == 2.0);
  CHECK(c.get_ints("scheme", "lambda") == std::vector<std::int64_t>{1, 2, 4});
  CHECK(c.get_strings("scheme", "names") == std::vector<std::string>{"hmm", "phmm"});
  CHECK(c.get_bool("scheme", "flag", false));
  CHECK(c.get_double("scheme", "missing", 1.5) == 1.5);
  CHECK(c.line_of("model", "theta") == 4);
  CHECK(c.has_section("scheme"));
  CHECK_FALSE(c.has("scheme", "missing"));
}

TEST_CASE("syntax errors carry the line number") {
  CHECK(error_line("[a]\nkey value\n") == 2);
  CHECK(error_line("key = 1\n") == 1);
  CHECK(error_line("[a\n") == 1);
  CHECK(error_line("[a]\nx = 1\n\nx = 2\n") == 4);
  CHECK(error_line("[a b]\n") == 1);
  CHECK(error_line("[a]\nx y = 1\n") == 2);
}

TEST_CASE("bad values") {
  const auto c = ConfigFile::parse("[a]\nx = 1.5x\nn = 2.5\nb = maybe\nl = 1,,2\ns =\n");
  CHECK_THROWS_AS(c.get_double("a", "x"), ConfigError);
  CHECK_THROWS_AS(c.get_int("a", "n"), ConfigError);
  CHECK_THROWS_AS(c.get_bool("a", "b", true), ConfigError);
  CHECK_THROWS_AS(c.get_doubles("a", "l"), ConfigError);
  CHECK_THROWS_AS(c.get_string("a", "s"), ConfigError);
  CHECK_THROWS_AS(c.get_double("a", "missing"), ConfigError);
  CHECK_THROWS_AS(c.get_uint("a", "n", 0), ConfigError);
  try {
    c.get_double("a", "x");
  } catch (const ConfigError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("[a] x") != std::string::npos);
  }
}

TEST_CASE("unused keys are reported with their line") {
  const auto c = ConfigFile::parse("[a]\nx = 1\ny = 2\n");
  c.get_double("a", "x");
  try {
    c.check_all_used();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("unknown key [a] y") != std::string::npos);
  }
  c.get_double("a", "y");
  CHECK_NOTHROW(c.check_all_used());
}

TEST_CASE("hash depends on content, not layout") {
  const auto a = ConfigFile::parse("[b]\ny = 2\n[a]\nx = 1\n");
  const auto b = ConfigFile::parse("# comment\n[a]\nx=1\n\n[b]\ny =   2\n");
  CHECK(a.canonical() == "a.x=1\nb.y=2\n");
  CHECK(a.hash() == b.hash());
  auto c = b;
  c.set("b", "y", "3");
  CHECK(c.hash() != a.hash());
}

TEST_CASE("every bundled config plans cleanly") {
  const auto all = phmm::cli::bundled_configs();
  CHECK(all.size() >= 6);
  for (const auto& b : all) {
    INFO(b.name);
    const auto cfg = ConfigFile::parse(std::string(b.text));
    CHECK_NOTHROW(phmm::cli::plan_experiment(std::string(b.name), cfg));
  }
}

TEST_CASE("planning rejects inconsistent step sizes") {
  const std::string base =
      "[model]\nname = linear_ou\ntheta = 1\nmu = 0.5\nsigma = 1\n"
      "[scheme]\nname = hmm\nlambda = 1, 3\neps = 0.01\nmicro_dt = 0.1\nmacro_dt = 0.02\n"
      "[run]\nT = 10\nx0 = 0\n[analysis]\ntype = variance_vs_lambda\n";
  try {
    phmm::cli::plan_experiment("t", ConfigFile::parse(base));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line > 0);
  }
  CHECK_THROWS_AS(phmm::cli::plan_experiment("t", ConfigFile::parse(base + "[output]\nbogus = 1\n")), ConfigError);
}

TEST_CASE("cell formatting round-trips") {
  CHECK(phmm::cli::format_cell(0.1) == "0.1");
  CHECK(phmm::cli::format_cell(std::int64_t{42}) == "42");
  CHECK(phmm::cli::format_cell(std::string("hmm")) == "hmm");
  CHECK(std::stod(phmm::cli::format_cell(1.0 / 3.0)) == 1.0 / 3.0);
}
