#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "weyl_lab/cli/cache.hpp"
#include "weyl_lab/cli/config.hpp"
#include "weyl_lab/cli/output.hpp"
#include "weyl_lab/cli/run.hpp"
#include "weyl_lab/errors.hpp"

using namespace weyl_lab;
using namespace weyl_lab::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("weyl_lab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ExperimentConfig make(const json& j) { return config_from_json(j); }

RunOutcome run_quiet(const ExperimentConfig& c, const fs::path& out) {
  std::ostringstream log, err;
  auto r = run(c, out.string(), log, err);
  if (r.status != 0) MESSAGE(err.str());
  return r;
}

} // namespace

TEST_CASE("config round trip") {
  const json j = {{"experiment", "duhamel-check"},
                  {"n", 2},
                  {"K", 3},
                  {"G", 16},
                  {"potential", {{"kind", "radial-power"}, {"amplitude", -1.5}, {"alpha", 1.0}, {"epsilon", 0.1}, {"center", {0.25, 0.5}}}},
                  {"mollifier", {{"rule", "power"}, {"exponent", 0.25}}},
                  {"ladder", {{"start", 5}, {"stop", 50}, {"factor", 1.5}}},
                  {"lambda", 9.5},
                  {"seed", 7}};
  const ExperimentConfig c = make(j);
  CHECK(c.potential.kind == potentials::PotentialKind::radial_power);
  CHECK(c.potential.center(1) == 0.5);
  CHECK(c.mollifier.rule == TRule::power);
  CHECK(config_from_json(to_json(c)) == c);
  CHECK(config_from_json(json::parse(to_json(c).dump())) == c);
  CHECK(config_hash(c) == config_hash(config_from_json(to_json(c))));
  ExperimentConfig d = c;
  d.lambda = 9.6;
  CHECK(config_hash(c) != config_hash(d));

  ExperimentConfig cos = make({{"experiment", "spectrum"}, {"n", 2},
                               {"potential", {{"kind", "cosine-sum"}, {"terms", {{{"k", {1, 0}}, {"coefficient", 2.0}}}}}}});
  CHECK(config_from_json(to_json(cos)) == cos);
  CHECK(hex64(255) == "00000000000000ff");
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(make({{"experiment", "count"}, {"bogus", 1}}), PreconditionError);
  CHECK_THROWS_AS(make({{"experiment", "count"}, {"potential", {{"kind", "constant"}, {"extra", 1}}}}), PreconditionError);
  CHECK_THROWS_AS(make({{"experiment", "count"}, {"n", "two"}}), PreconditionError);
  CHECK_THROWS_AS(validate(make({{"experiment", "nope"}})), PreconditionError);
  CHECK_THROWS_AS(validate(make({{"experiment", "count"}, {"G", 7}})), PreconditionError);
  CHECK_THROWS_AS(validate(make({{"experiment", "count"}, {"n", 5}})), PreconditionError);
  CHECK_NOTHROW(validate(make({{"experiment", "bootstrap"}, {"n", 8}})));
  CHECK_THROWS_AS(validate(make({{"experiment", "kato"}, {"deltas", {0.7}}})), PreconditionError);
  CHECK_THROWS_AS(validate(make({{"experiment", "count"}, {"ladder", {{"start", 10}, {"stop", 5}}}})), PreconditionError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), PreconditionError);
}

TEST_CASE("mollifier width rules") {
  MollifierRule r;
  r.rule = TRule::power;
  r.exponent = 1.0 / 3;
  CHECK(r.width(64.0) == doctest::Approx(4.0));
  CHECK(r.width(0.5) == 1.0);
  r.rule = TRule::log;
  CHECK(r.width(std::exp(3.0)) == doctest::Approx(3.0));
  r.rule = TRule::constant;
  r.T = 2.5;
  CHECK(r.width(100.0) == 2.5);
}

TEST_CASE("csv and json writers") {
  const auto dir = scratch("writers");
  {
    CsvWriter csv((dir / "t.csv").string(), {"a", "b"}, 0xabcULL);
    csv.cell(0.1).cell(std::int64_t{3});
    csv.end_row();
  }
  const auto l = lines(dir / "t.csv");
  REQUIRE(l.size() == 3);
  CHECK(l[0] == std::string("# weyl-lab ") + library_version() + " config_hash=0000000000000abc");
  CHECK(l[1] == "a,b");
  CHECK(l[2] == "0.10000000000000001,3");
  CHECK(format_number(1.0) == "1");

  write_json((dir / "t.json").string(), "count", 1, {{"x", 2}});
  const auto j = read_json(dir / "t.json");
  CHECK(j["meta"]["tool"] == "weyl-lab");
  CHECK(j["meta"]["experiment"] == "count");
  CHECK(j["x"] == 2);
}

TEST_CASE("cache round trip, misses and corruption") {
  const auto dir = scratch("cache");
  const SpectrumCache cache(dir.string());
  const auto S = galerkin::diagonalize(galerkin::assemble(potentials::radial_power(2, -1.0, 1.0, 0.1), 3, 16));
  const CacheKey key{2, 3, 16, S.provenance.spec_hash};
  CHECK_FALSE(cache.lookup(key).has_value());
  cache.store(key, S);
  const auto hit = cache.lookup(key);
  REQUIRE(hit.has_value());
  CHECK(serialize(*hit) == serialize(S));
  CHECK(hit->vectors == S.vectors);
  CHECK(hit->frequencies == S.frequencies);
  CHECK(hit->shift == S.shift);
  CHECK(hit->modes.size() == S.modes.size());

  CacheKey other = key;
  other.spec_hash ^= 1;
  CHECK_FALSE(cache.lookup(other).has_value());

  {
    std::fstream f(dir / key.filename(), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(40);
    f.put('\x5a');
  }
  std::string warning;
  CHECK_FALSE(cache.lookup(key, &warning).has_value());
  CHECK_FALSE(warning.empty());
  CHECK_THROWS(deserialize("garbage"));
}

TEST_CASE("cache directory selection") {
  ::setenv("WEYL_LAB_CACHE", "/tmp/somewhere", 1);
  CHECK(SpectrumCache::default_directory("out") == "/tmp/somewhere");
  ::unsetenv("WEYL_LAB_CACHE");
  CHECK(SpectrumCache::default_directory("out") == (fs::path("out") / "cache").string());
}

TEST_CASE("duhamel-check run") {
  const auto dir = scratch("duhamel");
  const auto c = make({{"experiment", "duhamel-check"}, {"n", 1}, {"K", 4}, {"G", 32}, {"lambda", 7.0},
                       {"potential", {{"kind", "cosine-sum"}, {"terms", {{{"k", {1}}, {"coefficient", 2.0}}}}}}});
  REQUIRE(run_quiet(c, dir).status == 0);
  const auto j = read_json(dir / "duhamel.json");
  CHECK(j["status"] == "PASS");
  CHECK(j["rows"] == 9);
  CHECK(j["meta"]["config_hash"] == hex64(config_hash(c)));
  // The spectrum went through the cache.
  CHECK(fs::exists(dir / "cache"));
}

TEST_CASE("bootstrap run") {
  const auto dir = scratch("bootstrap");
  REQUIRE(run_quiet(make({{"experiment", "bootstrap"}, {"n", 3}, {"variant", "torus"}}), dir).status == 0);
  const auto j = read_json(dir / "bootstrap.json");
  const auto it = j["iterates"].get<std::vector<double>>();
  REQUIRE(it.size() >= 3);
  CHECK(it[0] == -1.0);
  CHECK(it[1] == 0.25);
  CHECK(it[2] == 0.5);
  CHECK(j["fixed_point"] == 0.5);
  CHECK(j["variant"] == "torus");
}

TEST_CASE("weyl-fit and count runs are deterministic") {
  const auto c = make({{"experiment", "weyl-fit"}, {"n", 2}, {"ladder", {{"start", 10}, {"stop", 1000}, {"factor", 1.1}}}});
  const auto a = scratch("fit_a"), b = scratch("fit_b");
  REQUIRE(run_quiet(c, a).status == 0);
  REQUIRE(run_quiet(c, b).status == 0);
  const auto rows = lines(a / "weyl_fit.csv");
  CHECK(rows.size() >= 22);
  CHECK(rows[1] == "lambda,count,main,remainder,normalized,reliable");
  CHECK(slurp(a / "weyl_fit.csv") == slurp(b / "weyl_fit.csv"));
  const auto j = read_json(a / "weyl_fit.json");
  CHECK(j["fit"]["slope"].get<double>() <= 1.0);

  auto count = c;
  count.experiment = "count";
  REQUIRE(run_quiet(count, a).status == 0);
  CHECK(lines(a / "count.csv").size() == rows.size());
}

TEST_CASE("remaining experiments produce their files") {
  const json pot = {{"kind", "radial-power"}, {"amplitude", -1.0}, {"alpha", 1.0}, {"epsilon", 0.1}};
  struct Case {
    json config;
    std::vector<std::string> files;
  };
  const std::vector<Case> cases = {
      {{{"experiment", "spectrum"}, {"n", 2}, {"K", 3}, {"G", 16}, {"potential", pot}}, {"spectrum.csv", "spectrum.json"}},
      {{{"experiment", "kato"}, {"n", 2}, {"G", 32}, {"potential", pot}}, {"kato.csv"}},
      {{{"experiment", "band"}, {"n", 2}, {"ladder", {{"start", 16}, {"stop", 512}, {"factor", 2}}}}, {"band.csv", "band.json"}},
      {{{"experiment", "kernels"}, {"n", 2}, {"K", 4}, {"G", 32}, {"lambda", 4.0}, {"samples", 2}, {"potential", pot},
        {"ladder", {{"start", 2}, {"stop", 20}, {"factor", 2}}}},
       {"kernels.csv", "kernels.json"}},
      {{{"experiment", "count"}, {"n", 2}, {"K", 4}, {"G", 32}, {"source", "galerkin"}, {"potential", pot},
        {"ladder", {{"start", 2}, {"stop", 40}, {"factor", 1.5}}}},
       {"count.csv"}},
  };
  for (const auto& tc : cases) {
    const auto c = make(tc.config);
    CAPTURE(c.experiment);
    const auto dir = scratch("run_" + c.experiment);
    const auto r = run_quiet(c, dir);
    CHECK(r.status == 0);
    for (const auto& f : tc.files) {
      CHECK(fs::exists(dir / f));
      if (f.ends_with(".csv")) CHECK(lines(dir / f).size() >= 3);
    }
  }
}

TEST_CASE("invalid configs exit with status 2") {
  std::ostringstream log, err;
  const auto r = run(make({{"experiment", "count"}, {"G", 6 + 1}}), scratch("bad").string(), log, err);
  CHECK(r.status == 2);
  CHECK(err.str().find("G must be even") != std::string::npos);
  const auto q = run(make({{"experiment", "bootstrap"}, {"n", 3}, {"variant", "lp"}, {"p", 1.2}}), scratch("bad2").string(), log, err);
  CHECK(q.status == 2);
}

TEST_CASE("command line entry") {
  const auto dir = scratch("entry");
  const auto cfg = dir / "c.json";
  std::ofstream(cfg) << R"({"n": 3, "variant": "torus"})";
  const std::string cfg_s = cfg.string(), out_s = (dir / "out").string();
  {
    std::vector<std::string> args = {"weyl-lab", "bootstrap", "--config", cfg_s, "--out", out_s};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    CHECK(main_entry(static_cast<int>(argv.size()), argv.data()) == 0);
    CHECK(fs::exists(dir / "out" / "bootstrap.json"));
  }
  {
    // Experiment name in the file must agree with the subcommand.
    std::ofstream(cfg) << R"({"experiment": "kato", "n": 3})";
    std::vector<std::string> args = {"weyl-lab", "bootstrap", "--config", cfg_s, "--out", out_s};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    CHECK(main_entry(static_cast<int>(argv.size()), argv.data()) != 0);
  }
  {
    std::vector<std::string> args = {"weyl-lab", "bootstrap"};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    CHECK(main_entry(static_cast<int>(argv.size()), argv.data()) != 0);
  }
}
