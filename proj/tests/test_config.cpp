#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "vdsc/config.hpp"

TEST_CASE("defaults mirror the documented experiment setup") {
  const vdsc::ExperimentConfig c;
  REQUIRE(c.env_name == "deep_sea");
  REQUIRE(c.env_size == 10);
  REQUIRE(c.strategy_name == "vdsc");
  REQUIRE(c.vpd_k == 5);
  REQUIRE(c.simhash_kappa == 256);
  REQUIRE(c.rho_initial == 1.0);
  REQUIRE(c.rho_final == 0.01);
  REQUIRE(c.decay_steps == 25000);
  REQUIRE(c.agent_alpha == 0.1);
  REQUIRE(c.agent_gamma == 0.99);
  REQUIRE(c.seeds == std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  REQUIRE(c.total_steps == 50000);
  REQUIRE(c.eval_interval == 1000);
  REQUIRE(c.smoothing_window == 10);
  REQUIRE_FALSE(c.trace);
  REQUIRE_NOTHROW(c.validate());
}

TEST_CASE("INI text parses sections, comments and whitespace") {
  const std::string text =
      "# experiment\n"
      "[environment]\n"
      "name = river_swim\n"
      "max_episode_steps = 150\n"
      "\n"
      "; alt comment style\n"
      "[strategy]\n"
      "name=epsilon_greedy\n"
      "rho_initial = 0.9\n"
      "  rho_final = 0.02  \n"
      "[run]\n"
      "seeds = 3, 5, 8\n"
      "total_steps = 1234\n"
      "trace = true\n";
  const auto c = vdsc::ExperimentConfig::from_string(text, "inline");
  REQUIRE(c.env_name == "river_swim");
  REQUIRE(c.env_max_episode_steps == 150);
  REQUIRE(c.strategy_name == "epsilon_greedy");
  REQUIRE(c.rho_initial == 0.9);
  REQUIRE(c.rho_final == 0.02);
  REQUIRE(c.seeds == std::vector<std::uint64_t>{3, 5, 8});
  REQUIRE(c.total_steps == 1234);
  REQUIRE(c.trace);
}

TEST_CASE("unknown sections and keys fail fast with the line number") {
  try {
    vdsc::ExperimentConfig::from_string("[plotting]\nstyle = neon\n", "bad.ini");
    FAIL("expected ConfigError");
  } catch (const vdsc::ConfigError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("bad.ini:1") != std::string::npos);
    REQUIRE(msg.find("plotting") != std::string::npos);
  }
  try {
    vdsc::ExperimentConfig::from_string("[run]\nverbosity = 3\n", "bad.ini");
    FAIL("expected ConfigError");
  } catch (const vdsc::ConfigError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("bad.ini:2") != std::string::npos);
    REQUIRE(msg.find("run.verbosity") != std::string::npos);
  }
  REQUIRE_THROWS_AS(vdsc::ExperimentConfig::from_string("name = x\n", "bad.ini"),
                    vdsc::ConfigError);  // key before any section
  REQUIRE_THROWS_AS(vdsc::ExperimentConfig::from_string("[run\nseeds = 1\n", "bad.ini"),
                    vdsc::ConfigError);  // malformed header
  REQUIRE_THROWS_AS(vdsc::ExperimentConfig::from_string("[run]\njust text\n", "bad.ini"),
                    vdsc::ConfigError);  // no equals sign
}

TEST_CASE("typed values reject junk") {
  vdsc::ExperimentConfig c;
  REQUIRE_THROWS_AS(c.apply_override("run.total_steps=soon"), vdsc::ConfigError);
  REQUIRE_THROWS_AS(c.apply_override("strategy.rho_final=fast"), vdsc::ConfigError);
  REQUIRE_THROWS_AS(c.apply_override("run.trace=yes-please"), vdsc::ConfigError);
  REQUIRE_THROWS_AS(c.apply_override("run.seeds="), vdsc::ConfigError);
  REQUIRE_THROWS_AS(c.apply_override("run.seeds=1,,2"), vdsc::ConfigError);
  REQUIRE_NOTHROW(c.apply_override("run.trace=false"));
  REQUIRE_NOTHROW(c.apply_override("run.trace=1"));
  REQUIRE(c.trace);
}

TEST_CASE("overrides need a section-qualified key and an equals sign") {
  vdsc::ExperimentConfig c;
  REQUIRE_THROWS_AS(c.apply_override("total_steps=10"), vdsc::ConfigError);
  REQUIRE_THROWS_AS(c.apply_override("run.total_steps:10"), vdsc::ConfigError);
  REQUIRE_THROWS_AS(c.apply_override("run.warp=9"), vdsc::ConfigError);
  REQUIRE_NOTHROW(c.apply_override("run.total_steps=10"));
  REQUIRE(c.total_steps == 10);
  REQUIRE_NOTHROW(c.apply_override("environment.name=sparse_grid"));
  REQUIRE(c.env_name == "sparse_grid");
}

TEST_CASE("validate reports every violation at once") {
  vdsc::ExperimentConfig c;
  c.env_name = "volcano";
  c.vpd_k = 0;
  c.agent_gamma = 1.5;
  c.eval_interval = 0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const vdsc::ConfigError& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find("4 problems") != std::string::npos);
    REQUIRE(msg.find("environment.name") != std::string::npos);
    REQUIRE(msg.find("strategy.k") != std::string::npos);
    REQUIRE(msg.find("agent.gamma") != std::string::npos);
    REQUIRE(msg.find("run.eval_interval") != std::string::npos);
  }
}

TEST_CASE("rate endpoints: homeostat strategies need a positive rate, blind ones allow zero") {
  vdsc::ExperimentConfig c;
  c.strategy_name = "vdsc";
  c.rho_final = 0.0;
  REQUIRE_THROWS_AS(c.validate(), vdsc::ConfigError);
  c.strategy_name = "epsilon_greedy";
  REQUIRE_NOTHROW(c.validate());
  c.rho_final = -0.1;
  REQUIRE_THROWS_AS(c.validate(), vdsc::ConfigError);
  c.rho_final = 1.5;
  REQUIRE_THROWS_AS(c.validate(), vdsc::ConfigError);
}

TEST_CASE("serialize round-trips through the parser") {
  vdsc::ExperimentConfig c;
  c.env_name = "sparse_grid";
  c.env_width = 12;
  c.strategy_name = "counts_only";
  c.simhash_kappa = 64;
  c.rho_final = 0.025;
  c.seeds = {7, 9};
  c.total_steps = 4321;
  c.trace = true;
  c.trace_start = 100;
  c.trace_episodes = 5;
  c.out_dir = "results/x";
  const std::string text = c.serialize();
  const auto back = vdsc::ExperimentConfig::from_string(text, "roundtrip");
  REQUIRE(back.serialize() == text);
  REQUIRE(back.env_width == 12);
  REQUIRE(back.simhash_kappa == 64);
  REQUIRE(back.rho_final == 0.025);
  REQUIRE(back.seeds == std::vector<std::uint64_t>{7, 9});
  REQUIRE(back.trace);
  REQUIRE(back.trace_start == 100);
  REQUIRE(back.trace_episodes == 5);
  REQUIRE(back.out_dir == "results/x");
}

TEST_CASE("missing config file raises a ConfigError naming the path") {
  try {
    vdsc::ExperimentConfig::from_file("/no/such/file.ini");
    FAIL("expected ConfigError");
  } catch (const vdsc::ConfigError& e) {
    REQUIRE(std::string(e.what()).find("/no/such/file.ini") != std::string::npos);
  }
}
