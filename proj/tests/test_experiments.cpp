#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "arblobo/bounds.hpp"
#include "arblobo/config.hpp"
#include "arblobo/errors.hpp"
#include "arblobo/experiments.hpp"

using namespace arblobo;

namespace {

ExperimentConfig small_zellner(std::size_t threads) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::Zellner);
  c.grid = {{2, 8}, {4, 16}};
  c.replications = 3;
  c.samples = 200;
  c.seed = 3;
  c.threads = threads;
  return c;
}

ExperimentConfig small_flat(std::size_t threads) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::FlatLogistic);
  c.grid = {{3, 60}, {3, 120}};
  c.replications = 3;
  c.samples = 200;
  c.seed = 4;
  c.threads = threads;
  return c;
}

std::string rows_csv(const ExperimentResult& r) {
  std::ostringstream out;
  write_rows_csv(out, r.rows);
  write_summary_csv(out, r.summary);
  return out.str();
}

}  // namespace

TEST(HRule, ParseAndEvaluate) {
  const HRule opt = HRule::parse("opt_scale(5.6644)");
  EXPECT_EQ(opt.form, HRule::Form::OptScale);
  EXPECT_NEAR(opt.evaluate(14, 56), 5.6644 / 14.0, 1e-15);
  EXPECT_EQ(opt.name(), "opt_scale(5.6644)");
  EXPECT_NEAR(HRule::parse("inv_dn(1)").evaluate(4, 16), 1.0 / 64.0, 1e-16);
  EXPECT_NEAR(HRule::parse("inv_n(5)").evaluate(10, 200), 0.025, 1e-16);
  EXPECT_EQ(HRule::parse("const(0.6)").evaluate(3, 100), 0.6);
  EXPECT_EQ(HRule::parse(HRule::parse("inv_n(0.1)").name()), HRule::parse("inv_n(0.1)"));
}

TEST(HRule, Errors) {
  EXPECT_THROW(HRule::parse("const(-1)"), ConfigError);
  EXPECT_THROW(HRule::parse("const(0)"), ConfigError);
  EXPECT_THROW(HRule::parse("sqrt(2)"), ConfigError);
  EXPECT_THROW(HRule::parse("inv_n(abc)"), ConfigError);
  EXPECT_THROW(HRule::parse("inv_n(1"), ConfigError);
}

TEST(ExperimentIds, RoundTrip) {
  for (auto id : {ExperimentId::Zellner, ExperimentId::FlatLogistic, ExperimentId::OracleSuite, ExperimentId::Examples})
    EXPECT_EQ(parse_experiment_id(to_string(id)), id);
  EXPECT_THROW(parse_experiment_id("nope"), ConfigError);
  EXPECT_EQ(parse_y_mechanism(to_string(YMechanism::FairCoin)), YMechanism::FairCoin);
}

TEST(Config, MinimalZellnerDefaults) {
  const ExperimentConfig c = parse_config(R"j({"experiment":"zellner","seed":1})j");
  EXPECT_EQ(c.replications, 10u);
  EXPECT_EQ(c.samples, 1000u);
  EXPECT_EQ(c.g, 10.0);
  EXPECT_EQ(c.seed, 1u);
  const std::vector<GridPoint> grid{{2, 8}, {4, 16}, {4, 24}, {8, 32}, {10, 40}, {12, 48}, {14, 56}};
  EXPECT_EQ(c.grid, grid);
  EXPECT_EQ(c, ExperimentConfig::defaults(ExperimentId::Zellner));
}

TEST(Config, RoundTrip) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::FlatLogistic);
  c.seed = 99;
  c.replications = 4;
  c.y_mechanism = YMechanism::FairCoin;
  c.output = "out.csv";
  c.h_rules.push_back(HRule::parse("inv_dn(2.5)"));
  EXPECT_EQ(parse_config(config_to_json(c)), c);
  const ExperimentConfig oracle = ExperimentConfig::defaults(ExperimentId::OracleSuite);
  EXPECT_EQ(parse_config(config_to_json(oracle)), oracle);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config(R"j({"experiment":"zellner","h_rules":["const(-0.5)"]})j"), ConfigError);
  try {
    parse_config("{\n  \"experiment\": \"zellner\",\n  \"sampels\": 10\n}", "cfg.json");
    FAIL() << "unknown key accepted";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("cfg.json:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("sampels"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_config("{\"experiment\": \"zellner\",\n"), ConfigError);
  EXPECT_THROW(parse_config(R"j({"seed":1})j"), ConfigError);
  EXPECT_THROW(parse_config(R"j({"experiment":"zellner","grid":[[4,4]]})j"), ConfigError);
  EXPECT_THROW(parse_config(R"j({"experiment":"zellner","samples":-3})j"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/arblobo.json"), ConfigError);
}

TEST(Threads, Resolve) {
  EXPECT_EQ(resolve_threads(3, 100), 3u);
  EXPECT_EQ(resolve_threads(8, 2), 2u);
  EXPECT_GE(resolve_threads(0, 100), 1u);
  EXPECT_EQ(resolve_threads(4, 0), 1u);
}

TEST(DataGenerator, Ranges) {
  RandomStream s(1);
  const LogisticData d = generate_logistic_data(s, 500, 3);
  EXPECT_EQ(d.n(), 500u);
  EXPECT_EQ(d.d(), 3u);
  for (double v : d.x.data()) {
    EXPECT_GT(v, -1.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_NO_THROW(d.validate());
  EXPECT_THROW(generate_logistic_data(s, 3, 3), InvalidArgument);
}

TEST(DataGenerator, FairCoinBalance) {
  RandomStream s(2);
  const std::size_t n = 20000;
  const LogisticData d = generate_logistic_data(s, n, 2, YMechanism::FairCoin);
  double mean = 0.0;
  for (int y : d.y) mean += y;
  mean /= static_cast<double>(n);
  EXPECT_NEAR(mean, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(DataGenerator, ZeroCoefficientsIsFairCoin) {
  RandomStream s(3);
  const std::size_t n = 20000;
  const LogisticData d = generate_logistic_data(s, n, 2, YMechanism::Logistic, Vector{0.0, 0.0});
  double mean = 0.0;
  for (int y : d.y) mean += y;
  EXPECT_NEAR(mean / static_cast<double>(n), 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(DataGenerator, Deterministic) {
  RandomStream a(4), b(4);
  const LogisticData x = generate_logistic_data(a, 30, 3), y = generate_logistic_data(b, 30, 3);
  EXPECT_EQ(x.x.data(), y.x.data());
  EXPECT_EQ(x.y, y.y);
}

TEST(Zellner, RowsRespectBound) {
  const ExperimentResult r = run_zellner(small_zellner(1));
  ASSERT_EQ(r.rows.size(), 2u * 3u * 3u);
  for (const auto& row : r.rows) {
    ASSERT_TRUE(row.valid()) << row.flag;
    EXPECT_EQ(row.experiment, "zellner");
    EXPECT_LE(row.accept_mean, row.closed_form_ub + 3.0 * row.accept_se);
    EXPECT_NEAR(row.rate_lb, 1.0 - row.accept_mean, 1e-15);
    EXPECT_NEAR(row.log_accept, std::log(row.accept_mean), 1e-12);
    EXPECT_NEAR(row.closed_form_ub, zellner_empirical_accept_ub(row.h, row.curvature, 10.0, row.d).value, 1e-15);
    EXPECT_NEAR(row.asymptotic_ub,
                zellner_accept_ub(row.h, row.n, static_cast<double>(row.d) / row.n, 10.0, row.d).value, 1e-15);
  }
  EXPECT_EQ(r.summary.size(), 2u * 3u);
  for (const auto& s : r.summary) EXPECT_EQ(s.count, 3u);
}

TEST(Zellner, SerialEqualsParallel) {
  EXPECT_EQ(rows_csv(run_zellner(small_zellner(1))), rows_csv(run_zellner(small_zellner(4))));
}

TEST(FlatLogistic, RowsAndDeterminism) {
  const ExperimentResult a = run_flat_logistic(small_flat(1));
  ASSERT_EQ(a.rows.size(), 2u * 3u * 4u);
  for (const auto& row : a.rows) {
    EXPECT_TRUE(row.valid()) << row.flag;
    EXPECT_GT(row.curvature, 0.0);
    EXPECT_GE(row.closed_form_ub, 0.0);
    EXPECT_LE(row.closed_form_ub, 1.0);
  }
  EXPECT_EQ(rows_csv(a), rows_csv(run_flat_logistic(small_flat(3))));
}

TEST(Summary, MeanAndSd) {
  std::vector<ExperimentRow> rows(3);
  const double rates[3] = {0.1, 0.2, 0.6};
  for (std::size_t i = 0; i < 3; ++i) {
    rows[i].experiment = "zellner";
    rows[i].d = 2;
    rows[i].n = 8;
    rows[i].h_rule = "const(1)";
    rows[i].replication = i;
    rows[i].rate_lb = rates[i];
    rows[i].accept_mean = 1.0 - rates[i];
    rows[i].log_accept = std::log(rows[i].accept_mean);
  }
  rows.push_back(rows[0]);
  rows.back().flag = "optimizer_failed";
  rows.back().rate_lb = std::nan("");
  rows.back().accept_mean = std::nan("");
  const auto s = summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].count, 3u);
  EXPECT_NEAR(s[0].mean_rate_lb, 0.3, 1e-15);
  EXPECT_NEAR(s[0].sd_rate_lb, std::sqrt(0.07), 1e-15);
}

TEST(Csv, HeaderAndNumbers) {
  std::ostringstream out;
  write_rows_csv(out, {});
  EXPECT_EQ(out.str(), "experiment,replication,d,n,h_rule,h,accept_mean,accept_se,log_accept,rate_lb,closed_form_ub,flag\n");
  EXPECT_EQ(format_number(0.125), "0.125");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Examples, AllPass) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::Examples);
  c.samples = 20000;
  const ExamplesReport r = run_examples(c);
  ASSERT_EQ(r.checks.size(), 3u);
  for (const auto& check : r.checks) EXPECT_TRUE(check.passed) << check.name << " " << check.value << " " << check.bound;
  EXPECT_TRUE(r.all_passed());
}

TEST(OracleSuite, SmallRunClean) {
  ExperimentConfig c = ExperimentConfig::defaults(ExperimentId::OracleSuite);
  c.chains = 40;
  c.threads = 2;
  const OracleSuiteReport r = run_oracle_suite(c);
  EXPECT_TRUE(r.two_state_ok);
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.rows.size(), 40u);
  std::ostringstream a, b;
  write_oracle_csv(a, r);
  c.threads = 1;
  write_oracle_csv(b, run_oracle_suite(c));
  EXPECT_EQ(a.str(), b.str());
}

TEST(RandomFiniteChain, Shape) {
  const RandomStream root(1);
  for (std::size_t k = 0; k < 60; ++k) {
    RandomStream s = root.substream(k);
    const FiniteChain c = random_finite_chain(s, k);
    EXPECT_GE(c.size(), 2u);
    EXPECT_LE(c.size(), 12u);
    EXPECT_EQ(c.coordinates().cols(), 1u);
  }
}
