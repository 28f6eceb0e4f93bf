#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>
#include <sstream>

#include "dmrecon/io.hpp"
#include "test_util.hpp"

using namespace dmrecon;

namespace {

std::vector<std::string> config_errors(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& errors, const std::string& needle) {
  for (const auto& e : errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

} // namespace

TEST(ParseConfig, MinimalScenarioGetsDefaults) {
  const auto doc = parse_config("[scenario one]\nkind = single\n");
  ASSERT_EQ(doc.scenarios.size(), 1u);
  const auto& s = doc.scenarios[0];
  EXPECT_EQ(s.id, "one");
  EXPECT_EQ(s.d, 2);
  EXPECT_EQ(s.n_events, 10000u);
  EXPECT_EQ(s.seeds.size(), 50u);
  ASSERT_EQ(s.theta_list.size(), 1u);
  EXPECT_DOUBLE_EQ(s.theta_list[0], std::numbers::pi / 2);
  EXPECT_EQ(s.methods.size(), 3u);
  EXPECT_FALSE(s.bias.has_value());
}

TEST(ParseConfig, FullScenario) {
  const auto doc = parse_config(
      "# comment\n"
      "root_seed = 99\n"
      "threads = 3\n"
      "[scenario fig4]\n"
      "kind = strength_sweep\n"
      "state = family:p=0.5,psi=D\n"
      "theta_grid = log:0.05:pi/2:6\n"
      "n_events = 8000\n"
      "seeds = 1..5\n"
      "methods = W, II\n"
      "mode = exact\n"
      "bias_epsilon = 0.02\n"
      "bias_efficiency = 1.03\n"
      "bias_target = B:Y:1\n");
  EXPECT_EQ(doc.root_seed, 99u);
  EXPECT_EQ(doc.threads, 3u);
  const auto& s = doc.scenarios.at(0);
  EXPECT_EQ(s.kind, ScenarioKind::StrengthSweep);
  EXPECT_EQ(s.theta_list.size(), 6u);
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(s.methods, (std::vector<Method>{Method::W, Method::II}));
  EXPECT_EQ(s.mode, CorrelationMode::Exact);
  ASSERT_TRUE(s.bias.has_value());
  EXPECT_EQ(s.bias->efficiency_leg, PointerLeg::B);
  EXPECT_EQ(s.bias->efficiency_observable, PointerObservable::Y);
  EXPECT_EQ(s.bias->efficiency_outcome, 1u);
  EXPECT_EQ(std::get<FamilySpec>(s.input_state).p, 0.5);
}

TEST(ParseConfig, ZeroThetaNamesSingularity) {
  const auto errors = config_errors("[scenario z]\nkind = single\ntheta = 0\n");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_NE(errors[0].find("line 3"), std::string::npos) << errors[0];
  EXPECT_NE(errors[0].find("N_AB"), std::string::npos) << errors[0];
}

TEST(ParseConfig, DuplicateIdListsBothLines) {
  const auto errors = config_errors("[scenario a]\nkind = single\n[scenario a]\nkind = single\n");
  ASSERT_EQ(errors.size(), 1u);
  EXPECT_NE(errors[0].find("1"), std::string::npos);
  EXPECT_NE(errors[0].find("3"), std::string::npos);
}

TEST(ParseConfig, CollectsAllErrors) {
  const auto errors = config_errors(
      "[scenario a]\n"
      "kind = single\n"
      "colour = blue\n"
      "state = pure:\n"
      "d = 0\n"
      "methods = W, IV\n");
  EXPECT_EQ(errors.size(), 4u);
  EXPECT_TRUE(any_contains(errors, "line 3"));
  EXPECT_TRUE(any_contains(errors, "colour"));
  EXPECT_TRUE(any_contains(errors, "line 4"));
  EXPECT_TRUE(any_contains(errors, "line 5"));
  EXPECT_TRUE(any_contains(errors, "line 6"));
}

TEST(ParseConfig, RepeatedKeyAndMissingSection) {
  EXPECT_FALSE(config_errors("[scenario a]\nkind = single\nd = 2\nd = 3\n").empty());
  EXPECT_FALSE(config_errors("kind = single\n").empty());
  EXPECT_FALSE(config_errors("[scenario a]\nkind = single\nbias_epsilon = 0.5\n").empty());
}

TEST(ParseConfig, RoundTripThroughCanonicalForm) {
  const auto doc = parse_config(
      "root_seed = 7\n"
      "[scenario a]\nkind = error_sweep\nstate = random:seed=3\nd = 3\ntheta = 0.1, pi/4\nseeds = 4, 9\n"
      "methods = W, I, II, QST\nreference = qst\nbias_epsilon = -0.01\n"
      "[scenario b]\nkind = purity_sweep\nstate = pure:R\npurity_points = 5\n");
  const std::string text = write_config(doc);
  const auto again = parse_config(text);
  EXPECT_EQ(write_config(again), text);
  ASSERT_EQ(again.scenarios.size(), 2u);
  EXPECT_EQ(again.scenarios[0].theta_list, doc.scenarios[0].theta_list);
  EXPECT_EQ(again.scenarios[0].seeds, doc.scenarios[0].seeds);
  EXPECT_EQ(again.scenarios[0].bias->pointer_rotation_epsilon, -0.01);
  EXPECT_EQ(again.scenarios[1].purity_points, 5);
}

TEST(ParseAngle, PiExpressions) {
  EXPECT_DOUBLE_EQ(parse_angle("pi/2"), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(parse_angle("3*pi/8"), 3 * std::numbers::pi / 8);
  EXPECT_DOUBLE_EQ(parse_angle("0.25*pi"), 0.25 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse_angle("0.3"), 0.3);
  EXPECT_THROW(parse_angle("pie"), std::invalid_argument);
}

TEST(EnvOverride, SeedReplacesRoot) {
  ConfigDocument doc;
  doc.root_seed = 1;
  ::setenv("DMRECON_SEED", "4242", 1);
  apply_env_overrides(doc);
  ::unsetenv("DMRECON_SEED");
  EXPECT_EQ(doc.root_seed, 4242u);
  apply_env_overrides(doc);
  EXPECT_EQ(doc.root_seed, 4242u);
  ::setenv("DMRECON_SEED", "abc", 1);
  EXPECT_THROW(apply_env_overrides(doc), ConfigError);
  ::unsetenv("DMRECON_SEED");
}

TEST(WriteMatrix, TextFormOfHalfIdentity) {
  const std::string text = write_matrix(0.5 * ComplexMatrix::Identity(2, 2), MatrixFormat::Text);
  EXPECT_NE(text.find("0.500000+0.000000i"), std::string::npos) << text;
}

TEST(WriteMatrix, MachineFormIsOneIndexed) {
  const std::string text = write_matrix(ComplexMatrix::Constant(2, 2, Complex(0.5, 0.0)), MatrixFormat::Machine);
  EXPECT_NE(text.find("1,2,0.5,0\n"), std::string::npos) << text;
  EXPECT_EQ(text.find("0,"), std::string::npos);
}

TEST(WriteMatrix, MachineRoundTripIsBitExact) {
  CounterRng rng(3);
  const ComplexMatrix m = dmrecon::testing::random_matrix(4, 4, rng) * 1e-3;
  const ComplexMatrix back = read_matrix(write_matrix(m, MatrixFormat::Machine));
  ASSERT_EQ(back.rows(), 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(back(i, j), m(i, j));
}

TEST(Csv, HeaderAndNanFormatting) {
  ResultRow row;
  row.scenario_id = "x";
  row.kind = "single";
  row.method = "II";
  row.seed = "3";
  row.bound = std::numeric_limits<double>::quiet_NaN();
  row.trace_distance = 0.1;
  std::ostringstream out;
  write_csv(out, {row});
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  EXPECT_NE(text.find(",nan,"), std::string::npos);
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_EQ(format_double(0.5), "0.5");
}
