// dmrecon: run reconstruction scenarios, print single reconstructions, and
// run the oracle cross-checks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dmrecon/correlations.hpp"
#include "dmrecon/experiments.hpp"
#include "dmrecon/io.hpp"
#include "dmrecon/reconstruct.hpp"
#include "dmrecon/validate.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config '" << config_path << "'\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  dmrecon::ConfigDocument doc = dmrecon::parse_config(buf.str());
  dmrecon::apply_env_overrides(doc);
  if (threads >= 0) doc.threads = static_cast<unsigned>(threads);

  const auto rows = dmrecon::run_scenarios(doc.scenarios, doc.root_seed, doc.threads);
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / "results.csv";
  std::ofstream out(path, std::ios::binary);
  dmrecon::write_csv(out, rows);
  if (!out) {
    std::cerr << "error: failed writing " << path << "\n";
    return 1;
  }
  std::cout << "wrote " << rows.size() << " rows for " << doc.scenarios.size() << " scenario(s) to " << path.string()
            << " (root_seed " << doc.root_seed << ")\n";
  return 0;
}

int cmd_exact(const std::string& state_text, const std::string& theta_text, const std::string& method_text, int d,
              const std::string& format) {
  const auto spec = dmrecon::parse_state_spec(state_text);
  const double theta = dmrecon::parse_angle(theta_text);
  const auto method = dmrecon::parse_method(method_text);
  if (method == dmrecon::Method::QST) {
    std::cerr << "error: exact supports W, I and II\n";
    return 2;
  }
  const dmrecon::DensityMatrix rho = dmrecon::make_state(spec, d);
  const dmrecon::CouplingConfig cfg(d, theta, theta);
  const auto set = dmrecon::exact_correlation_set(rho, cfg, dmrecon::required_pairs(method));
  const auto result = dmrecon::reconstruct(method, set, cfg);

  if (format == "machine") {
    std::cout << dmrecon::write_matrix(result.density().matrix(), dmrecon::MatrixFormat::Machine);
    return 0;
  }
  std::cout << "method " << dmrecon::to_string(method) << ", d = " << d << ", theta = "
            << dmrecon::format_double(theta) << ", state " << state_text << "\n";
  std::cout << "raw:\n" << dmrecon::write_matrix(result.raw, dmrecon::MatrixFormat::Text);
  std::cout << "finalized:\n" << dmrecon::write_matrix(result.density().matrix(), dmrecon::MatrixFormat::Text);
  std::cout << "trace distance to input: " << dmrecon::format_double(dmrecon::trace_distance(result.density(), rho))
            << "\n";
  return 0;
}

int cmd_validate(std::uint64_t seed) {
  bool ok = true;
  for (const auto& c : dmrecon::run_oracle_checks(seed)) {
    std::printf("%s %s: worst %.3g (tolerance %.0e, %zu cases)\n", c.passed() ? "PASS" : "FAIL", c.name.c_str(),
                c.worst, c.tolerance, c.cases);
    ok = ok && c.passed();
  }
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct density-matrix reconstruction with two qubit pointers"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = -1;
  auto* run = app.add_subcommand("run", "Run every scenario in a config file and write results.csv");
  run->add_option("--config", config_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads (0 = all cores; overrides the config)");

  std::string state = "pure:D", theta = "pi/2", method = "II", format = "text";
  int d = 2;
  auto* exact = app.add_subcommand("exact", "Reconstruct a state from exact correlations and print it");
  exact->add_option("--state", state, "State spec: pure:<label>, mixed, family:p=<p>,psi=<label>, random:seed=<n>")
      ->required();
  exact->add_option("--theta", theta, "Coupling strength in radians (pi expressions allowed)")->required();
  exact->add_option("--method", method, "W, I or II")->required()->check(CLI::IsMember({"W", "I", "II"}));
  exact->add_option("--d", d, "System dimension")->check(CLI::Range(1, dmrecon::kMaxSystemDim));
  exact->add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));

  std::uint64_t seed = 2018;
  auto* validate = app.add_subcommand("validate", "Run the oracle cross-checks");
  validate->add_option("--seed", seed, "Seed for the randomized cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, threads);
    if (*exact) return cmd_exact(state, theta, method, d, format);
    if (*validate) return cmd_validate(seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
