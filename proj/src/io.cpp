#include "dmrecon/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace dmrecon {

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string msg = "invalid config:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(std::string_view(s).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) throw std::invalid_argument("malformed integer '" + s + "'");
  return v;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text, ',')) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const std::uint64_t lo = parse_uint(trim(item.substr(0, dots)));
      const std::uint64_t hi = parse_uint(trim(item.substr(dots + 2)));
      if (hi < lo || hi - lo > 1000000) throw std::invalid_argument("bad seed range '" + item + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    } else {
      out.push_back(parse_uint(item));
    }
  }
  return out;
}

// log:<lo>:<hi>:<points>
std::vector<double> parse_theta_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 || parts[0] != "log") {
    throw std::invalid_argument("theta_grid must look like log:<lo>:<hi>:<points>");
  }
  const double lo = parse_angle(parts[1]);
  const double hi = parse_angle(parts[2]);
  const auto points = static_cast<int>(parse_uint(parts[3]));
  if (!(lo > 0.0) || hi < lo || points < 1) {
    throw std::invalid_argument("theta_grid: need 0 < lo <= hi and at least one point");
  }
  return log_grid(lo, hi, points);
}

BiasModel& bias_of(Scenario& s) {
  if (!s.bias) s.bias = BiasModel{};
  return *s.bias;
}

void parse_bias_target(const std::string& text, BiasModel& bias) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("bias_target must look like <A|B>:<X|Y|Z|Pi1>:<0|1>");
  if (parts[0] == "A") bias.efficiency_leg = PointerLeg::A;
  else if (parts[0] == "B") bias.efficiency_leg = PointerLeg::B;
  else throw std::invalid_argument("bias_target pointer must be A or B");
  bias.efficiency_observable = parse_observable(parts[1]);
  bias.efficiency_outcome = parse_uint(parts[2]);
}

struct PendingScenario {
  Scenario scn;
  int line = 0;
  bool has_theta = false;
  bool has_seeds = false;
  std::map<std::string, int> keys_seen;
};

void apply_scenario_key(PendingScenario& p, const std::string& key, const std::string& value) {
  Scenario& s = p.scn;
  if (key == "kind") {
    s.kind = parse_scenario_kind(value);
  } else if (key == "state") {
    s.input_state = parse_state_spec(value);
  } else if (key == "d") {
    const auto d = parse_uint(value);
    if (d < 1 || d > static_cast<std::uint64_t>(kMaxSystemDim)) {
      throw std::invalid_argument("d must lie in 1.." + std::to_string(kMaxSystemDim));
    }
    s.d = static_cast<int>(d);
  } else if (key == "theta") {
    s.theta_list.clear();
    for (const auto& item : split(value, ',')) s.theta_list.push_back(parse_angle(item));
    p.has_theta = true;
  } else if (key == "theta_grid") {
    s.theta_list = parse_theta_grid(value);
    p.has_theta = true;
  } else if (key == "n_events") {
    s.n_events = parse_uint(value);
  } else if (key == "seeds") {
    s.seeds = parse_seeds(value);
    p.has_seeds = true;
  } else if (key == "methods") {
    s.methods.clear();
    for (const auto& item : split(value, ',')) s.methods.push_back(parse_method(item));
  } else if (key == "mode") {
    s.mode = parse_correlation_mode(value);
  } else if (key == "reference") {
    s.reference = parse_reference_mode(value);
  } else if (key == "purity_points") {
    s.purity_points = static_cast<int>(parse_uint(value));
  } else if (key == "bias_epsilon") {
    bias_of(s).pointer_rotation_epsilon = parse_number(value);
  } else if (key == "bias_efficiency") {
    bias_of(s).per_projector_efficiency = parse_number(value);
  } else if (key == "bias_target") {
    parse_bias_target(value, bias_of(s));
  } else {
    throw std::invalid_argument("unknown key '" + key + "'");
  }
}

} // namespace

double parse_angle(const std::string& raw) {
  const std::string text = trim(raw);
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string::npos) return parse_number(text);
  double factor = 1.0;
  double divisor = 1.0;
  const std::string before = trim(text.substr(0, pi_pos));
  const std::string after = trim(text.substr(pi_pos + 2));
  if (!before.empty()) {
    if (before.back() != '*') throw std::invalid_argument("malformed angle '" + text + "'");
    factor = parse_number(trim(before.substr(0, before.size() - 1)));
  }
  if (!after.empty()) {
    if (after.front() != '/') throw std::invalid_argument("malformed angle '" + text + "'");
    divisor = parse_number(trim(after.substr(1)));
    if (divisor == 0.0) throw std::invalid_argument("division by zero in angle '" + text + "'");
  }
  return factor * std::numbers::pi / divisor;
}

ConfigDocument parse_config(const std::string& text) {
  ConfigDocument doc;
  std::vector<std::string> errors;
  std::vector<PendingScenario> pending;
  std::map<std::string, int> global_seen;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string content = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (content.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";

    if (content.front() == '[') {
      if (content.back() != ']') {
        errors.push_back(where + "unterminated section header");
        continue;
      }
      const std::string inner = trim(content.substr(1, content.size() - 2));
      if (inner.rfind("scenario", 0) != 0 || trim(inner.substr(8)).empty()) {
        errors.push_back(where + "section header must be [scenario <id>]");
        continue;
      }
      PendingScenario p;
      p.scn.id = trim(inner.substr(8));
      p.line = lineno;
      for (const auto& prev : pending) {
        if (prev.scn.id == p.scn.id) {
          errors.push_back(where + "duplicate scenario id '" + p.scn.id + "' (first defined on line " +
                           std::to_string(prev.line) + ", again on line " + std::to_string(lineno) + ")");
        }
      }
      pending.push_back(std::move(p));
      continue;
    }

    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + "expected key = value");
      continue;
    }
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    try {
      if (pending.empty()) {
        if (global_seen.count(key)) {
          throw std::invalid_argument("key '" + key + "' repeated (first on line " +
                                      std::to_string(global_seen[key]) + ")");
        }
        global_seen[key] = lineno;
        if (key == "root_seed") doc.root_seed = parse_uint(value);
        else if (key == "output_dir") doc.output_dir = value;
        else if (key == "tolerance") {
          doc.tolerance = parse_number(value);
          if (!(doc.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
        } else if (key == "threads") doc.threads = static_cast<unsigned>(parse_uint(value));
        else throw std::invalid_argument("unknown key '" + key + "'");
      } else {
        auto& p = pending.back();
        if (p.keys_seen.count(key)) {
          throw std::invalid_argument("key '" + key + "' repeated (first on line " +
                                      std::to_string(p.keys_seen[key]) + ")");
        }
        p.keys_seen[key] = lineno;
        apply_scenario_key(p, key, value);
        if (key == "theta" || key == "theta_grid") {
          for (double t : p.scn.theta_list) {
            if (!(t > 0.0 && t <= std::numbers::pi / 2 + 1e-12)) {
              throw std::invalid_argument(
                  "theta = " + format_double(t) +
                  " out of range (0, pi/2]: N_AB = d/(4 sin(theta_A) sin(theta_B)) is singular at theta = 0");
            }
          }
        }
      }
    } catch (const std::exception& e) {
      errors.push_back(where + e.what());
    }
  }

  for (auto& p : pending) {
    if (!p.has_theta) {
      p.scn.theta_list = (p.scn.kind == ScenarioKind::PuritySweep || p.scn.kind == ScenarioKind::Single)
                             ? std::vector<double>{std::numbers::pi / 2}
                             : default_theta_grid();
    }
    if (!p.has_seeds) {
      p.scn.seeds.clear();
      for (std::uint64_t s = 1; s <= 50; ++s) p.scn.seeds.push_back(s);
    }
    for (const auto& e : p.scn.validate()) {
      // Range problems already reported against their own line are not repeated.
      if (e.rfind("theta = ", 0) == 0) continue;
      errors.push_back("line " + std::to_string(p.line) + ": scenario '" + p.scn.id + "': " + e);
    }
    doc.scenarios.push_back(std::move(p.scn));
  }
  if (doc.scenarios.empty() && errors.empty()) errors.push_back("line 1: no [scenario <id>] sections");
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return doc;
}

std::string write_config(const ConfigDocument& doc) {
  std::ostringstream out;
  out << "root_seed = " << doc.root_seed << "\n";
  if (!doc.output_dir.empty()) out << "output_dir = " << doc.output_dir << "\n";
  out << "tolerance = " << format_double(doc.tolerance) << "\n";
  out << "threads = " << doc.threads << "\n";
  for (const auto& s : doc.scenarios) {
    out << "\n[scenario " << s.id << "]\n";
    out << "kind = " << to_string(s.kind) << "\n";
    out << "state = " << format_state_spec(s.input_state) << "\n";
    out << "d = " << s.d << "\n";
    out << "theta = ";
    for (std::size_t i = 0; i < s.theta_list.size(); ++i) out << (i ? "," : "") << format_double(s.theta_list[i]);
    out << "\n";
    out << "n_events = " << s.n_events << "\n";
    out << "seeds = ";
    for (std::size_t i = 0; i < s.seeds.size(); ++i) out << (i ? "," : "") << s.seeds[i];
    out << "\n";
    out << "methods = ";
    for (std::size_t i = 0; i < s.methods.size(); ++i) out << (i ? "," : "") << to_string(s.methods[i]);
    out << "\n";
    out << "mode = " << to_string(s.mode) << "\n";
    out << "reference = " << to_string(s.reference) << "\n";
    out << "purity_points = " << s.purity_points << "\n";
    if (s.bias) {
      out << "bias_epsilon = " << format_double(s.bias->pointer_rotation_epsilon) << "\n";
      out << "bias_efficiency = " << format_double(s.bias->per_projector_efficiency) << "\n";
      out << "bias_target = " << (s.bias->efficiency_leg == PointerLeg::A ? "A" : "B") << ":"
          << to_string(s.bias->efficiency_observable) << ":" << s.bias->efficiency_outcome << "\n";
    }
  }
  return out.str();
}

void apply_env_overrides(ConfigDocument& doc) {
  if (const char* env = std::getenv("DMRECON_SEED")) {
    try {
      doc.root_seed = parse_uint(trim(env));
    } catch (const std::exception&) {
      throw ConfigError({std::string("DMRECON_SEED: malformed integer '") + env + "'"});
    }
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string write_matrix(const ComplexMatrix& m, MatrixFormat format) {
  std::ostringstream out;
  char buf[96];
  if (format == MatrixFormat::Machine) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g\n", static_cast<long>(i + 1), static_cast<long>(j + 1),
                      m(i, j).real(), m(i, j).imag());
        out << buf;
      }
    return out.str();
  }
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      // Avoid printing -0.000000 for values that round to zero.
      double re = m(i, j).real();
      double im = m(i, j).imag();
      if (std::abs(re) < 5e-7) re = 0.0;
      if (std::abs(im) < 5e-7) im = 0.0;
      std::snprintf(buf, sizeof buf, "%.6f%+.6fi", re, im);
      cells.emplace_back(buf);
      width = std::max(width, cells.back().size());
    }
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto& c = cells[idx++];
      out << (j ? "  " : "") << std::string(width - c.size(), ' ') << c;
    }
    out << "\n";
  }
  return out.str();
}

ComplexMatrix read_matrix(const std::string& machine_text) {
  struct Entry {
    long row, col;
    double re, im;
  };
  std::vector<Entry> entries;
  long rows = 0, cols = 0;
  std::istringstream in(machine_text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto parts = split(t, ',');
    if (parts.size() != 4) throw std::invalid_argument("read_matrix: line " + std::to_string(lineno) + " needs 4 fields");
    Entry e{static_cast<long>(parse_uint(parts[0])), static_cast<long>(parse_uint(parts[1])), parse_number(parts[2]),
            parse_number(parts[3])};
    if (e.row < 1 || e.col < 1) throw std::invalid_argument("read_matrix: indices are 1-based");
    rows = std::max(rows, e.row);
    cols = std::max(cols, e.col);
    entries.push_back(e);
  }
  if (static_cast<long>(entries.size()) != rows * cols) {
    throw std::invalid_argument("read_matrix: expected " + std::to_string(rows * cols) + " entries, got " +
                                std::to_string(entries.size()));
  }
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  for (const auto& e : entries) m(e.row - 1, e.col - 1) = Complex(e.re, e.im);
  return m;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.scenario_id << ',' << r.kind << ',' << r.method << ',' << r.d << ',' << format_double(r.theta_a) << ','
        << format_double(r.theta_b) << ',' << format_double(r.purity_p) << ',' << r.n_events << ',' << r.seed << ','
        << format_double(r.trace_distance) << ',' << format_double(r.delta_rho) << ',' << format_double(r.bound)
        << ',' << format_double(r.bias_epsilon) << ',' << format_double(r.bias_efficiency) << "\n";
  }
}

} // namespace dmrecon
