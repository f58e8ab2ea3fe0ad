#include "kickent/harness/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "kickent/common.hpp"

namespace kickent {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + " (" + key + "): " + what);
}

double to_double(const std::string& token, int line, const std::string& key) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  // A leading '+' is not accepted by from_chars.
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (token.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    fail(line, key, "expected a finite number, got '" + token + "'");
  }
  return value;
}

long long to_integer(const std::string& token, int line, const std::string& key) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    fail(line, key, "expected an integer, got '" + token + "'");
  }
  return value;
}

std::uint64_t to_unsigned(const std::string& token, int line, const std::string& key) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    fail(line, key, "expected a non-negative integer, got '" + token + "'");
  }
  return value;
}

bool to_bool(const std::string& token, int line, const std::string& key) {
  if (token == "true" || token == "1" || token == "yes") return true;
  if (token == "false" || token == "0" || token == "no") return false;
  fail(line, key, "expected true or false, got '" + token + "'");
}

struct Entry {
  std::vector<std::string> tokens;
  int line = 0;
};

using Setter = std::function<void(ExperimentConfig&, const std::string&, const Entry&)>;

const std::string& single(const std::string& key, const Entry& e) {
  if (e.tokens.size() != 1) fail(e.line, key, "expected a single value");
  return e.tokens.front();
}

Setter number(double ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, const std::string& key, const Entry& e) {
    c.*field = to_double(single(key, e), e.line, key);
  };
}

Setter number_list(std::vector<double> ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, const std::string& key, const Entry& e) {
    std::vector<double> values;
    for (const auto& t : e.tokens) values.push_back(to_double(t, e.line, key));
    c.*field = std::move(values);
  };
}

Setter integer(int ExperimentConfig::*field) {
  return [field](ExperimentConfig& c, const std::string& key, const Entry& e) {
    const long long v = to_integer(single(key, e), e.line, key);
    if (v < -1000000000LL || v > 1000000000LL) fail(e.line, key, "integer out of range");
    c.*field = static_cast<int>(v);
  };
}

template <class Member>
Setter nested_number(Member ExperimentConfig::*outer, double Member::*inner) {
  return [outer, inner](ExperimentConfig& c, const std::string& key, const Entry& e) {
    (c.*outer).*inner = to_double(single(key, e), e.line, key);
  };
}

Setter init_number(double MomentumEigenstate::*eig, double Wavepacket::*packet) {
  return [eig, packet](ExperimentConfig& c, const std::string& key, const Entry& e) {
    const double v = to_double(single(key, e), e.line, key);
    if (auto* m = std::get_if<MomentumEigenstate>(&c.init)) {
      if (eig == nullptr) fail(e.line, key, "only valid with init.kind = wavepacket");
      m->*eig = v;
    } else {
      std::get<Wavepacket>(c.init).*packet = v;
    }
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"experiment.kind",
       [](ExperimentConfig& c, const std::string& key, const Entry& e) {
         try {
           c.kind = parse_experiment_kind(single(key, e));
         } catch (const ConfigError& err) {
           fail(e.line, key, err.what());
         }
       }},
      {"model.k", number_list(&ExperimentConfig::k_values)},
      {"model.tau", number(&ExperimentConfig::tau)},
      {"model.inertia_heavy", number(&ExperimentConfig::inertia_heavy)},
      {"model.inertia_light", number(&ExperimentConfig::inertia_light)},
      {"quantum.hbar_eff", number_list(&ExperimentConfig::hbar_values)},
      {"quantum.window_min", number(&ExperimentConfig::window_min)},
      {"quantum.window_max", number(&ExperimentConfig::window_max)},
      {"init.n", init_number(&MomentumEigenstate::n, &Wavepacket::n)},
      {"init.l", init_number(&MomentumEigenstate::l, &Wavepacket::l)},
      {"init.theta", init_number(nullptr, &Wavepacket::theta)},
      {"init.phi", init_number(nullptr, &Wavepacket::phi)},
      {"init.width_n", init_number(nullptr, &Wavepacket::width_n)},
      {"init.width_l", init_number(nullptr, &Wavepacket::width_l)},
      {"run.steps", integer(&ExperimentConfig::steps)},
      {"run.seed",
       [](ExperimentConfig& c, const std::string& key, const Entry& e) {
         c.seed = to_unsigned(single(key, e), e.line, key);
       }},
      {"run.n_traj",
       [](ExperimentConfig& c, const std::string& key, const Entry& e) {
         c.n_traj = static_cast<std::size_t>(to_unsigned(single(key, e), e.line, key));
       }},
      {"run.threads", integer(&ExperimentConfig::threads)},
      {"output.dir",
       [](ExperimentConfig& c, const std::string& key, const Entry& e) {
         c.output_dir = single(key, e);
       }},
      {"output.plots",
       [](ExperimentConfig& c, const std::string& key, const Entry& e) {
         c.plots = to_bool(single(key, e), e.line, key);
       }},
      {"sos.seed_theta", number_list(&ExperimentConfig::sos_seed_theta)},
      {"sos.seed_n", number_list(&ExperimentConfig::sos_seed_n)},
      {"sos.iterations", integer(&ExperimentConfig::sos_iterations)},
      {"sos.coordinates",
       [](ExperimentConfig& c, const std::string& key, const Entry& e) {
         const auto& v = single(key, e);
         if (v == "absolute") {
           c.sos_coordinates = SectionCoordinates::absolute;
         } else if (v == "relative") {
           c.sos_coordinates = SectionCoordinates::relative;
         } else {
           fail(e.line, key, "expected absolute or relative");
         }
       }},
      {"sos.lyapunov_point",
       [](ExperimentConfig& c, const std::string& key, const Entry& e) {
         if (e.tokens.size() != 4) fail(e.line, key, "expected theta, n, phi, l");
         c.lyapunov_point = {to_double(e.tokens[0], e.line, key), to_double(e.tokens[1], e.line, key),
                             to_double(e.tokens[2], e.line, key), to_double(e.tokens[3], e.line, key)};
       }},
      {"sos.lyapunov_steps", integer(&ExperimentConfig::lyapunov_steps)},
      {"chaos.regular_max", nested_number(&ExperimentConfig::chaos, &ChaosThresholds::regular_max)},
      {"chaos.chaotic_min", nested_number(&ExperimentConfig::chaos, &ChaosThresholds::chaotic_min)},
      {"correspond.step", integer(&ExperimentConfig::reference_step)},
      {"correspond.saturation_fraction", number(&ExperimentConfig::saturation_fraction)},
      {"tolerance.norm", nested_number(&ExperimentConfig::tolerances, &Tolerances::norm)},
      {"tolerance.symmetry", nested_number(&ExperimentConfig::tolerances, &Tolerances::symmetry)},
      {"tolerance.leak_quantum",
       nested_number(&ExperimentConfig::tolerances, &Tolerances::leak_quantum)},
      {"tolerance.leak_classical",
       nested_number(&ExperimentConfig::tolerances, &Tolerances::leak_classical)},
      {"criteria.pearson_min", nested_number(&ExperimentConfig::criteria, &Criteria::pearson_min)},
      {"criteria.omega_m_gap_max",
       nested_number(&ExperimentConfig::criteria, &Criteria::omega_m_gap_max)},
      {"criteria.scaling_rel_err_max",
       nested_number(&ExperimentConfig::criteria, &Criteria::scaling_rel_err_max)},
      {"criteria.reduced_distance_max",
       nested_number(&ExperimentConfig::criteria, &Criteria::reduced_distance_max)},
      {"criteria.global_distance_min",
       nested_number(&ExperimentConfig::criteria, &Criteria::global_distance_min)},
  };
  return table;
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
  if (name == "entropy") return ExperimentKind::entropy;
  if (name == "sos") return ExperimentKind::sos;
  if (name == "scaling") return ExperimentKind::scaling;
  if (name == "correspond") return ExperimentKind::correspond;
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::entropy: return "entropy";
    case ExperimentKind::sos: return "sos";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::correspond: return "correspond";
  }
  return "unknown";
}

FloquetSpec ExperimentConfig::floquet(double k, double hbar) const {
  FloquetSpec spec;
  spec.k = k;
  spec.tau = tau;
  spec.inertia_heavy = inertia_heavy;
  spec.inertia_light = inertia_light;
  spec.hilbert = HilbertConfig::from_window(hbar, window_min, window_max);
  return spec;
}

void ExperimentConfig::validate_model() const {
  if (k_values.empty()) throw ConfigError("model.k: at least one value required");
  if (hbar_values.empty()) throw ConfigError("quantum.hbar_eff: at least one value required");
  for (double k : k_values) {
    if (!(k >= 0.0)) throw ConfigError("model.k: values must be >= 0");
  }
  for (double hbar : hbar_values) {
    if (!(hbar > 0.0)) throw ConfigError("quantum.hbar_eff: values must be > 0");
    const FloquetSpec spec = floquet(k_values.front(), hbar);
    spec.validate();
    if (const auto* m = std::get_if<MomentumEigenstate>(&init)) {
      const int mn = quantum_number(m->n, hbar, "init.n");
      const int ml = quantum_number(m->l, hbar, "init.l");
      const auto& h = spec.hilbert;
      if (h.index_heavy(mn) < 0 || h.index_heavy(mn) >= h.d_heavy || h.index_light(ml) < 0 ||
          h.index_light(ml) >= h.d_light) {
        throw ConfigError("init: momentum outside the basis window");
      }
    } else {
      const auto& w = std::get<Wavepacket>(init);
      if (w.width_n < hbar || w.width_l < hbar) {
        throw ConfigError("init.width_n/width_l: packet narrower than one quantum");
      }
      if (w.n < window_min || w.n >= window_max || w.l < window_min || w.l >= window_max) {
        throw ConfigError("init: packet centre outside the basis window");
      }
    }
  }
  if (n_traj == 0) throw ConfigError("run.n_traj must be >= 1");
  if (threads < 1) throw ConfigError("run.threads must be >= 1");
  if (!(tolerances.norm > 0.0 && tolerances.symmetry > 0.0 && tolerances.leak_quantum > 0.0 &&
        tolerances.leak_classical > 0.0)) {
    throw ConfigError("tolerance.*: values must be > 0");
  }
  if (!(saturation_fraction > 0.0 && saturation_fraction <= 1.0)) {
    throw ConfigError("correspond.saturation_fraction must lie in (0, 1]");
  }
  if (reference_step < 0) throw ConfigError("correspond.step must be >= 0");
}

void ExperimentConfig::validate() const {
  validate_model();
  if (steps < 1) throw ConfigError("run.steps must be >= 1");
  if (sos_iterations < 1) throw ConfigError("sos.iterations must be >= 1");
  if (lyapunov_steps < 1000) throw ConfigError("sos.lyapunov_steps must be >= 1000");
  if (sos_seed_theta.empty() || sos_seed_n.empty()) {
    throw ConfigError("sos.seed_theta/seed_n: at least one value required");
  }
  if (!(chaos.regular_max >= 0.0 && chaos.regular_max < chaos.chaotic_min)) {
    throw ConfigError("chaos: require 0 <= regular_max < chaotic_min");
  }
  if (kind == ExperimentKind::scaling && hbar_values.size() < 2) {
    throw ConfigError("scaling sweep needs at least two quantum.hbar_eff values");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, line, "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) fail(line_no, key, "empty key");
    if (key != "init.kind" && setters().count(key) == 0) fail(line_no, key, "unknown key");
    if (entries.count(key) != 0) fail(line_no, key, "duplicate key");
    if (value.empty()) fail(line_no, key, "missing value");
    entries[key] = Entry{split_list(value), line_no};
  }

  ExperimentConfig config;
  if (auto it = entries.find("init.kind"); it != entries.end()) {
    const std::string& kind = single("init.kind", it->second);
    if (kind == "eigenstate") {
      config.init = MomentumEigenstate{};
    } else if (kind == "wavepacket") {
      config.init = Wavepacket{0.0, 0.0, 0.0, 0.0, 0.25, 0.25};
    } else {
      fail(it->second.line, "init.kind", "expected eigenstate or wavepacket");
    }
    entries.erase(it);
  }
  for (const auto& [key, entry] : entries) setters().at(key)(config, key, entry);
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string canonical_run_text(const ExperimentConfig& c, double k, double hbar) {
  std::string s;
  auto put = [&s](std::string_view key, const std::string& v) {
    s.append(key).append("=").append(v).append("\n");
  };
  put("k", format_number(k));
  put("tau", format_number(c.tau));
  put("inertia_heavy", format_number(c.inertia_heavy));
  put("inertia_light", format_number(c.inertia_light));
  put("hbar", format_number(hbar));
  put("window", format_number(c.window_min) + "," + format_number(c.window_max));
  put("init", describe(c.init));
  put("steps", std::to_string(c.steps));
  put("seed", std::to_string(c.seed));
  put("n_traj", std::to_string(c.n_traj));
  put("tolerances", format_number(c.tolerances.norm) + "," + format_number(c.tolerances.symmetry) +
                        "," + format_number(c.tolerances.leak_quantum) + "," +
                        format_number(c.tolerances.leak_classical));
  return s;
}

std::string experiment_hash(const ExperimentConfig& c) {
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += format_number(x) + ",";
    return s;
  };
  std::string text = "experiment=" + std::string(to_string(c.kind)) + "\n";
  text += "k=" + list(c.k_values) + "\nhbar=" + list(c.hbar_values) + "\n";
  text += canonical_run_text(c, 0.0, 0.0);
  text += "plots=" + std::to_string(c.plots) + "\nthreads=" + std::to_string(c.threads) + "\n";
  text += "sos=" + list(c.sos_seed_theta) + "|" + list(c.sos_seed_n) + "|" +
          std::to_string(c.sos_iterations) + "|" +
          std::to_string(static_cast<int>(c.sos_coordinates)) + "|" +
          list({c.lyapunov_point.theta, c.lyapunov_point.n, c.lyapunov_point.phi,
                c.lyapunov_point.l}) +
          "|" + std::to_string(c.lyapunov_steps) + "\n";
  text += "chaos=" + list({c.chaos.regular_max, c.chaos.chaotic_min}) + "\n";
  text += "correspond=" + std::to_string(c.reference_step) + "," +
          format_number(c.saturation_fraction) + "\n";
  text += "criteria=" +
          list({c.criteria.pearson_min, c.criteria.omega_m_gap_max, c.criteria.scaling_rel_err_max,
                c.criteria.reduced_distance_max, c.criteria.global_distance_min}) +
          "\n";
  return hex64(fnv1a64(text));
}

}  // namespace kickent
