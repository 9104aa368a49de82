// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wigner-mrsolve Authors

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wmr/core/error.hpp"
#include "wmr/moyal/terms.hpp"
#include "wmr/phase_space/diagnostics.hpp"
#include "wmr/phase_space/field.hpp"
#include "wmr/phase_space/hamiltonian.hpp"
#include "wmr/phase_space/states.hpp"
#include "wmr/solver/evolve.hpp"
#include "wmr/wavelet/filter.hpp"

// Config grammar: one `key = value` per line, `#` starts a comment, blank lines ignored.
// Keys are dotted (`physics.gamma`). Values are numbers, `true`/`false`, bare words, or
// JSON arrays for list-valued keys (`hamiltonian.potential = [0, 0, 0.5]`).
namespace wmr::scenario {

enum class InitialKind { coherent, cat, file };

inline const char* to_string(InitialKind k) {
  switch (k) {
    case InitialKind::coherent: return "coherent";
    case InitialKind::cat: return "cat";
    case InitialKind::file: return "file";
  }
  return "coherent";
}

struct InitialState {
  InitialKind kind = InitialKind::coherent;
  double q0 = 0.0;
  double p0 = 0.0;
  double sigma = 1.0;
  std::string path;  ///< snapshot CSV for kind = file
  bool operator==(const InitialState&) const = default;
};

enum class Mode { evolve, steady_state };

inline const char* to_string(Mode m) { return m == Mode::evolve ? "evolve" : "steady_state"; }

struct SteadySettings {
  double tolerance = 1e-8;
  int max_iterations = 50;
  int verify_steps = 100;  ///< RK4 steps run from the solution to confirm stationarity
  bool operator==(const SteadySettings&) const = default;
};

struct OutputSettings {
  std::string dir = "run";
  bool csv = true;
  bool pgm = true;
  bool operator_market = false;  ///< also write operator.mtx
  bool operator==(const OutputSettings&) const = default;
};

struct Scenario {
  std::string name = "unnamed";
  Mode mode = Mode::evolve;
  phase::PhaseSpaceGrid grid;
  phase::PhysicalParams params;
  phase::PolynomialHamiltonian hamiltonian = phase::harmonic_hamiltonian();
  InitialState initial;
  moyal::RhsTerms terms;
  solver::EvolutionSchedule schedule;
  int wavelet_order = 3;
  int wavelet_depth = 4;
  moyal::DerivativeScheme scheme = moyal::DerivativeScheme::galerkin;
  std::uint64_t seed = 0;
  phase::ClassifierConfig classifier;
  SteadySettings steady;
  OutputSettings output;

  solver::SolverOptions solver_options() const {
    solver::SolverOptions o;
    o.scheme = {scheme, wavelet_order};
    o.depth = wavelet_depth;
    o.classifier = classifier;
    o.seed = seed;
    return o;
  }

  bool operator==(const Scenario&) const = default;
};

/// All problems found while parsing, one message per entry.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(ErrorKind::config, join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string out = "invalid configuration:";
    for (const auto& s : p) out += "\n  " + s;
    return out;
  }
  std::vector<std::string> problems_;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(v);
}

struct Parser {
  std::vector<std::string>& errors;
  std::string key;
  std::string value;
  int line = 0;

  void error(const std::string& msg) const { errors.push_back("line " + std::to_string(line) + ": " + key + ": " + msg); }

  bool number(double& out) const {
    const char* b = value.data();
    const char* e = b + value.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || !std::isfinite(v)) {
      error("expected a number, got '" + value + "'");
      return false;
    }
    out = v;
    return true;
  }
  bool integer(long long& out) const {
    const char* b = value.data();
    const char* e = b + value.size();
    long long v = 0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) {
      error("expected an integer, got '" + value + "'");
      return false;
    }
    out = v;
    return true;
  }
  bool boolean(bool& out) const {
    if (value == "true") {
      out = true;
      return true;
    }
    if (value == "false") {
      out = false;
      return true;
    }
    error("expected true or false, got '" + value + "'");
    return false;
  }
  std::string word() const {
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') return value.substr(1, value.size() - 2);
    return value;
  }
  std::optional<nlohmann::json> array() const {
    try {
      auto j = nlohmann::json::parse(value);
      if (!j.is_array()) {
        error("expected a [ ... ] list");
        return std::nullopt;
      }
      return j;
    } catch (const nlohmann::json::exception&) {
      error("malformed list '" + value + "'");
      return std::nullopt;
    }
  }
};

using Setter = std::function<void(Scenario&, const Parser&)>;

inline void set_double(double& dst, const Parser& p) {
  double v;
  if (p.number(v)) dst = v;
}
inline void set_int(int& dst, const Parser& p) {
  long long v;
  if (p.integer(v)) dst = static_cast<int>(v);
}
inline void set_bool(bool& dst, const Parser& p) {
  bool v;
  if (p.boolean(v)) dst = v;
}

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](Scenario& s, const Parser& p) { s.name = p.word(); }},
      {"mode",
       [](Scenario& s, const Parser& p) {
         const auto w = p.word();
         if (w == "evolve") s.mode = Mode::evolve;
         else if (w == "steady_state") s.mode = Mode::steady_state;
         else p.error("expected evolve or steady_state, got '" + w + "'");
       }},
      {"grid.q_min", [](Scenario& s, const Parser& p) { set_double(s.grid.q_min, p); }},
      {"grid.q_max", [](Scenario& s, const Parser& p) { set_double(s.grid.q_max, p); }},
      {"grid.p_min", [](Scenario& s, const Parser& p) { set_double(s.grid.p_min, p); }},
      {"grid.p_max", [](Scenario& s, const Parser& p) { set_double(s.grid.p_max, p); }},
      {"grid.level", [](Scenario& s, const Parser& p) { set_int(s.grid.level, p); }},
      {"physics.hbar", [](Scenario& s, const Parser& p) { set_double(s.params.hbar, p); }},
      {"physics.mass", [](Scenario& s, const Parser& p) { set_double(s.params.mass, p); }},
      {"physics.gamma", [](Scenario& s, const Parser& p) { set_double(s.params.gamma, p); }},
      {"physics.diffusion", [](Scenario& s, const Parser& p) { set_double(s.params.diffusion, p); }},
      {"hamiltonian.potential",
       [](Scenario& s, const Parser& p) {
         auto j = p.array();
         if (!j) return;
         std::vector<double> c;
         for (const auto& v : *j) {
           if (!v.is_number()) {
             p.error("potential coefficients must be numbers");
             return;
           }
           c.push_back(v.get<double>());
         }
         s.hamiltonian.potential = Polynomial(std::move(c));
       }},
      {"hamiltonian.mixed",
       [](Scenario& s, const Parser& p) {
         auto j = p.array();
         if (!j) return;
         std::vector<phase::MixedTerm> terms;
         for (const auto& v : *j) {
           if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number_integer() ||
               !v[2].is_number_integer()) {
             p.error("mixed terms are [coefficient, q_power, p_power] triples");
             return;
           }
           terms.push_back({v[0].get<double>(), v[1].get<int>(), v[2].get<int>()});
         }
         s.hamiltonian.mixed_terms = std::move(terms);
       }},
      {"hamiltonian.time_table",
       [](Scenario& s, const Parser& p) {
         auto j = p.array();
         if (!j) return;
         std::vector<phase::TimeSample> table;
         for (const auto& v : *j) {
           if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
             p.error("time_table entries are [time, factor] pairs");
             return;
           }
           table.push_back({v[0].get<double>(), v[1].get<double>()});
         }
         s.hamiltonian.time_table = std::move(table);
       }},
      {"initial.kind",
       [](Scenario& s, const Parser& p) {
         const auto w = p.word();
         if (w == "coherent") s.initial.kind = InitialKind::coherent;
         else if (w == "cat") s.initial.kind = InitialKind::cat;
         else if (w == "file") s.initial.kind = InitialKind::file;
         else p.error("expected coherent, cat or file, got '" + w + "'");
       }},
      {"initial.q0", [](Scenario& s, const Parser& p) { set_double(s.initial.q0, p); }},
      {"initial.p0", [](Scenario& s, const Parser& p) { set_double(s.initial.p0, p); }},
      {"initial.sigma", [](Scenario& s, const Parser& p) { set_double(s.initial.sigma, p); }},
      {"initial.path", [](Scenario& s, const Parser& p) { s.initial.path = p.word(); }},
      {"terms.liouville", [](Scenario& s, const Parser& p) { set_bool(s.terms.include_liouville, p); }},
      {"terms.quantum", [](Scenario& s, const Parser& p) { set_bool(s.terms.include_quantum, p); }},
      {"terms.friction", [](Scenario& s, const Parser& p) { set_bool(s.terms.include_friction, p); }},
      {"terms.diffusion", [](Scenario& s, const Parser& p) { set_bool(s.terms.include_diffusion, p); }},
      {"schedule.dt",
       [](Scenario& s, const Parser& p) {
         if (p.word() == "auto") s.schedule.dt = 0.0;
         else set_double(s.schedule.dt, p);
       }},
      {"schedule.t_final", [](Scenario& s, const Parser& p) { set_double(s.schedule.t_final, p); }},
      {"schedule.record_every", [](Scenario& s, const Parser& p) { set_int(s.schedule.record_every, p); }},
      {"schedule.snapshot_every", [](Scenario& s, const Parser& p) { set_int(s.schedule.snapshot_every, p); }},
      {"schedule.renormalize", [](Scenario& s, const Parser& p) { set_bool(s.schedule.renormalize, p); }},
      {"schedule.threshold_eps", [](Scenario& s, const Parser& p) { set_double(s.schedule.threshold_eps, p); }},
      {"steady.tolerance", [](Scenario& s, const Parser& p) { set_double(s.steady.tolerance, p); }},
      {"steady.max_iterations", [](Scenario& s, const Parser& p) { set_int(s.steady.max_iterations, p); }},
      {"steady.verify_steps", [](Scenario& s, const Parser& p) { set_int(s.steady.verify_steps, p); }},
      {"wavelet.order", [](Scenario& s, const Parser& p) { set_int(s.wavelet_order, p); }},
      {"wavelet.depth", [](Scenario& s, const Parser& p) { set_int(s.wavelet_depth, p); }},
      {"solver.scheme",
       [](Scenario& s, const Parser& p) {
         if (auto v = moyal::scheme_from_string(p.word())) s.scheme = *v;
         else p.error("expected galerkin or oracle, got '" + p.word() + "'");
       }},
      {"solver.seed",
       [](Scenario& s, const Parser& p) {
         long long v;
         if (!p.integer(v)) return;
         if (v < 0) p.error("seed must be >= 0");
         else s.seed = static_cast<std::uint64_t>(v);
       }},
      {"output.dir", [](Scenario& s, const Parser& p) { s.output.dir = p.word(); }},
      {"output.csv", [](Scenario& s, const Parser& p) { set_bool(s.output.csv, p); }},
      {"output.pgm", [](Scenario& s, const Parser& p) { set_bool(s.output.pgm, p); }},
      {"output.operator", [](Scenario& s, const Parser& p) { set_bool(s.output.operator_market, p); }},
      {"classify.negativity", [](Scenario& s, const Parser& p) { set_double(s.classifier.negativity_threshold, p); }},
      {"classify.localized_sparsity", [](Scenario& s, const Parser& p) { set_double(s.classifier.localized_sparsity, p); }},
      {"classify.chaotic_sparsity", [](Scenario& s, const Parser& p) { set_double(s.classifier.chaotic_sparsity, p); }},
      {"classify.chaotic_entropy", [](Scenario& s, const Parser& p) { set_double(s.classifier.chaotic_entropy, p); }},
      {"classify.stationarity_rate", [](Scenario& s, const Parser& p) { set_double(s.classifier.stationarity_rate, p); }},
      {"classify.window",
       [](Scenario& s, const Parser& p) {
         long long v;
         if (!p.integer(v)) return;
         if (v < 1) p.error("window must be >= 1");
         else s.classifier.stationarity_window = static_cast<std::size_t>(v);
       }},
      {"classify.coefficient_threshold", [](Scenario& s, const Parser& p) { set_double(s.classifier.sparsity_threshold, p); }},
  };
  return table;
}

inline std::string nearest_key(const std::string& key) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& [k, setter] : setters()) {
    const auto d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

template <class F>
void check(std::vector<std::string>& errors, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    errors.emplace_back(e.what());
  }
}

/// Largest derivative order the Galerkin scheme must realize along either axis.
inline int required_derivative_order(const Scenario& s) {
  int need = 0;
  for (const auto& t : moyal::rhs_terms(s.hamiltonian, s.params, s.terms)) need = std::max({need, t.q.derivative, t.p.derivative});
  return need;
}

inline void validate(const Scenario& s, std::vector<std::string>& errors) {
  check(errors, [&] { s.grid.validate(); });
  check(errors, [&] { s.params.validate(); });
  check(errors, [&] { s.hamiltonian.validate(); });
  check(errors, [&] { s.terms.validate(); });
  check(errors, [&] { s.schedule.validate(); });
  if (s.wavelet_order < wavelet::kMinOrder || s.wavelet_order > wavelet::kMaxOrder) {
    errors.push_back("wavelet.order must lie in [" + std::to_string(wavelet::kMinOrder) + ", " +
                     std::to_string(wavelet::kMaxOrder) + "]");
  }
  if (s.wavelet_depth < 1 || s.wavelet_depth > s.grid.level) {
    errors.push_back("wavelet.depth must lie in [1, grid.level=" + std::to_string(s.grid.level) + "]");
  }
  if (s.steady.tolerance <= 0.0) errors.push_back("steady.tolerance must be > 0");
  if (s.steady.max_iterations < 1) errors.push_back("steady.max_iterations must be >= 1");
  if (s.steady.verify_steps < 0) errors.push_back("steady.verify_steps must be >= 0");
  if (s.mode == Mode::steady_state) {
    if (!(s.params.gamma > 0.0) || !(s.params.diffusion > 0.0)) {
      errors.push_back("mode = steady_state requires physics.gamma > 0 and physics.diffusion > 0 "
                       "(the steady-state solve needs friction and diffusion to single out a normalizable state)");
    }
    if (!s.terms.include_friction || !s.terms.include_diffusion) {
      errors.push_back("mode = steady_state requires terms.friction and terms.diffusion");
    }
  }
  if (s.scheme == moyal::DerivativeScheme::galerkin && s.wavelet_order >= wavelet::kMinOrder &&
      s.wavelet_order <= wavelet::kMaxOrder && errors.empty()) {
    const int need = required_derivative_order(s);
    if (need >= s.wavelet_order) {
      errors.push_back("the configured terms need derivative order " + std::to_string(need) +
                       ", which requires wavelet.order >= " + std::to_string(need + 1) +
                       " (or solver.scheme = oracle)");
    }
  }
  if (s.initial.kind == InitialKind::file) {
    if (s.initial.path.empty()) errors.push_back("initial.kind = file requires initial.path");
    else if (!std::filesystem::exists(s.initial.path)) errors.push_back("initial.path does not exist: " + s.initial.path);
  } else if (s.mode == Mode::evolve && errors.empty()) {
    check(errors, [&] {
      if (s.initial.kind == InitialKind::coherent) {
        phase::check_margins(s.grid, s.initial.q0, s.initial.p0, s.initial.sigma, s.params.hbar);
      } else {
        phase::check_margins(s.grid, s.initial.q0, 0.0, s.initial.sigma, s.params.hbar);
        phase::check_margins(s.grid, -s.initial.q0, 0.0, s.initial.sigma, s.params.hbar);
      }
    });
  }
}

}  // namespace detail

/// Parses `text`, then applies `overrides` (each "key=value") in order. Later assignments
/// win over earlier ones; a key repeated inside `text` is an error. Every problem is
/// collected and reported together.
inline Scenario parse_config(std::string_view text, const std::vector<std::string>& overrides = {}) {
  Scenario s;
  std::vector<std::string> errors;
  std::map<std::string, int> seen;
  auto handle = [&](std::string_view raw, int line, bool is_override) {
    std::string_view body = raw;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    const std::string stripped = detail::trim(body);
    if (stripped.empty()) return;
    const auto eq = stripped.find('=');
    const std::string where = is_override ? "override" : "line " + std::to_string(line);
    if (eq == std::string::npos) {
      errors.push_back(where + ": expected 'key = value', got '" + stripped + "'");
      return;
    }
    detail::Parser p{errors, detail::trim(stripped.substr(0, eq)), detail::trim(stripped.substr(eq + 1)), line};
    if (p.value.empty()) {
      errors.push_back(where + ": " + p.key + ": missing value");
      return;
    }
    const auto& table = detail::setters();
    const auto it = table.find(p.key);
    if (it == table.end()) {
      errors.push_back(where + ": unknown key '" + p.key + "' (did you mean '" + detail::nearest_key(p.key) + "'?)");
      return;
    }
    if (!is_override) {
      if (auto prev = seen.find(p.key); prev != seen.end()) {
        errors.push_back(where + ": duplicate key '" + p.key + "' (first set on line " + std::to_string(prev->second) + ")");
        return;
      }
      seen[p.key] = line;
    }
    it->second(s, p);
  };

  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    ++line;
    handle(text.substr(pos, end - pos), line, false);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  for (const auto& o : overrides) handle(o, 0, true);

  if (errors.empty()) detail::validate(s, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return s;
}

/// Canonical text form; parse_config(emit_config(s)) == s.
inline std::string emit_config(const Scenario& s) {
  using detail::format_double;
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  auto list = [&](const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + format_double(v[k]);
    return out + "]";
  };
  os << "name = " << s.name << '\n';
  os << "mode = " << to_string(s.mode) << "\n\n";
  os << "grid.q_min = " << format_double(s.grid.q_min) << '\n';
  os << "grid.q_max = " << format_double(s.grid.q_max) << '\n';
  os << "grid.p_min = " << format_double(s.grid.p_min) << '\n';
  os << "grid.p_max = " << format_double(s.grid.p_max) << '\n';
  os << "grid.level = " << s.grid.level << "\n\n";
  os << "physics.hbar = " << format_double(s.params.hbar) << '\n';
  os << "physics.mass = " << format_double(s.params.mass) << '\n';
  os << "physics.gamma = " << format_double(s.params.gamma) << '\n';
  os << "physics.diffusion = " << format_double(s.params.diffusion) << "\n\n";
  os << "hamiltonian.potential = " << list(s.hamiltonian.potential.coefficients()) << '\n';
  os << "hamiltonian.mixed = [";
  for (std::size_t k = 0; k < s.hamiltonian.mixed_terms.size(); ++k) {
    const auto& m = s.hamiltonian.mixed_terms[k];
    os << (k ? ", " : "") << '[' << format_double(m.coefficient) << ", " << m.q_power << ", " << m.p_power << ']';
  }
  os << "]\n";
  os << "hamiltonian.time_table = [";
  for (std::size_t k = 0; k < s.hamiltonian.time_table.size(); ++k) {
    const auto& t = s.hamiltonian.time_table[k];
    os << (k ? ", " : "") << '[' << format_double(t.time) << ", " << format_double(t.factor) << ']';
  }
  os << "]\n\n";
  os << "initial.kind = " << to_string(s.initial.kind) << '\n';
  os << "initial.q0 = " << format_double(s.initial.q0) << '\n';
  os << "initial.p0 = " << format_double(s.initial.p0) << '\n';
  os << "initial.sigma = " << format_double(s.initial.sigma) << '\n';
  if (!s.initial.path.empty()) os << "initial.path = " << s.initial.path << '\n';
  os << '\n';
  os << "terms.liouville = " << b(s.terms.include_liouville) << '\n';
  os << "terms.quantum = " << b(s.terms.include_quantum) << '\n';
  os << "terms.friction = " << b(s.terms.include_friction) << '\n';
  os << "terms.diffusion = " << b(s.terms.include_diffusion) << "\n\n";
  os << "schedule.dt = " << (s.schedule.dt > 0.0 ? format_double(s.schedule.dt) : std::string("auto")) << '\n';
  os << "schedule.t_final = " << format_double(s.schedule.t_final) << '\n';
  os << "schedule.record_every = " << s.schedule.record_every << '\n';
  os << "schedule.snapshot_every = " << s.schedule.snapshot_every << '\n';
  os << "schedule.renormalize = " << b(s.schedule.renormalize) << '\n';
  os << "schedule.threshold_eps = " << format_double(s.schedule.threshold_eps) << "\n\n";
  os << "steady.tolerance = " << format_double(s.steady.tolerance) << '\n';
  os << "steady.max_iterations = " << s.steady.max_iterations << '\n';
  os << "steady.verify_steps = " << s.steady.verify_steps << "\n\n";
  os << "wavelet.order = " << s.wavelet_order << '\n';
  os << "wavelet.depth = " << s.wavelet_depth << "\n\n";
  os << "solver.scheme = " << moyal::to_string(s.scheme) << '\n';
  os << "solver.seed = " << s.seed << "\n\n";
  os << "output.dir = " << s.output.dir << '\n';
  os << "output.csv = " << b(s.output.csv) << '\n';
  os << "output.pgm = " << b(s.output.pgm) << '\n';
  os << "output.operator = " << b(s.output.operator_market) << "\n\n";
  os << "classify.negativity = " << format_double(s.classifier.negativity_threshold) << '\n';
  os << "classify.localized_sparsity = " << format_double(s.classifier.localized_sparsity) << '\n';
  os << "classify.chaotic_sparsity = " << format_double(s.classifier.chaotic_sparsity) << '\n';
  os << "classify.chaotic_entropy = " << format_double(s.classifier.chaotic_entropy) << '\n';
  os << "classify.stationarity_rate = " << format_double(s.classifier.stationarity_rate) << '\n';
  os << "classify.window = " << s.classifier.stationarity_window << '\n';
  os << "classify.coefficient_threshold = " << format_double(s.classifier.sparsity_threshold) << '\n';
  return os.str();
}

/// Every recognised key, sorted.
inline std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [k, setter] : detail::setters()) out.push_back(k);
  return out;
}

}  // namespace wmr::scenario
