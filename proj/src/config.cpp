#include "strainlimit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

namespace strainlimit {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string where(const std::string& key, int line) {
  return "'" + key + "' (line " + std::to_string(line) + ")";
}

double to_double(const std::string& key, const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v)) {
    throw RangeError("config: " + where(key, line) + " expects a finite number, got '" + tok + "'", key, line);
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& tok, int line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw RangeError("config: " + where(key, line) + " expects an integer, got '" + tok + "'", key, line);
  }
  return v;
}

void require(bool ok, const std::string& key, int line, const std::string& what) {
  if (!ok) throw RangeError("config: " + where(key, line) + " " + what, key, line);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += f(v[i]);
  }
  return out;
}

const std::vector<std::string>& known_scenarios() {
  static const std::vector<std::string> names = scenario_names();
  return names;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::map<std::string, int> seen;
  int cells_line = 0;
  std::optional<int> cells_x, cells_y;
  std::optional<int> cells_scalar;

  using Handler = std::function<void(const std::string&, const std::string&, int)>;
  auto positive_real = [](double& dst) {
    return Handler([&dst](const std::string& k, const std::string& v, int line) {
      dst = to_double(k, v, line);
      require(dst > 0.0, k, line, "must be > 0");
    });
  };
  auto choice = [](std::string& dst, std::vector<std::string> allowed) {
    return Handler([&dst, allowed](const std::string& k, const std::string& v, int line) {
      std::string joined;
      for (const auto& a : allowed) joined += (joined.empty() ? "" : ", ") + a;
      require(std::find(allowed.begin(), allowed.end(), v) != allowed.end(), k, line, "must be one of " + joined);
      dst = v;
    });
  };
  auto cell_count = [](std::optional<int>& dst) {
    return Handler([&dst](const std::string& k, const std::string& v, int line) {
      const long long n = to_integer(k, v, line);
      require(n >= 1 && n <= 1000000, k, line, "must be an integer in [1, 1e6]");
      dst = static_cast<int>(n);
    });
  };

  const std::map<std::string, Handler> handlers = {
      {"dim",
       [&](const std::string& k, const std::string& v, int line) {
         const long long d = to_integer(k, v, line);
         require(d == 1 || d == 2, k, line, "must be 1 or 2");
         c.dim = static_cast<int>(d);
       }},
      {"domain",
       [&](const std::string& k, const std::string& v, int line) {
         c.domain.clear();
         for (const auto& tok : split_ws(v)) c.domain.push_back(to_double(k, tok, line));
         require(c.domain.size() == 2 || c.domain.size() == 4, k, line, "must list 2 or 4 numbers");
         for (std::size_t i = 0; i + 1 < c.domain.size(); i += 2) {
           require(c.domain[i] < c.domain[i + 1], k, line, "must have a < b (and c < d)");
         }
       }},
      {"cells",
       [&](const std::string& k, const std::string& v, int line) {
         cell_count(cells_scalar)(k, v, line);
         cells_line = line;
       }},
      {"cells_x", cell_count(cells_x)},
      {"cells_y", cell_count(cells_y)},
      {"model", choice(c.model, {"prototype", "powerlaw", "linear"})},
      {"q",
       [&](const std::string& k, const std::string& v, int line) {
         c.q = to_double(k, v, line);
         require(c.q >= 1.0, k, line, "must be >= 1");
       }},
      {"p",
       [&](const std::string& k, const std::string& v, int line) {
         c.p = to_double(k, v, line);
         require(c.p > 1.0, k, line, "must be > 1");
       }},
      {"alpha", positive_real(c.alpha)},
      {"beta", positive_real(c.beta)},
      {"reg_n",
       [&](const std::string& k, const std::string& v, int line) {
         if (v == "none") {
           c.reg_n.reset();
           return;
         }
         const long long n = to_integer(k, v, line);
         require(n >= 1 && n <= 1000000000, k, line, "must be an integer >= 1 or 'none'");
         c.reg_n = static_cast<int>(n);
       }},
      {"reg_kind", choice(c.reg_kind, {"linear", "power"})},
      {"scheme", choice(c.scheme, {"midpoint", "rk4"})},
      {"dt", positive_real(c.dt)},
      {"t_end",
       [&](const std::string& k, const std::string& v, int line) {
         c.t_end = to_double(k, v, line);
         require(c.t_end >= 0.0, k, line, "must be >= 0");
       }},
      {"scenario", choice(c.scenario, known_scenarios())},
      {"amplitude_scale", positive_real(c.amplitude_scale)},
      {"seed",
       [&](const std::string& k, const std::string& v, int line) {
         std::uint64_t s = 0;
         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
         require(ec == std::errc() && ptr == v.data() + v.size(), k, line, "must be a non-negative integer");
         c.seed = s;
       }},
      {"out_dir",
       [&](const std::string& k, const std::string& v, int line) {
         require(!v.empty(), k, line, "must not be empty");
         c.out_dir = v;
       }},
      {"snapshot_every",
       [&](const std::string& k, const std::string& v, int line) {
         const long long n = to_integer(k, v, line);
         require(n >= 0 && n <= 1000000000, k, line, "must be an integer >= 0");
         c.snapshot_every = static_cast<int>(n);
       }},
      {"study", choice(c.study, {"regularization", "refinement", "stability"})},
      {"n_list",
       [&](const std::string& k, const std::string& v, int line) {
         c.n_list.clear();
         for (const auto& tok : split_ws(v)) {
           const long long n = to_integer(k, tok, line);
           require(n >= 1 && n <= 1000000000, k, line, "entries must be integers >= 1");
           require(c.n_list.empty() || n > c.n_list.back(), k, line, "must be strictly increasing");
           c.n_list.push_back(static_cast<int>(n));
         }
         require(c.n_list.size() >= 3, k, line, "needs at least 3 entries");
       }},
      {"levels",
       [&](const std::string& k, const std::string& v, int line) {
         c.levels.clear();
         for (const auto& tok : split_ws(v)) {
           const double x = to_double(k, tok, line);
           require(x > 0.0, k, line, "entries must be > 0");
           c.levels.push_back(x);
         }
         require(c.levels.size() >= 3, k, line, "needs at least 3 entries");
       }},
      {"axis", choice(c.axis, {"h", "dt"})},
      {"delta_list",
       [&](const std::string& k, const std::string& v, int line) {
         c.delta_list.clear();
         for (const auto& tok : split_ws(v)) {
           const double x = to_double(k, tok, line);
           require(x > 0.0, k, line, "entries must be > 0");
           c.delta_list.push_back(x);
         }
         require(c.delta_list.size() >= 3, k, line, "needs at least 3 entries");
       }},
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw RangeError("config: line " + std::to_string(line_no) + " is not of the form 'key = value'", "", line_no);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto h = handlers.find(key);
    if (h == handlers.end()) {
      throw UnknownKey("config: unknown key " + where(key, line_no), key, line_no);
    }
    if (const auto prev = seen.find(key); prev != seen.end()) {
      throw RangeError("config: " + where(key, line_no) + " already set on line " + std::to_string(prev->second),
                       key, line_no);
    }
    seen[key] = line_no;
    if (value.empty()) throw RangeError("config: " + where(key, line_no) + " has an empty value", key, line_no);
    h->second(key, value, line_no);
  }

  auto line_of = [&](const std::string& key) {
    const auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  for (const char* key : {"dt", "t_end", "scenario", "domain"}) {
    if (!seen.count(key)) throw MissingKey(std::string("config: missing required key '") + key + "'", key, 0);
  }
  require(c.domain.size() == static_cast<std::size_t>(2 * c.dim), "domain", line_of("domain"),
          "must list " + std::to_string(2 * c.dim) + " numbers for dim = " + std::to_string(c.dim));
  if (c.dim == 1) {
    if (!cells_scalar) throw MissingKey("config: missing required key 'cells'", "cells", 0);
    for (const char* key : {"cells_x", "cells_y"}) {
      require(!seen.count(key), key, line_of(key), "is only valid for dim = 2 (use 'cells')");
    }
    c.cells = {*cells_scalar};
  } else {
    const auto cx = cells_x ? cells_x : cells_scalar;
    const auto cy = cells_y ? cells_y : cells_scalar;
    if (!cx) throw MissingKey("config: missing required key 'cells_x'", "cells_x", 0);
    if (!cy) throw MissingKey("config: missing required key 'cells_y'", "cells_y", 0);
    c.cells = {*cx, *cy};
    (void)cells_line;
  }
  if (c.reg_kind == "power") {
    require(c.p >= 2.0, "reg_kind", line_of("reg_kind"), "'power' needs p >= 2");
  }
  return c;
}

std::string to_text(const RunConfig& c) {
  std::ostringstream out;
  out << "dim = " << c.dim << '\n';
  out << "domain = " << join(c.domain, fmt) << '\n';
  if (c.dim == 1) {
    out << "cells = " << c.cells.at(0) << '\n';
  } else {
    out << "cells_x = " << c.cells.at(0) << '\n';
    out << "cells_y = " << c.cells.at(1) << '\n';
  }
  out << "model = " << c.model << '\n';
  out << "q = " << fmt(c.q) << '\n';
  out << "p = " << fmt(c.p) << '\n';
  out << "alpha = " << fmt(c.alpha) << '\n';
  out << "beta = " << fmt(c.beta) << '\n';
  out << "reg_n = " << (c.reg_n ? std::to_string(*c.reg_n) : std::string("none")) << '\n';
  out << "reg_kind = " << c.reg_kind << '\n';
  out << "scheme = " << c.scheme << '\n';
  out << "dt = " << fmt(c.dt) << '\n';
  out << "t_end = " << fmt(c.t_end) << '\n';
  out << "scenario = " << c.scenario << '\n';
  out << "amplitude_scale = " << fmt(c.amplitude_scale) << '\n';
  out << "seed = " << c.seed << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  out << "snapshot_every = " << c.snapshot_every << '\n';
  if (!c.study.empty()) out << "study = " << c.study << '\n';
  out << "n_list = " << join(c.n_list, [](int n) { return std::to_string(n); }) << '\n';
  if (!c.levels.empty()) out << "levels = " << join(c.levels, fmt) << '\n';
  out << "axis = " << c.axis << '\n';
  out << "delta_list = " << join(c.delta_list, fmt) << '\n';
  return out.str();
}

MeshSpec RunConfig::mesh_spec() const {
  MeshSpec m;
  m.dim = dim;
  m.domain = domain;
  m.cells = cells;
  return m;
}

ConstitutiveModel RunConfig::constitutive_model() const {
  ConstitutiveModel m;
  if (model == "prototype") {
    m.potential = ScalarPotential::prototype(q);
  } else if (model == "powerlaw") {
    m.potential = ScalarPotential::power_law(p);
  } else {
    m.potential = ScalarPotential::linear();
  }
  m.alpha = alpha;
  m.beta = beta;
  m.reg_n = reg_n;
  m.reg_kind = reg_kind == "power" ? RegularizerKind::PowerTikhonov : RegularizerKind::LinearTikhonov;
  m.reg_exponent = p;
  m.validate();
  return m;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.dt = dt;
  s.t_end = t_end;
  s.scheme = scheme == "rk4" ? Scheme::RK4 : Scheme::ImplicitMidpoint;
  return s;
}

Scenario RunConfig::build_scenario() const {
  return make_scenario(scenario, constitutive_model(), mesh_spec(), t_end, amplitude_scale);
}

}  // namespace strainlimit
