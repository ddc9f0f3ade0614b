#include "pucci/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace pucci {

const char* to_string(Command c) {
  switch (c) {
    case Command::Eigen: return "eigen";
    case Command::Solve: return "solve";
    case Command::Radial: return "radial";
    case Command::VerifyOperator: return "verify-operator";
    case Command::Barrier: return "barrier";
    case Command::Compare: return "compare";
  }
  return "?";
}

namespace {

struct Entry {
  std::string value;
  int line = 0, col = 0;
  bool used = false;
};

struct Table {
  std::map<std::string, Entry> entries;

  const Entry* find(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': '" + e.value + "'", e.line, e.col);
  }
}

std::vector<double> parse_numbers(const Entry& e, const std::string& key) {
  std::vector<double> out;
  std::istringstream is(e.value);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("invalid number list for '" + key + "': '" + e.value + "'", e.line,
                        e.col);
    }
  }
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, Table> sections;
  {
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    std::string section;
    while (std::getline(is, raw)) {
      ++line_no;
      std::string line = raw;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const int col = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
      if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError("unterminated section header", line_no, col);
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty()) throw ConfigError("empty section name", line_no, col);
        sections[section];
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no, col);
      if (section.empty()) throw ConfigError("key outside any [section]", line_no, col);
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError("empty key", line_no, col);
      auto& tab = sections[section];
      if (tab.entries.count(key))
        throw ConfigError("duplicate key '" + key + "'", line_no, col);
      tab.entries[key] = Entry{value, line_no, col, false};
    }
  }

  static const std::map<std::string, std::vector<std::string>> known = {
      {"operator", {"a", "A", "alpha", "sign", "eps_reg"}},
      {"domain", {"type", "dim", "center", "radius", "lo", "hi", "rho0", "rho_cos", "rho_sin"}},
      {"grid", {"h", "stencil_width"}},
      {"command",
       {"name", "bracket_tol", "lambda", "f", "tol", "max_steps", "n_samples", "gamma", "delta",
        "beta"}},
      {"output", {"dir", "prefix"}},
  };
  for (const auto& [sec, tab] : sections) {
    const auto it = known.find(sec);
    if (it == known.end()) {
      const auto& e = tab.entries.begin();
      throw ConfigError("unknown section '" + sec + "'",
                        e == tab.entries.end() ? 0 : e->second.line, 1);
    }
    for (const auto& [key, entry] : tab.entries)
      if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
        throw ConfigError("unknown key '" + key + "' in [" + sec + "]", entry.line, entry.col);
  }

  RunConfig cfg;
  auto echo = [&cfg](const std::string& k, const std::string& v) {
    cfg.resolved.emplace_back(k, v);
  };
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  // operator block
  {
    Table& t = sections["operator"];
    double a = 1.0, A = 1.0, alpha = 0.0, eps = 0.0;
    ExtremalSign sign = ExtremalSign::Plus;
    if (const Entry* e = t.find("a")) a = parse_number(*e, "a");
    if (const Entry* e = t.find("A")) A = parse_number(*e, "A");
    if (const Entry* e = t.find("alpha")) alpha = parse_number(*e, "alpha");
    if (const Entry* e = t.find("sign")) {
      if (e->value == "plus") sign = ExtremalSign::Plus;
      else if (e->value == "minus") sign = ExtremalSign::Minus;
      else throw ConfigError("sign must be 'plus' or 'minus'", e->line, e->col);
    }
    const Entry* eps_entry = t.find("eps_reg");
    if (eps_entry) {
      eps = parse_number(*eps_entry, "eps_reg");
      cfg.eps_reg_explicit = true;
    }
    // grid block first read of h for the eps default
    double h = cfg.h;
    if (sections.count("grid")) {
      if (const Entry* e = sections["grid"].find("h")) {
        h = parse_number(*e, "h");
        sections["grid"].entries["h"].used = false;  // re-read below
      }
    }
    if (!eps_entry && alpha < 0.0) eps = std::max(h, 1e-6);
    try {
      cfg.op = OperatorSpec::make(a, A, alpha, sign, eps);
    } catch (const std::invalid_argument& ex) {
      const Entry* at = eps_entry ? eps_entry : t.entries.count("alpha") ? &t.entries["alpha"]
                                                                         : nullptr;
      throw ConfigError(std::string("invalid operator: ") + ex.what(), at ? at->line : 0,
                        at ? at->col : 0);
    }
    echo("operator.a", fmt(a));
    echo("operator.A", fmt(A));
    echo("operator.alpha", fmt(alpha));
    echo("operator.sign", to_string(sign));
    echo("operator.eps_reg", fmt(eps));
  }

  // domain block
  {
    Table& t = sections["domain"];
    std::string type = "ball";
    if (const Entry* e = t.find("type")) type = e->value;
    int dim = 1;
    if (const Entry* e = t.find("dim")) {
      dim = static_cast<int>(parse_number(*e, "dim"));
      if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2", e->line, e->col);
    }
    Point center = Point::Zero();
    if (const Entry* e = t.find("center")) {
      const auto v = parse_numbers(*e, "center");
      if (v.empty() || v.size() > 2) throw ConfigError("center needs 1 or 2 numbers", e->line, e->col);
      center(0) = v[0];
      center(1) = v.size() > 1 ? v[1] : 0.0;
    }
    try {
      if (type == "ball") {
        BallDomain b;
        b.dim = dim;
        b.center = center;
        b.radius = 1.0;
        if (const Entry* e = t.find("radius")) b.radius = parse_number(*e, "radius");
        cfg.domain = DomainSpec(b);
        echo("domain.type", "ball");
        echo("domain.dim", std::to_string(dim));
        echo("domain.center", fmt(center(0)) + " " + fmt(center(1)));
        echo("domain.radius", fmt(b.radius));
      } else if (type == "box") {
        BoxDomain b;
        b.dim = dim;
        if (const Entry* e = t.find("lo")) {
          const auto v = parse_numbers(*e, "lo");
          if (static_cast<int>(v.size()) != dim) throw ConfigError("lo needs dim numbers", e->line, e->col);
          b.lo(0) = v[0];
          b.lo(1) = v.size() > 1 ? v[1] : 0.0;
        }
        if (const Entry* e = t.find("hi")) {
          const auto v = parse_numbers(*e, "hi");
          if (static_cast<int>(v.size()) != dim) throw ConfigError("hi needs dim numbers", e->line, e->col);
          b.hi(0) = v[0];
          b.hi(1) = v.size() > 1 ? v[1] : 0.0;
        }
        cfg.domain = DomainSpec(b);
        echo("domain.type", "box");
        echo("domain.dim", std::to_string(dim));
        echo("domain.lo", fmt(b.lo(0)) + " " + fmt(b.lo(1)));
        echo("domain.hi", fmt(b.hi(0)) + " " + fmt(b.hi(1)));
      } else if (type == "star") {
        StarDomain s;
        s.center = center;
        if (const Entry* e = t.find("rho0")) s.c0 = parse_number(*e, "rho0");
        if (const Entry* e = t.find("rho_cos")) s.cos_coef = parse_numbers(*e, "rho_cos");
        if (const Entry* e = t.find("rho_sin")) s.sin_coef = parse_numbers(*e, "rho_sin");
        cfg.domain = DomainSpec(s);
        echo("domain.type", "star");
        echo("domain.rho0", fmt(s.c0));
        std::string cc;
        for (double v : s.cos_coef) cc += fmt(v) + " ";
        echo("domain.rho_cos", trim(cc));
        std::string sc;
        for (double v : s.sin_coef) sc += fmt(v) + " ";
        echo("domain.rho_sin", trim(sc));
      } else {
        const Entry* e = t.find("type");
        throw ConfigError("unknown domain type '" + type + "'", e ? e->line : 0, e ? e->col : 0);
      }
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("invalid domain: ") + ex.what(), 0, 0);
    }
  }

  // grid block
  {
    Table& t = sections["grid"];
    if (const Entry* e = t.find("h")) {
      cfg.h = parse_number(*e, "h");
      if (!(cfg.h > 0.0)) throw ConfigError("h must be > 0", e->line, e->col);
    }
    if (const Entry* e = t.find("stencil_width")) {
      cfg.stencil_width = static_cast<int>(parse_number(*e, "stencil_width"));
      if (cfg.stencil_width < 1 || cfg.stencil_width > 3)
        throw ConfigError("stencil_width must be 1, 2 or 3", e->line, e->col);
    }
    echo("grid.h", fmt(cfg.h));
    echo("grid.stencil_width", std::to_string(cfg.stencil_width));
  }

  // command block
  {
    Table& t = sections["command"];
    if (const Entry* e = t.find("name")) {
      const std::string& n = e->value;
      if (n == "eigen") cfg.command = Command::Eigen;
      else if (n == "solve") cfg.command = Command::Solve;
      else if (n == "radial") cfg.command = Command::Radial;
      else if (n == "verify-operator") cfg.command = Command::VerifyOperator;
      else if (n == "barrier") cfg.command = Command::Barrier;
      else if (n == "compare") cfg.command = Command::Compare;
      else throw ConfigError("unknown command '" + n + "'", e->line, e->col);
    }
    auto num = [&](const char* key, double& slot, bool positive = false) {
      if (const Entry* e = t.find(key)) {
        slot = parse_number(*e, key);
        if (positive && !(slot > 0.0))
          throw ConfigError(std::string(key) + " must be > 0", e->line, e->col);
      }
    };
    num("bracket_tol", cfg.bracket_tol, true);
    num("lambda", cfg.lambda);
    num("f", cfg.f_const);
    num("tol", cfg.tol, true);
    num("gamma", cfg.gamma);
    num("delta", cfg.delta);
    num("beta", cfg.beta);
    if (const Entry* e = t.find("max_steps")) cfg.max_steps = static_cast<long>(parse_number(*e, "max_steps"));
    if (const Entry* e = t.find("n_samples")) {
      cfg.n_samples = static_cast<int>(parse_number(*e, "n_samples"));
      if (cfg.n_samples < 1) throw ConfigError("n_samples must be >= 1", e->line, e->col);
    }
    if (cfg.command == Command::Solve && cfg.f_const > 0.0) {
      const Entry* e = t.find("f");
      throw ConfigError("solve requires f <= 0", e ? e->line : 0, e ? e->col : 0);
    }
    if (cfg.command == Command::Barrier && !(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
      const Entry* e = t.find("gamma");
      throw ConfigError("barrier requires gamma in (0, 1)", e ? e->line : 0, e ? e->col : 0);
    }
    echo("command.name", to_string(cfg.command));
    echo("command.bracket_tol", fmt(cfg.bracket_tol));
    echo("command.lambda", fmt(cfg.lambda));
    echo("command.f", fmt(cfg.f_const));
    echo("command.tol", fmt(cfg.tol));
    echo("command.max_steps", std::to_string(cfg.max_steps));
    echo("command.n_samples", std::to_string(cfg.n_samples));
    echo("command.gamma", fmt(cfg.gamma));
    echo("command.delta", fmt(cfg.delta));
    echo("command.beta", fmt(cfg.beta));
  }

  // output block
  {
    Table& t = sections["output"];
    if (const Entry* e = t.find("dir")) cfg.out_dir = e->value;
    if (const Entry* e = t.find("prefix")) cfg.prefix = e->value;
    if (cfg.prefix.empty()) cfg.prefix = to_string(cfg.command);
    echo("output.dir", cfg.out_dir);
    echo("output.prefix", cfg.prefix);
  }

  return cfg;
}

}  // namespace pucci
