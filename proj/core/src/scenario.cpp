#include "cil/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cil {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long long to_int(const std::string& tok, int line, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != tok.size())
    throw ParseError(line, what + " expects an integer, got '" + tok + "'");
  return v;
}

FgAbelianGroup group_at(const std::string& text, int line) {
  try {
    return parse_group(text);
  } catch (const ParseError& e) {
    throw ParseError(line, e.what());
  }
}

SixTermConstraint::Kind constraint_kind(const std::string& word, int line) {
  using K = SixTermConstraint::Kind;
  if (word == "zero") return K::zero;
  if (word == "surjective") return K::surjective;
  if (word == "injective") return K::injective;
  if (word == "kills_generators") return K::kills_generators;
  if (word == "image_contains_primitive") return K::image_contains_primitive;
  if (word == "image_direct_summand") return K::image_direct_summand;
  throw ParseError(line, "unknown constraint kind '" + word + "'");
}

// Keys that may repeat; every other key must appear at most once.
bool repeatable(const std::string& key) {
  return key == "constraint" || key == "expect_group";
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
  ScenarioFile sc;
  std::array<std::optional<FgAbelianGroup>, 6> nodes;
  std::array<int, 6> node_var{{-1, -1, -1, -1, -1, -1}};
  std::array<bool, 6> node_seen{};
  std::array<std::string, 6> labels{};
  std::array<std::string, 6> arrow_labels{};
  std::vector<SixTermConstraint> constraints;
  bool any_inline = false;

  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw_line;
  int line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    std::string s = raw_line;
    std::size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    std::size_t colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError(line, "expected 'key: value', got '" + s + "'");
    std::string key = trim(s.substr(0, colon));
    std::string value = trim(s.substr(colon + 1));
    if (key.empty()) throw ParseError(line, "empty key");
    if (value.empty()) throw ParseError(line, "key '" + key + "' has no value");
    if (!repeatable(key) && !seen.insert(key).second)
      throw ParseError(line, "duplicate key '" + key + "'");
    if (sc.raw.count(key))
      sc.raw[key] += "; " + value;
    else
      sc.raw[key] = value;

    if (key == "kind") {
      sc.kind = value;
    } else if (key == "target") {
      sc.target = value;
    } else if (key == "name") {
      sc.name = value;
    } else if (key == "scheme") {
      sc.scheme = value;
    } else if (key == "grid") {
      for (const std::string& tok : split_ws(value)) {
        long long v = to_int(tok, line, "grid");
        if (v < 1 || v > 100000) throw ParseError(line, "grid size out of range");
        sc.grid_sizes.push_back(static_cast<int>(v));
      }
      if (sc.grid_sizes.empty() || sc.grid_sizes.size() > 3)
        throw ParseError(line, "grid expects 1 to 3 sizes");
    } else if (key == "blocks") {
      sc.blocks = static_cast<int>(to_int(value, line, "blocks"));
    } else if (key == "power") {
      sc.power = to_int(value, line, "power");
    } else if (key == "seed") {
      sc.seed = static_cast<unsigned long long>(to_int(value, line, "seed"));
    } else if (key == "window") {
      sc.window = to_int(value, line, "window");
    } else if (key == "n0") {
      sc.n0 = to_int(value, line, "n0");
    } else if (key == "bound") {
      sc.bound = to_int(value, line, "bound");
    } else if (key == "expect_index") {
      sc.expect_index = to_int(value, line, "expect_index");
    } else if (key == "expect_kernel") {
      std::vector<std::string> toks = split_ws(value);
      if (toks.size() != 3)
        throw ParseError(line, "expect_kernel expects 'ker coker index'");
      sc.expect_kernel = {{to_int(toks[0], line, "expect_kernel"),
                           to_int(toks[1], line, "expect_kernel"),
                           to_int(toks[2], line, "expect_kernel")}};
    } else if (key == "expect_group") {
      std::size_t eq = value.find('=');
      if (eq == std::string::npos)
        throw ParseError(line, "expect_group expects 'label = group'");
      std::string label = trim(value.substr(0, eq));
      std::string grp = trim(value.substr(eq + 1));
      if (label.empty() || grp.empty())
        throw ParseError(line, "expect_group expects 'label = group'");
      group_at(grp, line);  // validate syntax now
      sc.expect_groups.emplace_back(label, grp);
    } else if (key.rfind("node", 0) == 0 && key.size() == 5 && key[4] >= '0' &&
               key[4] <= '5') {
      any_inline = true;
      int j = key[4] - '0';
      node_seen[static_cast<std::size_t>(j)] = true;
      std::vector<std::string> toks = split_ws(value);
      if (toks[0] == "?") {
        if (toks.size() != 2)
          throw ParseError(line, "unknown node expects '? <variable id>'");
        long long var = to_int(toks[1], line, "node variable");
        if (var < 0) throw ParseError(line, "node variable must be >= 0");
        node_var[static_cast<std::size_t>(j)] = static_cast<int>(var);
      } else {
        nodes[static_cast<std::size_t>(j)] = group_at(value, line);
      }
    } else if (key.rfind("label", 0) == 0 && key.size() == 6 && key[5] >= '0' &&
               key[5] <= '5') {
      any_inline = true;
      labels[static_cast<std::size_t>(key[5] - '0')] = value;
    } else if (key.rfind("arrow_label", 0) == 0 && key.size() == 12 &&
               key[11] >= '0' && key[11] <= '5') {
      any_inline = true;
      arrow_labels[static_cast<std::size_t>(key[11] - '0')] = value;
    } else if (key == "constraint") {
      any_inline = true;
      std::vector<std::string> toks = split_ws(value);
      if (toks.size() < 2)
        throw ParseError(line, "constraint expects '<kind> <arrow> [generators]'");
      SixTermConstraint c;
      c.kind = constraint_kind(toks[0], line);
      long long arrow = to_int(toks[1], line, "constraint arrow");
      if (arrow < 0 || arrow > 5)
        throw ParseError(line, "constraint arrow must be 0..5");
      c.arrow = static_cast<int>(arrow);
      for (std::size_t i = 2; i < toks.size(); ++i)
        c.generators.push_back(to_int(toks[i], line, "constraint generator"));
      if (c.kind == SixTermConstraint::Kind::kills_generators && c.generators.empty())
        throw ParseError(line, "kills_generators needs at least one generator");
      if (c.kind != SixTermConstraint::Kind::kills_generators && !c.generators.empty())
        throw ParseError(line, "only kills_generators takes generators");
      constraints.push_back(std::move(c));
    } else {
      throw ParseError(line, "unrecognized key '" + key + "'");
    }
  }

  if (sc.kind.empty()) throw ValidationError("kind", "missing");
  if (sc.kind != "fedosov" && sc.kind != "winding" && sc.kind != "lattice" &&
      sc.kind != "groups")
    throw ValidationError("kind", "must be fedosov, winding, lattice or groups");
  if (sc.target.empty()) throw ValidationError("target", "missing");
  if (sc.name.empty()) sc.name = sc.target;
  if (sc.scheme != "spectral" && sc.scheme != "central4")
    throw ValidationError("scheme", "must be spectral or central4");
  if (sc.blocks < 1) throw ValidationError("blocks", "must be >= 1");
  if (sc.window < 1) throw ValidationError("window", "must be >= 1");
  if (sc.bound < 2) throw ValidationError("bound", "must be >= 2");

  if (sc.target == "inline") {
    if (sc.kind != "groups")
      throw ValidationError("target", "inline sequences require kind: groups");
    for (int j = 0; j < 6; ++j)
      if (!node_seen[static_cast<std::size_t>(j)])
        throw ValidationError("node" + std::to_string(j), "missing");
    SixTermSequence seq;
    seq.node_labels = labels;
    seq.arrow_labels = arrow_labels;
    seq.nodes = nodes;
    seq.node_var = node_var;
    seq.constraints = constraints;
    sc.inline_sequence = std::move(seq);
  } else if (any_inline) {
    throw ValidationError("target", "node tables require target: inline");
  }
  return sc;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario", "cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

MatrixSymbol builtin_symbol(const std::string& name, const TorusGrid& grid,
                            int blocks) {
  if (name == "thm3_8" || name == "sigma_T_blocks") {
    if (grid.dim() != 3) throw GridMismatch(name, 3, grid.dim());
    return sigma_T(grid, name == "thm3_8" ? 1 : blocks);
  }
  if (name == "b456_identity") {
    if (grid.dim() != 2) throw GridMismatch(name, 2, grid.dim());
    const double c = 20.0 / std::acos(-1.0);
    return sample(grid, 3, 1, [c](const std::vector<double>& ang) {
      std::array<double, 3> t =
          b_prime_triple(-20.0 + c * ang[0], -20.0 + c * ang[1]);
      Eigen::MatrixXcd m(3, 1);
      m << t[0], t[1], t[2];
      return m;
    });
  }
  throw UnknownScenario(name);
}

LatticeOperator builtin_lattice(const std::string& name, long long n0) {
  if (name == "prop3_15") return step_shift_operator(n0);
  if (name == "mult_jk" || name == "a5_plus_ia6") return jk_multiplier_operator();
  throw UnknownScenario(name);
}

std::variant<MatrixSymbol, LatticeOperator> builtin(const std::string& name,
                                                    const TorusGrid& grid) {
  if (name == "thm3_8" || name == "sigma_T_blocks" || name == "b456_identity")
    return builtin_symbol(name, grid);
  if (name == "prop3_15" || name == "mult_jk" || name == "a5_plus_ia6")
    return builtin_lattice(name);
  throw UnknownScenario(name);
}

std::vector<std::string> builtin_names() {
  return {"thm3_8",   "sigma_T_blocks", "b456_identity",
          "prop3_15", "mult_jk",        "a5_plus_ia6"};
}

double b456_sup_deviation(long long half) {
  double worst = 0.0;
  for (long long j = -half; j <= half; ++j)
    for (long long k = -half; k <= half; ++k) {
      std::array<double, 3> t =
          b_prime_triple(static_cast<double>(j), static_cast<double>(k));
      worst = std::max(worst,
                       std::abs(t[0] * t[0] + t[1] * t[1] + t[2] * t[2] - 1.0));
    }
  return worst;
}

}  // namespace cil
