#ifndef CCDEG_CLI_SCENARIO_HPP
#define CCDEG_CLI_SCENARIO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ccdeg/ivp.hpp"
#include "ccdeg/maps.hpp"

namespace ccdeg::cli {

// Scenario files are line oriented:
//
//   kind = degree            # top-level keys before the first section
//   [map]
//   vars = x
//   domain = [-2, 2]
//   [piece]
//   where = x <= 1/3
//   value = 1/3
//   [params]
//   omega = [0, 1.2]
//
// '#' starts a comment. Sections: [map], [piece] (repeatable, in ownership
// order), [curve] (repeatable), [majorant] (repeatable), [params].

class ScenarioError : public Error {
 public:
  ScenarioError(const std::string& file, std::size_t line, std::size_t col, const std::string& msg)
      : Error(ErrorKind::parse, file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line), col_(col) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return col_; }

 private:
  std::size_t line_, col_;
};

struct Entry {
  std::string key, value;
  std::size_t line = 0, col = 0;  ///< position of the value's first character
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

/// Raw key/value structure of a scenario file.
struct RawScenario {
  std::string file;
  Section top;
  std::vector<Section> sections;
};

inline RawScenario read_raw(std::istream& in, const std::string& file) {
  static const std::set<std::string> known = {"map", "piece", "curve", "majorant", "params"};
  RawScenario r;
  r.file = file;
  r.top.name = "";
  Section* cur = &r.top;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const std::size_t e = line.find_last_not_of(" \t\r");
    if (line[b] == '[') {
      if (line[e] != ']') throw ScenarioError(file, ln, e + 1, "section header must end with ']'");
      std::string name = line.substr(b + 1, e - b - 1);
      if (!known.count(name)) throw ScenarioError(file, ln, b + 2, "unknown section [" + name + "]");
      r.sections.push_back({name, ln, {}});
      cur = &r.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=', b);
    if (eq == std::string::npos || eq > e) throw ScenarioError(file, ln, b + 1, "expected 'key = value'");
    std::size_t ke = line.find_last_not_of(" \t", eq - 1);
    if (ke == std::string::npos || ke < b) throw ScenarioError(file, ln, b + 1, "missing key");
    std::string key = line.substr(b, ke - b + 1);
    std::size_t vb = line.find_first_not_of(" \t", eq + 1);
    if (vb == std::string::npos || vb > e) throw ScenarioError(file, ln, eq + 2, "missing value for '" + key + "'");
    if (cur->find(key)) throw ScenarioError(file, ln, b + 1, "duplicate key '" + key + "'");
    cur->entries.push_back({key, line.substr(vb, e - vb + 1), ln, vb + 1});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Value parsers, anchored to the entry they came from.

struct Slice {
  std::string text;
  std::size_t offset;  ///< within the entry value
};

/// Split on `sep` outside parentheses and brackets.
inline std::vector<Slice> split_top(std::string_view s, char sep) {
  std::vector<Slice> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    const char c = i < s.size() ? s[i] : sep;
    if (c == '(' || c == '[') ++depth;
    else if (c == ')' || c == ']') --depth;
    else if (c == sep && depth == 0) {
      std::size_t a = start, b = i;
      while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
      while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
      out.push_back({std::string(s.substr(a, b - a)), a});
      start = i + 1;
    }
  }
  return out;
}

class ValueParser {
 public:
  ValueParser(const std::string& file, const Entry& e) : file_(file), e_(e) {}

  [[noreturn]] void fail(std::size_t offset, const std::string& msg) const {
    throw ScenarioError(file_, e_.line, e_.col + offset, msg);
  }

  Expr expr(const Slice& s, std::span<const std::string> names) const {
    if (s.text.empty()) fail(s.offset, "empty expression");
    try {
      return parse_expr(s.text, names);
    } catch (const ParseError& pe) {
      fail(s.offset + pe.column() - 1, pe.detail());
    }
  }
  Expr expr(std::span<const std::string> names) const { return expr(Slice{e_.value, 0}, names); }

  double number(const Slice& s) const {
    const Expr x = expr(s, {});
    const double v = x.eval(Vec(std::size_t{0}));
    if (!std::isfinite(v)) fail(s.offset, "value is not finite");
    return v;
  }
  double number() const { return number(Slice{e_.value, 0}); }

  std::size_t count() const {
    const double v = number();
    if (v < 0.0 || v != std::floor(v) || v > 1e9) fail(0, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
  }

  bool boolean() const {
    const std::string& v = e_.value;
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(0, "expected true or false");
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    std::string cur;
    for (char c : e_.value + " ") {
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    return out;
  }

  /// "[a, b] x [c, d]"
  Box box() const {
    const std::string& v = e_.value;
    std::vector<Interval> axes;
    std::size_t i = 0;
    while (i < v.size()) {
      if (std::isspace(static_cast<unsigned char>(v[i]))) {
        ++i;
        continue;
      }
      if (!axes.empty() && (v[i] == 'x' || v[i] == '*')) {
        ++i;
        continue;
      }
      if (v[i] != '[') fail(i, "expected '['");
      const std::size_t close = v.find(']', i);
      if (close == std::string::npos) fail(i, "unclosed '['");
      auto parts = split_top(std::string_view(v).substr(i + 1, close - i - 1), ',');
      if (parts.size() != 2) fail(i, "interval needs two endpoints");
      for (auto& p : parts) p.offset += i + 1;
      const double lo = number(parts[0]), hi = number(parts[1]);
      if (!(lo <= hi)) fail(i, "interval endpoints out of order");
      axes.push_back({lo, hi});
      i = close + 1;
    }
    if (axes.empty() || axes.size() > kMaxDim) fail(0, "expected one to three intervals");
    return Box(std::span<const Interval>(axes));
  }

  /// "1/3; 0.5" in one dimension or "0, 0; 1, 1" in two.
  std::vector<Vec> points(std::size_t dim) const {
    std::vector<Vec> out;
    for (const auto& p : split_top(e_.value, ';')) {
      auto coords = split_top(p.text, ',');
      if (coords.size() != dim) fail(p.offset, "point needs " + std::to_string(dim) + " coordinate(s)");
      Vec x(dim);
      for (std::size_t k = 0; k < dim; ++k) x[k] = number({coords[k].text, p.offset + coords[k].offset});
      out.push_back(x);
    }
    if (out.empty()) fail(0, "no points");
    return out;
  }

  std::vector<Expr> exprs(std::span<const std::string> names) const {
    std::vector<Expr> out;
    for (const auto& p : split_top(e_.value, ',')) out.push_back(expr(p, names));
    return out;
  }

  /// "x > 1/3, x <= 2/3"; "everywhere" for no constraint.
  Region region(std::span<const std::string> names) const {
    if (e_.value == "everywhere") return Region::everywhere();
    std::vector<Constraint> cs;
    for (const auto& p : split_top(e_.value, ',')) {
      int depth = 0;
      std::size_t at = std::string::npos, len = 0;
      for (std::size_t i = 0; i < p.text.size() && at == std::string::npos; ++i) {
        const char c = p.text[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (depth == 0 && (c == '<' || c == '>' || c == '=')) {
          at = i;
          len = (i + 1 < p.text.size() && p.text[i + 1] == '=') ? 2 : 1;
        }
      }
      if (at == std::string::npos) fail(p.offset, "expected a comparison (<, <=, >, >=, ==)");
      const std::string op = p.text.substr(at, len);
      if (op == "=") fail(p.offset + at, "use '==' for equality");
      auto trim = [&](std::size_t a, std::size_t b) {
        while (a < b && std::isspace(static_cast<unsigned char>(p.text[a]))) ++a;
        while (b > a && std::isspace(static_cast<unsigned char>(p.text[b - 1]))) --b;
        return Slice{p.text.substr(a, b - a), p.offset + a};
      };
      const Expr lhs = expr(trim(0, at), names), rhs = expr(trim(at + len, p.text.size()), names);
      if (op == "<=") cs.push_back({lhs - rhs, false});
      else if (op == "<") cs.push_back({lhs - rhs, true});
      else if (op == ">=") cs.push_back({rhs - lhs, false});
      else if (op == ">") cs.push_back({rhs - lhs, true});
      else {
        cs.push_back({lhs - rhs, false});
        cs.push_back({rhs - lhs, false});
      }
    }
    return Region(std::move(cs));
  }

 private:
  const std::string& file_;
  const Entry& e_;
};

// ---------------------------------------------------------------------------
// Typed scenario.

enum class Kind { envelope, condition, degree, fixpoint, ode, reproduce };

inline const char* to_string(Kind k) {
  switch (k) {
    case Kind::envelope: return "envelope";
    case Kind::condition: return "condition";
    case Kind::degree: return "degree";
    case Kind::fixpoint: return "fixpoint";
    case Kind::ode: return "ode";
    case Kind::reproduce: return "reproduce-paper";
  }
  return "?";
}

struct Scenario {
  RawScenario raw;
  Kind kind = Kind::envelope;
  std::vector<std::string> vars;
  std::optional<PiecewiseMap> map;
  std::optional<PiecewiseMap> majorant;  ///< outputs (lower, upper)
  std::optional<IVProblem> ode;
  Section params;

  const Entry* param(std::string_view key) const { return params.find(key); }
  ValueParser parser(const Entry& e) const { return ValueParser(raw.file, e); }

  double number(std::string_view key, double fallback) const {
    const Entry* e = param(key);
    return e ? parser(*e).number() : fallback;
  }
  std::size_t count(std::string_view key, std::size_t fallback) const {
    const Entry* e = param(key);
    return e ? parser(*e).count() : fallback;
  }
  bool flag(std::string_view key, bool fallback) const {
    const Entry* e = param(key);
    return e ? parser(*e).boolean() : fallback;
  }
  std::string word(std::string_view key, std::string fallback) const {
    const Entry* e = param(key);
    return e ? e->value : fallback;
  }
  std::optional<Box> box(std::string_view key) const {
    const Entry* e = param(key);
    if (!e) return std::nullopt;
    return parser(*e).box();
  }
  [[noreturn]] void fail_at(const Entry& e, const std::string& msg) const { parser(e).fail(0, msg); }
  [[noreturn]] void fail_section(std::size_t line, const std::string& msg) const {
    throw ScenarioError(raw.file, line, 1, msg);
  }
};

namespace detail {

inline const std::map<Kind, std::set<std::string>>& allowed_params() {
  static const std::map<Kind, std::set<std::string>> m = {
      {Kind::envelope, {"points", "mode", "tol", "plot_samples"}},
      {Kind::condition, {"scan", "grid", "tol"}},
      {Kind::degree, {"omega", "split", "excise", "borsuk", "homotopy", "t_steps", "grid", "tol"}},
      {Kind::fixpoint, {"method", "omega", "min_width", "set", "r_max", "accept", "grid", "tol"}},
      {Kind::ode, {"a", "b", "xa", "M", "h_max", "tol", "picard", "picard_panels", "classify_t", "classify_y"}},
      {Kind::reproduce, {}},
  };
  return m;
}

inline const Entry& require(const Scenario& s, const Section& sec, std::string_view key) {
  const Entry* e = sec.find(key);
  if (!e) s.fail_section(sec.line, "[" + sec.name + "] needs '" + std::string(key) + "'");
  return *e;
}

inline void reject_unknown(const Scenario& s, const Section& sec, const std::set<std::string>& keys) {
  for (const auto& e : sec.entries)
    if (!keys.count(e.key)) throw ScenarioError(s.raw.file, e.line, 1, "unknown key '" + e.key + "' in [" + sec.name + "]");
}

}  // namespace detail

/// Parses and type-checks a scenario. Everything is anchored to file:line:col.
inline Scenario parse_scenario(RawScenario raw) {
  Scenario s;
  s.raw = std::move(raw);
  const std::string& file = s.raw.file;
  detail::reject_unknown(s, s.raw.top, {"kind"});
  const Entry* k = s.raw.top.find("kind");
  if (!k) throw ScenarioError(file, 1, 1, "missing top-level 'kind = ...'");
  static const std::map<std::string, Kind> kinds = {{"envelope", Kind::envelope}, {"condition", Kind::condition},
                                                    {"degree", Kind::degree},     {"fixpoint", Kind::fixpoint},
                                                    {"ode", Kind::ode},           {"reproduce-paper", Kind::reproduce}};
  auto it = kinds.find(k->value);
  if (it == kinds.end()) s.fail_at(*k, "unknown kind '" + k->value + "'");
  s.kind = it->second;

  const Section* map_sec = nullptr;
  std::vector<const Section*> pieces, curves, majorants;
  for (const auto& sec : s.raw.sections) {
    if (sec.name == "map") {
      if (map_sec) s.fail_section(sec.line, "duplicate [map]");
      map_sec = &sec;
    } else if (sec.name == "piece") {
      pieces.push_back(&sec);
    } else if (sec.name == "curve") {
      curves.push_back(&sec);
    } else if (sec.name == "majorant") {
      majorants.push_back(&sec);
    } else if (sec.name == "params") {
      if (!s.params.entries.empty()) s.fail_section(sec.line, "duplicate [params]");
      s.params = sec;
    }
  }
  detail::reject_unknown(s, s.params, detail::allowed_params().at(s.kind));

  if (s.kind == Kind::reproduce) {
    if (map_sec || !pieces.empty()) s.fail_section((map_sec ? map_sec : pieces.front())->line,
                                                   "reproduce-paper scenarios take no map");
    return s;
  }
  if (!map_sec) throw ScenarioError(file, 1, 1, "missing [map] section");
  detail::reject_unknown(s, *map_sec, {"vars", "domain"});
  s.vars = s.parser(detail::require(s, *map_sec, "vars")).names();
  const Entry& dom_e = detail::require(s, *map_sec, "domain");
  const Box domain = s.parser(dom_e).box();
  if (domain.dim() != s.vars.size()) s.fail_at(dom_e, "domain dimension differs from the number of vars");
  if (pieces.empty()) s.fail_section(map_sec->line, "no [piece] sections");

  std::vector<Piece> ps;
  std::optional<std::size_t> out_dim;
  for (const Section* sec : pieces) {
    detail::reject_unknown(s, *sec, {"where", "value"});
    Region region = Region::everywhere();
    if (const Entry* w = sec->find("where")) region = s.parser(*w).region(s.vars);
    const Entry& v = detail::require(s, *sec, "value");
    std::vector<Expr> value = s.parser(v).exprs(s.vars);
    if (out_dim && *out_dim != value.size()) s.fail_at(v, "pieces disagree on the number of outputs");
    out_dim = value.size();
    ps.push_back({std::move(region), std::move(value)});
  }
  s.map = PiecewiseMap(domain, *out_dim, std::move(ps));

  if (!majorants.empty()) {
    if (domain.dim() != 1) s.fail_section(majorants.front()->line, "[majorant] is supported for one variable only");
    std::vector<Piece> ms;
    for (const Section* sec : majorants) {
      detail::reject_unknown(s, *sec, {"where", "lower", "upper"});
      Region region = Region::everywhere();
      if (const Entry* w = sec->find("where")) region = s.parser(*w).region(s.vars);
      Expr lo = s.parser(detail::require(s, *sec, "lower")).expr(s.vars);
      Expr hi = s.parser(detail::require(s, *sec, "upper")).expr(s.vars);
      ms.push_back({std::move(region), {lo, hi}});
    }
    s.majorant = PiecewiseMap(domain, 2, std::move(ms));
  }

  if (s.kind == Kind::ode) {
    if (s.vars.size() != 2) s.fail_section(map_sec->line, "ode scenarios need vars = t x");
    if (*out_dim != 1) s.fail_section(pieces.front()->line, "ode right-hand side must be scalar");
    IVProblem p;
    p.f = *s.map;
    p.a = s.number("a", domain[0].lo);
    p.b = s.number("b", domain[0].hi);
    const Entry* xa = s.param("xa");
    if (!xa) s.fail_section(s.params.line ? s.params.line : 1, "[params] needs 'xa'");
    p.x_a = s.parser(*xa).number();
    const Entry* m = s.param("M");
    if (!m) s.fail_section(s.params.line ? s.params.line : 1, "[params] needs 'M' (bound of |f| in t)");
    const std::string tname[1] = {s.vars[0]};
    p.M = s.parser(*m).expr(tname);
    for (const Section* sec : curves) {
      detail::reject_unknown(s, *sec, {"name", "gamma", "dgamma", "on", "eps", "psi"});
      DiscontinuityCurve c;
      c.name = sec->find("name") ? sec->find("name")->value : "curve" + std::to_string(p.curves.size());
      c.gamma = s.parser(detail::require(s, *sec, "gamma")).expr(tname);
      c.dgamma = s.parser(detail::require(s, *sec, "dgamma")).expr(tname);
      if (const Entry* on = sec->find("on")) {
        const Box b = s.parser(*on).box();
        if (b.dim() != 1) s.fail_at(*on, "'on' is a single interval");
        c.c = b[0].lo;
        c.d = b[0].hi;
      } else {
        c.c = p.a;
        c.d = p.b;
      }
      if (const Entry* e = sec->find("eps")) c.eps = s.parser(*e).number();
      if (const Entry* e = sec->find("psi")) c.psi = s.parser(*e).number();
      p.curves.push_back(std::move(c));
    }
    try {
      p.validate();
    } catch (const Error& e) {
      s.fail_section(map_sec->line, e.what());
    }
    s.ode = std::move(p);
  } else if (!curves.empty()) {
    s.fail_section(curves.front()->line, "[curve] sections belong to ode scenarios");
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_argument, "cannot read scenario '" + path + "'");
  return parse_scenario(read_raw(in, path));
}

inline Scenario parse_scenario_text(const std::string& text, const std::string& name = "<text>") {
  std::istringstream in(text);
  return parse_scenario(read_raw(in, name));
}

}  // namespace ccdeg::cli

#endif  // CCDEG_CLI_SCENARIO_HPP
