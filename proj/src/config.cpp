#include "mmcurv/config.hpp"

#include "mmcurv/errors.hpp"
#include "mmcurv/expr.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

namespace mmcurv {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void fail_at(const std::string& source, int line,
                          const std::string& what) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& source, const IniEntry& e) {
  try {
    return Expression::parse(e.value, {}).eval({});
  } catch (const ConfigError& err) {
    fail_at(source, e.line, "key '" + e.key + "': " + err.what());
  }
}

long long parse_integer(const std::string& source, const IniEntry& e) {
  const double v = parse_number(source, e);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    fail_at(source, e.line, "key '" + e.key + "' must be an integer");
  }
  return static_cast<long long>(v);
}

bool parse_bool(const std::string& source, int line, const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  fail_at(source, line, "expected a boolean, got '" + v + "'");
}

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const IniEntry* IniSection::find(const std::string& key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const IniSection* IniFile::section(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

IniFile parse_ini(std::string_view text, const std::string& source) {
  IniFile ini;
  ini.source = source;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  IniSection* current = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_at(source, line, "unterminated section header");
      const std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
      if (name.empty()) fail_at(source, line, "empty section name");
      if (ini.section(name)) fail_at(source, line, "duplicate section [" + name + "]");
      ini.sections.push_back({name, line, {}});
      current = &ini.sections.back();
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_at(source, line, "expected key = value");
    if (!current) fail_at(source, line, "key outside of any section");
    IniEntry e{trim(std::string_view(s).substr(0, eq)),
               trim(std::string_view(s).substr(eq + 1)), line};
    if (e.key.empty()) fail_at(source, line, "empty key");
    if (current->find(e.key)) fail_at(source, line, "duplicate key '" + e.key + "'");
    current->entries.push_back(std::move(e));
  }
  return ini;
}

IniFile load_ini(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_ini(ss.str(), path);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "human") return OutputFormat::Human;
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw ConfigError("unknown output format '" + name +
                    "' (expected human, json or csv)");
}

void apply_config(RunConfig& rc, const IniFile& ini) {
  const std::string& src = ini.source;
  for (const auto& sec : ini.sections) {
    if (sec.name == "example") {
      rc.example_section = sec;
      rc.config_source = src;
      const IniEntry* id = sec.find("id");
      if (!id) fail_at(src, sec.line, "[example] needs an id");
      rc.example = id->value;
      if (rc.example != "custom") {
        for (const auto& e : sec.entries) {
          if (e.key == "id") continue;
          rc.params[e.key] = parse_number(src, e);
        }
      }
    } else if (sec.name == "differentiation") {
      for (const auto& e : sec.entries) {
        if (e.key == "step") {
          rc.diff.step = parse_number(src, e);
        } else if (e.key == "nested_step") {
          rc.diff.nested_step = parse_number(src, e);
        } else if (e.key == "stencil_order") {
          rc.diff.stencil_order = static_cast<int>(parse_integer(src, e));
        } else {
          fail_at(src, e.line, "unknown key '" + e.key + "' in [differentiation]");
        }
      }
      try {
        rc.diff.validate();
      } catch (const ParameterError& err) {
        fail_at(src, sec.line, err.what());
      }
    } else if (sec.name == "quadrature") {
      for (const auto& e : sec.entries) {
        if (e.key == "grid") {
          const long long g = parse_integer(src, e);
          if (g < 4) fail_at(src, e.line, "grid must be at least 4");
          rc.grid = static_cast<int>(g);
        } else {
          fail_at(src, e.line, "unknown key '" + e.key + "' in [quadrature]");
        }
      }
    } else if (sec.name == "output") {
      for (const auto& e : sec.entries) {
        if (e.key == "format") {
          try {
            rc.format = parse_format(e.value);
          } catch (const ConfigError& err) {
            fail_at(src, e.line, err.what());
          }
        } else if (e.key == "out") {
          rc.out_path = e.value;
        } else if (e.key == "points") {
          const long long n = parse_integer(src, e);
          if (n < 1) fail_at(src, e.line, "points must be positive");
          rc.points = static_cast<std::size_t>(n);
        } else if (e.key == "base_points") {
          const long long n = parse_integer(src, e);
          if (n < 1) fail_at(src, e.line, "base_points must be positive");
          rc.base_points = static_cast<std::size_t>(n);
        } else if (e.key == "seed") {
          const long long n = parse_integer(src, e);
          if (n < 0) fail_at(src, e.line, "seed must be non-negative");
          rc.seed = static_cast<std::uint64_t>(n);
        } else if (e.key == "tol") {
          const double t = parse_number(src, e);
          if (!(t > 0)) fail_at(src, e.line, "tol must be positive");
          rc.tolerance = t;
        } else if (e.key == "q") {
          rc.q = parse_number(src, e);
        } else {
          fail_at(src, e.line, "unknown key '" + e.key + "' in [output]");
        }
      }
    } else {
      fail_at(src, sec.line, "unknown section [" + sec.name + "]");
    }
  }
}

namespace {

// Reads the keys of a custom example and tracks which were consumed.
class SectionReader {
 public:
  SectionReader(const IniSection& sec, std::string source)
      : sec_(sec), source_(std::move(source)) {}

  const IniEntry* get(const std::string& key) {
    const IniEntry* e = sec_.find(key);
    if (e) used_.insert(key);
    return e;
  }
  const IniEntry& require(const std::string& key) {
    const IniEntry* e = get(key);
    if (!e) fail_at(source_, sec_.line, "[example] is missing key '" + key + "'");
    return *e;
  }
  void finish() const {
    for (const auto& e : sec_.entries) {
      if (!used_.count(e.key)) {
        fail_at(source_, e.line, "unknown key '" + e.key + "' in [example]");
      }
    }
  }
  [[noreturn]] void fail(const IniEntry& e, const std::string& what) const {
    fail_at(source_, e.line, what);
  }
  const std::string& source() const { return source_; }

 private:
  const IniSection& sec_;
  std::string source_;
  std::set<std::string> used_;
};

Expression compile(SectionReader& r, const IniEntry& e,
                   const std::vector<std::string>& vars, const Params& params) {
  try {
    return Expression::parse(e.value, vars, params);
  } catch (const ConfigError& err) {
    r.fail(e, "key '" + e.key + "': " + err.what());
  }
}

struct AxisSpec {
  std::vector<std::string> names;
  std::vector<Interval> bounds;
  std::vector<bool> periodic;
};

AxisSpec read_axes(SectionReader& r, const std::string& prefix,
                   const Params& params, bool force_periodic) {
  AxisSpec a;
  const IniEntry& coords = r.require(prefix + "coords");
  a.names = split_list(coords.value);
  if (a.names.empty()) r.fail(coords, "no coordinates listed");
  const IniEntry& lo = r.require(prefix + "lower");
  const IniEntry& hi = r.require(prefix + "upper");
  const auto los = split_list(lo.value);
  const auto his = split_list(hi.value);
  if (los.size() != a.names.size() || his.size() != a.names.size()) {
    r.fail(coords, "bounds do not match the number of coordinates");
  }
  for (std::size_t i = 0; i < a.names.size(); ++i) {
    IniEntry el{lo.key, los[i], lo.line};
    IniEntry eh{hi.key, his[i], hi.line};
    a.bounds.push_back({compile(r, el, {}, params).eval({}),
                        compile(r, eh, {}, params).eval({})});
    if (!(a.bounds.back().hi > a.bounds.back().lo)) {
      r.fail(lo, "axis " + a.names[i] + " has empty interval");
    }
  }
  a.periodic.assign(a.names.size(), force_periodic);
  if (const IniEntry* p = r.get(prefix + "periodic")) {
    const auto flags = split_list(p->value);
    if (flags.size() != a.names.size()) {
      r.fail(*p, "periodic flags do not match the number of coordinates");
    }
    for (std::size_t i = 0; i < flags.size(); ++i) {
      const bool v = parse_bool(r.source(), p->line, flags[i]);
      if (force_periodic && !v) r.fail(*p, "fiber axes must be periodic");
      a.periodic[i] = v;
    }
  }
  return a;
}

// Symmetric matrix of expressions from keys prefix.i.j (0-based, i <= j or
// j <= i); missing off-diagonal entries are zero.
std::vector<std::vector<std::shared_ptr<Expression>>> read_matrix(
    SectionReader& r, const std::string& prefix, int rows, int cols,
    bool symmetric, const std::vector<std::string>& vars, const Params& params) {
  std::vector<std::vector<std::shared_ptr<Expression>>> m(
      rows, std::vector<std::shared_ptr<Expression>>(cols));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const std::string key =
          prefix + "." + std::to_string(i) + "." + std::to_string(j);
      const IniEntry* e = r.get(key);
      if (!e) continue;
      if (symmetric && m[i][j]) {
        r.fail(*e, "entry " + key + " given twice (matrix is symmetric)");
      }
      auto ex = std::make_shared<Expression>(compile(r, *e, vars, params));
      m[i][j] = ex;
      if (symmetric) m[j][i] = ex;
    }
  }
  if (symmetric) {
    for (int i = 0; i < rows; ++i) {
      if (!m[i][i]) {
        r.require(prefix + "." + std::to_string(i) + "." + std::to_string(i));
      }
    }
  }
  return m;
}

MatrixFn matrix_fn(std::vector<std::vector<std::shared_ptr<Expression>>> m,
                   int rows, int cols) {
  return [m = std::move(m), rows, cols](const Point& p) {
    Matrix out = Matrix::Zero(rows, cols);
    const std::span<const double> vars(p.data(), static_cast<std::size_t>(p.size()));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (m[i][j]) out(i, j) = m[i][j]->eval(vars);
    return out;
  };
}

std::vector<Interval> sample_region_from(SectionReader& r, const AxisSpec& a,
                                         const Params& params) {
  std::vector<Interval> region;
  for (std::size_t i = 0; i < a.names.size(); ++i) {
    const Interval& b = a.bounds[i];
    const double inset = a.periodic[i] ? 0.0 : 0.1 * b.length();
    region.push_back({b.lo + inset, b.hi - inset});
  }
  const IniEntry* lo = r.get("sample_lower");
  const IniEntry* hi = r.get("sample_upper");
  if (lo || hi) {
    if (!lo || !hi) r.fail(lo ? *lo : *hi, "sample_lower and sample_upper go together");
    const auto los = split_list(lo->value);
    const auto his = split_list(hi->value);
    if (los.size() != a.names.size() || his.size() != a.names.size()) {
      r.fail(*lo, "sample bounds do not match the number of coordinates");
    }
    for (std::size_t i = 0; i < los.size(); ++i) {
      region[i] = {compile(r, {lo->key, los[i], lo->line}, {}, params).eval({}),
                   compile(r, {hi->key, his[i], hi->line}, {}, params).eval({})};
    }
  }
  return region;
}

}  // namespace

CatalogObject build_custom(const IniSection& section, const Params& overrides,
                           const std::string& source) {
  SectionReader r(section, source);
  r.require("id");
  Params params;
  for (const auto& e : section.entries) {
    if (e.key.rfind("param.", 0) == 0) {
      r.get(e.key);
      try {
        params[e.key.substr(6)] = Expression::parse(e.value, {}, params).eval({});
      } catch (const ConfigError& err) {
        r.fail(e, err.what());
      }
    }
  }
  for (const auto& [k, v] : overrides) {
    if (!params.count(k)) {
      throw ConfigError("custom example has no parameter named " + k);
    }
    params[k] = v;
  }
  const IniEntry& kind = r.require("kind");

  CatalogObject o;
  o.id = "custom";
  o.params = params;
  if (kind.value == "manifold" || kind.value == "weighted") {
    const AxisSpec ax = read_axes(r, "", params, false);
    const int n = static_cast<int>(ax.names.size());
    const ChartDomain dom(ax.bounds, ax.periodic, ax.names);
    auto g = read_matrix(r, "g", n, n, true, ax.names, params);
    MetricField metric(dom, matrix_fn(std::move(g), n, n));
    DensityField phi = DensityField::unit(dom);
    if (const IniEntry* e = r.get("phi")) {
      auto ex = std::make_shared<Expression>(compile(r, *e, ax.names, params));
      if (!(ex->is_constant() && ex->eval({}) == 1.0)) {
        phi = DensityField(dom, [ex](const Point& p) {
          return ex->eval({p.data(), static_cast<std::size_t>(p.size())});
        });
      }
    }
    o.kind = phi.is_unit() ? CatalogKind::Manifold : CatalogKind::Weighted;
    o.manifold = WeightedManifold{std::move(metric), std::move(phi)};
    o.sample_region = sample_region_from(r, ax, params);
  } else if (kind.value == "submersion") {
    const AxisSpec base = read_axes(r, "base_", params, false);
    const AxisSpec fiber = read_axes(r, "fiber_", params, true);
    const int n = static_cast<int>(base.names.size());
    const int q = static_cast<int>(fiber.names.size());
    std::vector<std::string> all = base.names;
    all.insert(all.end(), fiber.names.begin(), fiber.names.end());
    auto gb = read_matrix(r, "gB", n, n, true, base.names, params);
    auto gf = read_matrix(r, "gF", q, q, true, all, params);
    auto conn = read_matrix(r, "A", q, n, false, all, params);
    ScalarFn phi = nullptr;
    if (const IniEntry* e = r.get("phi")) {
      auto ex = std::make_shared<Expression>(compile(r, *e, all, params));
      if (!(ex->is_constant() && ex->eval({}) == 1.0)) {
        phi = [ex](const Point& p) {
          return ex->eval({p.data(), static_cast<std::size_t>(p.size())});
        };
      }
    }
    o.kind = CatalogKind::Submersion;
    o.submersion = KKSubmersion(
        ChartDomain(base.bounds, base.periodic, base.names),
        ChartDomain(fiber.bounds, fiber.periodic, fiber.names),
        matrix_fn(std::move(gb), n, n), matrix_fn(std::move(gf), q, q),
        matrix_fn(std::move(conn), q, n), phi);
    o.sample_region = sample_region_from(r, base, params);
  } else {
    r.fail(kind, "kind must be manifold, weighted or submersion");
  }
  if (const IniEntry* e = r.get("expect_hypothesis_failure")) {
    o.expect_hypothesis_failure = parse_bool(source, e->line, e->value);
  }
  r.finish();
  return o;
}

CatalogObject build_example(const RunConfig& rc) {
  if (rc.example.empty()) throw ConfigError("no example selected (--example)");
  if (rc.example == "custom") {
    if (rc.example_section.entries.empty()) {
      throw ConfigError("example 'custom' needs a config file with [example]");
    }
    return build_custom(rc.example_section, rc.params, rc.config_source);
  }
  return build(rc.example, rc.params);
}

}  // namespace mmcurv
