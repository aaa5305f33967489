#pragma once

// Run configuration: INI-style sections, `key = value` lines, `#` or `;`
// comments. Expression values may be double-quoted. Unknown sections or keys
// are errors; validation failures name the offending `section.key`.
// canonical() prints every field in a fixed order, so parse(canonical()) is
// the identity and configs compare by canonical text.

#include "ucplab/core.hpp"
#include "ucplab/expr.hpp"
#include "ucplab/fields.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ucplab {

namespace cfgdetail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

struct IniFile {
  // section -> ordered (key, value)
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;

  static IniFile parse(std::istream& is) {
    IniFile ini;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw Error("config line " + std::to_string(lineno) + ": unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        ini.sections.push_back({section, {}});
        continue;
      }
      std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw Error("config line " + std::to_string(lineno) + ": expected key = value");
      if (section.empty())
        throw Error("config line " + std::to_string(lineno) + ": key outside any section");
      std::string key = trim(t.substr(0, eq));
      std::string val = trim(t.substr(eq + 1));
      ini.sections.back().second.push_back({key, val});
    }
    return ini;
  }
};

inline double to_double(const std::string& where, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(where + ": expected a number, got '" + v + "'");
  }
}

inline int to_int(const std::string& where, const std::string& v) {
  try {
    std::size_t used = 0;
    int d = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(where + ": expected an integer, got '" + v + "'");
  }
}

inline bool to_bool(const std::string& where, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(where + ": expected a boolean, got '" + v + "'");
}

inline std::vector<double> to_list(const std::string& where, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(where, item));
  }
  return out;
}

}  // namespace cfgdetail

struct RunConfig {
  // [domain]
  std::string domain_kind = "half_disk";  // half_disk | disk | graph
  double radius = 1.0;
  std::string phi = "0";
  double extent = 1.0;
  // [mesh]
  double h = 0.05;
  double grading = 1.0;
  // [coefficients]
  std::string a11 = "1", a12 = "0", a22 = "1";
  std::string b1 = "0", b2 = "0";
  std::string w1 = "0", w2 = "0";
  std::string v = "0";
  std::string eta = "0";
  double lam = 1.0, Lam = 1.0;
  double p = 3.0, q = 2.0, s = 2.0;
  // [boundary]
  std::string arc_dirichlet;
  std::string arc_neumann;
  bool use_eta = false;
  // [field]
  std::string field_mode = "fem";  // fem | analytic
  std::string field_expr;
  int field_dim = 2;
  // [analysis]
  double r_min = 0.01, r_max = 0.5;
  int r_count = 40;
  double cutoff = 12.0;
  std::vector<double> lambdas{0.4, 0.2, 0.1};
  int fit_degree = -1;
  double zero_window = 0.9;
  double zero_resolution = 1e-3;
  int plane_levels = 7;
  double gauge_split = 1.0;
  bool reflect = false;
  std::string solver = "direct";  // direct | iterative
  // [output]
  bool snapshots = true;
  bool svg = true;

  static RunConfig load(std::istream& is) {
    return from_ini(cfgdetail::IniFile::parse(is));
  }
  static RunConfig load_string(const std::string& text) {
    std::istringstream is(text);
    return load(is);
  }
  static RunConfig load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open config file '" + path + "'");
    return load(f);
  }

  static RunConfig from_ini(const cfgdetail::IniFile& ini) {
    using namespace cfgdetail;
    RunConfig c;
    for (const auto& [section, entries] : ini.sections) {
      for (const auto& [key, raw] : entries) {
        std::string where = section + "." + key;
        std::string val = unquote(raw);
        auto is = [&](const char* s, const char* k) { return section == s && key == k; };
        if (is("domain", "kind")) c.domain_kind = val;
        else if (is("domain", "radius")) c.radius = to_double(where, val);
        else if (is("domain", "phi")) c.phi = val;
        else if (is("domain", "extent")) c.extent = to_double(where, val);
        else if (is("mesh", "h")) c.h = to_double(where, val);
        else if (is("mesh", "grading")) c.grading = to_double(where, val);
        else if (is("coefficients", "a11")) c.a11 = val;
        else if (is("coefficients", "a12")) c.a12 = val;
        else if (is("coefficients", "a22")) c.a22 = val;
        else if (is("coefficients", "b1")) c.b1 = val;
        else if (is("coefficients", "b2")) c.b2 = val;
        else if (is("coefficients", "w1")) c.w1 = val;
        else if (is("coefficients", "w2")) c.w2 = val;
        else if (is("coefficients", "v")) c.v = val;
        else if (is("coefficients", "eta")) c.eta = val;
        else if (is("coefficients", "lambda")) c.lam = to_double(where, val);
        else if (is("coefficients", "Lambda")) c.Lam = to_double(where, val);
        else if (is("coefficients", "p")) c.p = to_double(where, val);
        else if (is("coefficients", "q")) c.q = to_double(where, val);
        else if (is("coefficients", "s")) c.s = to_double(where, val);
        else if (is("boundary", "arc_dirichlet")) c.arc_dirichlet = val;
        else if (is("boundary", "arc_neumann")) c.arc_neumann = val;
        else if (is("boundary", "use_eta")) c.use_eta = to_bool(where, val);
        else if (is("field", "mode")) c.field_mode = val;
        else if (is("field", "expr")) c.field_expr = val;
        else if (is("field", "dim")) c.field_dim = to_int(where, val);
        else if (is("analysis", "r_min")) c.r_min = to_double(where, val);
        else if (is("analysis", "r_max")) c.r_max = to_double(where, val);
        else if (is("analysis", "r_count")) c.r_count = to_int(where, val);
        else if (is("analysis", "cutoff")) c.cutoff = to_double(where, val);
        else if (is("analysis", "lambdas")) c.lambdas = to_list(where, val);
        else if (is("analysis", "fit_degree")) c.fit_degree = to_int(where, val);
        else if (is("analysis", "zero_window")) c.zero_window = to_double(where, val);
        else if (is("analysis", "zero_resolution")) c.zero_resolution = to_double(where, val);
        else if (is("analysis", "plane_levels")) c.plane_levels = to_int(where, val);
        else if (is("analysis", "gauge_split")) c.gauge_split = to_double(where, val);
        else if (is("analysis", "reflect")) c.reflect = to_bool(where, val);
        else if (is("analysis", "solver")) c.solver = val;
        else if (is("output", "snapshots")) c.snapshots = to_bool(where, val);
        else if (is("output", "svg")) c.svg = to_bool(where, val);
        else throw Error("config: unknown key '" + where + "'");
      }
    }
    c.validate();
    return c;
  }

  void validate() const {
    auto fail = [](const std::string& where, const std::string& msg) {
      throw Error(where + ": " + msg);
    };
    if (domain_kind != "half_disk" && domain_kind != "disk" && domain_kind != "graph")
      fail("domain.kind", "must be half_disk, disk or graph");
    if (!(radius > 0.0)) fail("domain.radius", "must be positive");
    if (!(extent > 0.0)) fail("domain.extent", "must be positive");
    if (!(h > 0.0)) fail("mesh.h", "must be positive");
    if (domain_kind != "graph" && h >= radius) fail("mesh.h", "must be smaller than the radius");
    if (grading < 1.0 || grading > 4.0) fail("mesh.grading", "must lie in [1, 4]");
    if (!(lam > 0.0) || !(Lam >= lam)) fail("coefficients.lambda", "need 0 < lambda <= Lambda");
    const int d = field_mode == "analytic" ? field_dim : 2;
    Integrability integ{p, q, s};
    try {
      integ.validate(d);
    } catch (const Error& e) {
      fail("coefficients.p", std::string("exponents rejected: ") + e.what());
    }
    if (field_mode != "fem" && field_mode != "analytic")
      fail("field.mode", "must be fem or analytic");
    if (field_dim != 2 && field_dim != 3) fail("field.dim", "must be 2 or 3");
    if (field_dim == 3 && field_mode != "analytic")
      fail("field.dim", "dimension 3 requires analytic mode");
    if (field_mode == "analytic" && field_expr.empty())
      fail("field.expr", "analytic mode needs an expression");
    if (!(r_min > 0.0) || !(r_max > r_min)) fail("analysis.r_min", "need 0 < r_min < r_max");
    if (r_max > 0.5) fail("analysis.r_max", "doubling requires r_max <= 0.5 (relative)");
    if (r_count < 8) fail("analysis.r_count", "need at least 8 radii");
    if (lambdas.size() < 2) fail("analysis.lambdas", "need at least two scales");
    for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
      if (!(lambdas[i] > lambdas[i + 1]))
        fail("analysis.lambdas", "scales must decrease strictly");
    if (!(lambdas.front() <= 0.5) || !(lambdas.back() > 0.0))
      fail("analysis.lambdas", "scales must lie in (0, 0.5]");
    if (!(zero_window > 0.0) || zero_window >= 1.0)
      fail("analysis.zero_window", "must lie in (0, 1)");
    if (!(zero_resolution > 0.0) || zero_resolution > zero_window / 8.0)
      fail("analysis.zero_resolution", "too coarse for the window");
    if (plane_levels < 4) fail("analysis.plane_levels", "need at least 4 scales");
    if (!(gauge_split > 0.0)) fail("analysis.gauge_split", "must be positive");
    if (solver != "direct" && solver != "iterative")
      fail("analysis.solver", "must be direct or iterative");
    // expressions must parse
    auto check_expr = [&fail](const std::string& where, const std::string& src) {
      if (src.empty()) return;
      try {
        Expr::parse(src);
      } catch (const Error& e) {
        fail(where, e.what());
      }
    };
    check_expr("domain.phi", phi);
    check_expr("coefficients.a11", a11);
    check_expr("coefficients.a12", a12);
    check_expr("coefficients.a22", a22);
    check_expr("coefficients.b1", b1);
    check_expr("coefficients.b2", b2);
    check_expr("coefficients.w1", w1);
    check_expr("coefficients.w2", w2);
    check_expr("coefficients.v", v);
    check_expr("coefficients.eta", eta);
    check_expr("boundary.arc_dirichlet", arc_dirichlet);
    check_expr("boundary.arc_neumann", arc_neumann);
    check_expr("field.expr", field_expr);
  }

  CoefficientSet coefficients() const {
    CoefficientSet c;
    Expr e11 = Expr::parse(a11), e12 = Expr::parse(a12), e22 = Expr::parse(a22);
    Expr eb1 = Expr::parse(b1), eb2 = Expr::parse(b2);
    Expr ew1 = Expr::parse(w1), ew2 = Expr::parse(w2);
    Expr ev = Expr::parse(v), eeta = Expr::parse(eta);
    c.A = [e11, e12, e22](const Vec2& p) {
      Mat2 a;
      double off = e12(p);
      a << e11(p), off, off, e22(p);
      return a;
    };
    c.b = [eb1, eb2](const Vec2& p) { return Vec2(eb1(p), eb2(p)); };
    c.W = [ew1, ew2](const Vec2& p) { return Vec2(ew1(p), ew2(p)); };
    c.V = [ev](const Vec2& p) { return ev(p); };
    c.eta = [eeta](const Vec2& p) { return eeta(p); };
    c.has_eta = use_eta;
    c.ell = {lam, Lam};
    c.integ = {p, q, s};
    return c;
  }

  std::string canonical() const {
    std::ostringstream os;
    os.precision(17);
    auto list = [](const std::vector<double>& v) {
      std::ostringstream ls;
      ls.precision(17);
      for (std::size_t i = 0; i < v.size(); ++i) ls << (i ? ", " : "") << v[i];
      return ls.str();
    };
    os << "[domain]\n"
       << "kind = " << domain_kind << "\n"
       << "radius = " << radius << "\n"
       << "phi = \"" << phi << "\"\n"
       << "extent = " << extent << "\n\n";
    os << "[mesh]\n"
       << "h = " << h << "\n"
       << "grading = " << grading << "\n\n";
    os << "[coefficients]\n"
       << "a11 = \"" << a11 << "\"\n"
       << "a12 = \"" << a12 << "\"\n"
       << "a22 = \"" << a22 << "\"\n"
       << "b1 = \"" << b1 << "\"\n"
       << "b2 = \"" << b2 << "\"\n"
       << "w1 = \"" << w1 << "\"\n"
       << "w2 = \"" << w2 << "\"\n"
       << "v = \"" << v << "\"\n"
       << "eta = \"" << eta << "\"\n"
       << "lambda = " << lam << "\n"
       << "Lambda = " << Lam << "\n"
       << "p = " << p << "\n"
       << "q = " << q << "\n"
       << "s = " << s << "\n\n";
    os << "[boundary]\n"
       << "arc_dirichlet = \"" << arc_dirichlet << "\"\n"
       << "arc_neumann = \"" << arc_neumann << "\"\n"
       << "use_eta = " << (use_eta ? "true" : "false") << "\n\n";
    os << "[field]\n"
       << "mode = " << field_mode << "\n"
       << "expr = \"" << field_expr << "\"\n"
       << "dim = " << field_dim << "\n\n";
    os << "[analysis]\n"
       << "r_min = " << r_min << "\n"
       << "r_max = " << r_max << "\n"
       << "r_count = " << r_count << "\n"
       << "cutoff = " << cutoff << "\n"
       << "lambdas = " << list(lambdas) << "\n"
       << "fit_degree = " << fit_degree << "\n"
       << "zero_window = " << zero_window << "\n"
       << "zero_resolution = " << zero_resolution << "\n"
       << "plane_levels = " << plane_levels << "\n"
       << "gauge_split = " << gauge_split << "\n"
       << "reflect = " << (reflect ? "true" : "false") << "\n"
       << "solver = " << solver << "\n\n";
    os << "[output]\n"
       << "snapshots = " << (snapshots ? "true" : "false") << "\n"
       << "svg = " << (svg ? "true" : "false") << "\n";
    return os.str();
  }

  bool operator==(const RunConfig& o) const { return canonical() == o.canonical(); }
};

}  // namespace ucplab
