#include "ucplab/config.hpp"
#include "ucplab/presets.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace ucplab;

namespace {

// Load must throw an Error whose message contains `needle`.
void expect_load_error(const std::string& text, const std::string& needle) {
  try {
    RunConfig::load_string(text);
    FAIL() << "expected rejection of:\n" << text;
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos)
        << "message '" << e.what() << "' lacks '" << needle << "'";
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  EXPECT_TRUE(f.good()) << p;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, Defaults) {
  RunConfig c;
  EXPECT_EQ(c.domain_kind, "half_disk");
  EXPECT_DOUBLE_EQ(c.radius, 1.0);
  EXPECT_EQ(c.phi, "0");
  EXPECT_DOUBLE_EQ(c.h, 0.05);
  EXPECT_DOUBLE_EQ(c.grading, 1.0);
  EXPECT_EQ(c.a11, "1");
  EXPECT_EQ(c.a12, "0");
  EXPECT_EQ(c.eta, "0");
  EXPECT_DOUBLE_EQ(c.p, 3.0);
  EXPECT_DOUBLE_EQ(c.q, 2.0);
  EXPECT_DOUBLE_EQ(c.s, 2.0);
  EXPECT_FALSE(c.use_eta);
  EXPECT_EQ(c.field_mode, "fem");
  EXPECT_EQ(c.field_dim, 2);
  EXPECT_EQ(c.r_count, 40);
  EXPECT_EQ(c.lambdas, (std::vector<double>{0.4, 0.2, 0.1}));
  EXPECT_EQ(c.fit_degree, -1);
  EXPECT_EQ(c.solver, "direct");
  EXPECT_TRUE(c.snapshots);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, EveryKeyParses) {
  const char* text = R"(
[domain]
kind = graph
radius = 2.5
phi = "0.1*x^2"
extent = 1.5

[mesh]
h = 0.07
grading = 2.5

[coefficients]
a11 = 1+x^2
a12 = "x*y"
a22 = 2
b1 = x
b2 = y
w1 = -y
w2 = x
v = sin(x)
eta = -abs(x)^(-0.25)
lambda = 0.5
Lambda = 4
p = 3.5
q = 2.5
s = 2.5

[boundary]
arc_dirichlet = exp(y)*cos(x)
arc_neumann = ""
use_eta = yes

[field]
mode = fem
expr = ""
dim = 2

[analysis]
r_min = 0.02
r_max = 0.45
r_count = 24
cutoff = 10
lambdas = 0.4, 0.25, 0.125
fit_degree = 3
zero_window = 0.8
zero_resolution = 0.005
plane_levels = 5
gauge_split = 0.5
reflect = true
solver = iterative

[output]
snapshots = false
svg = no
)";
  RunConfig c = RunConfig::load_string(text);
  EXPECT_EQ(c.domain_kind, "graph");
  EXPECT_DOUBLE_EQ(c.radius, 2.5);
  EXPECT_EQ(c.phi, "0.1*x^2");
  EXPECT_DOUBLE_EQ(c.extent, 1.5);
  EXPECT_DOUBLE_EQ(c.h, 0.07);
  EXPECT_DOUBLE_EQ(c.grading, 2.5);
  EXPECT_EQ(c.a11, "1+x^2");
  EXPECT_EQ(c.a12, "x*y");  // quotes stripped
  EXPECT_EQ(c.a22, "2");
  EXPECT_EQ(c.b1, "x");
  EXPECT_EQ(c.w2, "x");
  EXPECT_EQ(c.v, "sin(x)");
  EXPECT_EQ(c.eta, "-abs(x)^(-0.25)");
  EXPECT_DOUBLE_EQ(c.lam, 0.5);
  EXPECT_DOUBLE_EQ(c.Lam, 4.0);
  EXPECT_DOUBLE_EQ(c.p, 3.5);
  EXPECT_EQ(c.arc_dirichlet, "exp(y)*cos(x)");
  EXPECT_EQ(c.arc_neumann, "");
  EXPECT_TRUE(c.use_eta);
  EXPECT_EQ(c.r_count, 24);
  EXPECT_EQ(c.lambdas, (std::vector<double>{0.4, 0.25, 0.125}));
  EXPECT_EQ(c.fit_degree, 3);
  EXPECT_DOUBLE_EQ(c.zero_window, 0.8);
  EXPECT_EQ(c.plane_levels, 5);
  EXPECT_DOUBLE_EQ(c.gauge_split, 0.5);
  EXPECT_TRUE(c.reflect);
  EXPECT_EQ(c.solver, "iterative");
  EXPECT_FALSE(c.snapshots);
  EXPECT_FALSE(c.svg);
}

TEST(Config, CanonicalRoundTrip) {
  RunConfig c;
  c.domain_kind = "graph";
  c.phi = "0.1*x^2";
  c.extent = 0.75;
  c.h = 0.03;
  c.grading = 1.5;
  c.a12 = "x/8";
  c.eta = "-1";
  c.use_eta = true;
  c.arc_dirichlet = "exp(y)*cos(x)";
  c.lambdas = {0.5, 0.25, 0.125, 0.0625};
  c.r_count = 17;
  c.reflect = true;
  c.solver = "iterative";
  c.svg = false;

  RunConfig back = RunConfig::load_string(c.canonical());
  EXPECT_TRUE(back == c) << "canonical text:\n" << c.canonical();
  // the canonical form itself is a fixed point
  EXPECT_EQ(back.canonical(), c.canonical());
}

TEST(Config, CommentsAndBlankLines) {
  RunConfig c = RunConfig::load_string(
      "# leading comment\n"
      "\n"
      "[mesh]\n"
      "; alt comment style\n"
      "h = 0.1   \n"
      "\n");
  EXPECT_DOUBLE_EQ(c.h, 0.1);
}

TEST(Config, SyntaxErrors) {
  expect_load_error("[domain\nkind = disk\n", "unterminated section");
  expect_load_error("h = 0.1\n", "outside any section");
  expect_load_error("[mesh]\nh 0.1\n", "expected key = value");
  expect_load_error("[mesh]\nh = fast\n", "expected a number");
  expect_load_error("[analysis]\nr_count = 4.5\n", "expected an integer");
  expect_load_error("[boundary]\nuse_eta = maybe\n", "expected a boolean");
  expect_load_error("[domain]\nbogus = 1\n", "unknown key 'domain.bogus'");
  expect_load_error("[orbit]\nkind = disk\n", "unknown key 'orbit.kind'");
  // line numbers point at the offender
  expect_load_error("[mesh]\nh = 0.01\n[oops\n", "line 3");
}

TEST(Config, ValidateRejects) {
  expect_load_error("[domain]\nkind = torus\n", "domain.kind");
  expect_load_error("[domain]\nradius = 0\n", "domain.radius");
  expect_load_error("[domain]\nradius = 1\n[mesh]\nh = 1\n", "mesh.h");
  expect_load_error("[mesh]\ngrading = 5\n", "mesh.grading");
  expect_load_error("[coefficients]\nlambda = 2\nLambda = 1\n", "coefficients.lambda");
  // default p = 3 fails p > d once the field is three-dimensional
  expect_load_error("[field]\nmode = analytic\nexpr = x\ndim = 3\n", "exponents rejected");
  expect_load_error("[coefficients]\ns = 0.5\n", "exponents rejected");
  expect_load_error("[field]\nmode = magic\n", "field.mode");
  expect_load_error("[field]\ndim = 4\n", "field.dim");
  expect_load_error("[field]\ndim = 3\n", "requires analytic");
  expect_load_error("[field]\nmode = analytic\n", "field.expr");
  expect_load_error("[analysis]\nr_min = 0.4\nr_max = 0.2\n", "analysis.r_min");
  expect_load_error("[analysis]\nr_max = 0.6\n", "analysis.r_max");
  expect_load_error("[analysis]\nr_count = 5\n", "analysis.r_count");
  expect_load_error("[analysis]\nlambdas = 0.4\n", "analysis.lambdas");
  expect_load_error("[analysis]\nlambdas = 0.2, 0.3\n", "decrease strictly");
  expect_load_error("[analysis]\nlambdas = 0.9, 0.4\n", "(0, 0.5]");
  expect_load_error("[analysis]\nzero_window = 1.5\n", "analysis.zero_window");
  expect_load_error("[analysis]\nzero_resolution = 0.5\n", "analysis.zero_resolution");
  expect_load_error("[analysis]\nplane_levels = 3\n", "analysis.plane_levels");
  expect_load_error("[analysis]\ngauge_split = 0\n", "analysis.gauge_split");
  expect_load_error("[analysis]\nsolver = quantum\n", "analysis.solver");
  // expression errors carry the section.key context
  expect_load_error("[coefficients]\nv = 1+*2\n", "coefficients.v");
  expect_load_error("[domain]\nphi = sn(x)\n", "domain.phi");
}

TEST(Config, LoadFileMissing) {
  EXPECT_THROW(RunConfig::load_file("/nonexistent/path.ini"), Error);
}

TEST(Config, CoefficientBuilder) {
  RunConfig rc = RunConfig::load_string(
      "[coefficients]\n"
      "a11 = 1+y\na12 = x*y\na22 = 2\n"
      "b1 = x\nb2 = -y\nw1 = y\nw2 = x\nv = x+y\neta = -2\n"
      "lambda = 0.5\nLambda = 5\n"
      "[boundary]\nuse_eta = true\n");
  CoefficientSet c = rc.coefficients();
  Vec2 pt(0.5, 0.25);
  Mat2 A = c.A(pt);
  EXPECT_DOUBLE_EQ(A(0, 0), 1.25);
  EXPECT_DOUBLE_EQ(A(0, 1), 0.125);
  EXPECT_DOUBLE_EQ(A(1, 0), 0.125);
  EXPECT_DOUBLE_EQ(A(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(c.b(pt).x(), 0.5);
  EXPECT_DOUBLE_EQ(c.b(pt).y(), -0.25);
  EXPECT_DOUBLE_EQ(c.W(pt).x(), 0.25);
  EXPECT_DOUBLE_EQ(c.V(pt), 0.75);
  EXPECT_DOUBLE_EQ(c.eta(pt), -2.0);
  EXPECT_TRUE(c.has_eta);
  EXPECT_DOUBLE_EQ(c.ell.lo, 0.5);
  EXPECT_DOUBLE_EQ(c.integ.p, 3.0);
}

TEST(Presets, AllLoadAndValidate) {
  const auto names = preset_names();
  EXPECT_EQ(names.size(), 18u);
  for (const auto& name : names) {
    SCOPED_TRACE(name);
    RunConfig c;
    EXPECT_NO_THROW(c = preset_config(name));
    // every preset survives a canonical round trip as well
    EXPECT_TRUE(RunConfig::load_string(c.canonical()) == c);
  }
  EXPECT_THROW(preset_config("no_such_preset"), Error);

  RunConfig vm2 = preset_config("vanish_m2");
  EXPECT_EQ(vm2.arc_dirichlet, "x^2-y^2");
  EXPECT_DOUBLE_EQ(vm2.grading, 2.0);

  RunConfig np = preset_config("nodal_point");
  EXPECT_EQ(np.field_dim, 3);
  EXPECT_GT(np.p, 3.0);  // d = 3 needs p > 3
}

// configs/ must mirror the registry byte for byte; regenerate the files when
// a preset changes instead of letting them drift.
TEST(Presets, ConfigsDirectoryInSync) {
  namespace fs = std::filesystem;
  fs::path dir = fs::path(UCPLAB_SOURCE_DIR) / "configs";
  ASSERT_TRUE(fs::is_directory(dir)) << dir;

  std::size_t found = 0;
  for (const auto& [name, text] : preset_registry()) {
    fs::path file = dir / (name + ".ini");
    ASSERT_TRUE(fs::is_regular_file(file)) << file;
    EXPECT_EQ(slurp(file), text) << name << ".ini drifted from the registry";
    ++found;
  }
  // and nothing extra lives there
  std::size_t on_disk = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".ini") ++on_disk;
  EXPECT_EQ(on_disk, found);
}
