#pragma once

// End-to-end runs behind the CLI subcommands. Each run returns a Report:
// summary.json values, output files, and named pass/fail gates. The exit
// status of the CLI is derived from the gates alone.
//
// Stage order for FEM-backed analyses:
//   solve -> gauge (if eta in play) -> flatten (graph domains)
//         -> normalize (if A(0) != I) -> analysis.

#include "ucplab/asymptotics.hpp"
#include "ucplab/assemble.hpp"
#include "ucplab/config.hpp"
#include "ucplab/frequency.hpp"
#include "ucplab/mesh.hpp"
#include "ucplab/report.hpp"
#include "ucplab/transforms.hpp"

#include <memory>
#include <sstream>

namespace ucplab {

namespace pipedetail {

inline std::shared_ptr<const Mesh> make_mesh(const RunConfig& cfg) {
  if (cfg.domain_kind == "half_disk")
    return std::make_shared<const Mesh>(build_half_disk(cfg.radius, cfg.h, cfg.grading));
  if (cfg.domain_kind == "disk")
    return std::make_shared<const Mesh>(build_disk(cfg.radius, cfg.h, cfg.grading));
  GraphDomain dom(Expr::parse(cfg.phi), cfg.extent);
  return std::make_shared<const Mesh>(build_graph_mesh(dom, cfg.h, cfg.grading));
}

inline BCSet make_bcs(const RunConfig& cfg) {
  BCSet bc;
  bc.robin_flat = cfg.use_eta;
  if (!cfg.arc_dirichlet.empty()) {
    Expr e = Expr::parse(cfg.arc_dirichlet);
    bc.dirichlet.push_back({BoundaryWhere::arc, [e](const Vec2& p) { return e(p); }});
  }
  if (!cfg.arc_neumann.empty()) {
    Expr e = Expr::parse(cfg.arc_neumann);
    bc.neumann.push_back({BoundaryWhere::arc, [e](const Vec2& p) { return e(p); }});
  }
  return bc;
}

struct SolveStage {
  std::shared_ptr<const Mesh> mesh;
  CoefficientSet coeffs;
  SolutionField u;
  SolveReport rep;
  bool mean_zero = false;
};

inline SolveStage do_solve(const RunConfig& cfg) {
  SolveStage st;
  st.mesh = make_mesh(cfg);
  st.coeffs = cfg.coefficients();
  BCSet bc = make_bcs(cfg);
  AssembleOptions opts;
  st.mean_zero = bc.dirichlet.empty() && !cfg.use_eta;
  opts.mean_zero = st.mean_zero;
  DiscreteSystem sys = assemble(st.coeffs, st.mesh, bc, opts);
  SolveOptions sopts;
  sopts.method = cfg.solver == "iterative" ? SolveMethod::iterative : SolveMethod::direct;
  st.u = solve_system(sys, &st.rep, sopts);
  return st;
}

inline void mesh_summary(Json& j, const Mesh& m) {
  j["vertices"] = m.vertices.size();
  j["triangles"] = m.triangles.size();
  j["min_angle_deg"] = mesh_min_angle(m);
  j["boundary_edges"] = m.boundary.size();
}

inline std::string to_csv(const SolutionField& u) {
  std::ostringstream os;
  u.write_csv(os);
  return os.str();
}

inline std::string mesh_text(const Mesh& m) {
  std::ostringstream os;
  write_mesh(m, os);
  return os.str();
}

// Analysis field after the full stage chain. `base_radius` is the largest
// half-ball radius the analyses may touch.
struct AnalysisField {
  std::shared_ptr<const FieldView> view;
  double base_radius = 1.0;
  QuadSpec quad = QuadSpec::analytic();
  Json stages = Json::object();
  std::vector<std::pair<std::string, bool>> gates;
  bool is_fem = false;
  Mat2 A0 = Mat2::Identity();
};

inline AnalysisField make_analysis_field(const RunConfig& cfg) {
  AnalysisField out;
  if (cfg.field_mode == "analytic") {
    Expr e = Expr::parse(cfg.field_expr);
    Expr dx = e.derivative("x"), dy = e.derivative("y");
    out.view = std::make_shared<AnalyticView>(
        [e](const Vec2& p) { return e(p); },
        [dx, dy](const Vec2& p) { return Vec2(dx(p), dy(p)); }, 1e30);
    out.base_radius = cfg.radius;
    out.stages["field"] = "analytic";
    return out;
  }

  SolveStage st = do_solve(cfg);
  out.stages["solve"]["residual"] = st.rep.residual;
  out.stages["solve"]["iterations"] = st.rep.iterations;
  mesh_summary(out.stages["solve"]["mesh"], *st.mesh);
  out.gates.emplace_back("solve_residual", st.rep.residual <= 1e-10);

  SolutionField cur = st.u;
  CoefficientSet coeffs = st.coeffs;

  if (cfg.use_eta) {
    GaugeResult g = gauge_transform(cur, coeffs, cfg.gauge_split);
    out.stages["gauge"]["psi_residual"] = g.psi_residual;
    out.stages["gauge"]["compatibility"] = g.compatibility;
    out.stages["gauge"]["eta_outside_value"] = g.eta_tilde.outside_value;
    out.stages["gauge"]["conormal_residual_u"] = conormal_residual(cur, coeffs, 0.9 * cfg.gauge_split);
    out.stages["gauge"]["conormal_residual_v"] =
        conormal_residual(g.v, g.coefficients, 0.9 * cfg.gauge_split);
    out.gates.emplace_back("gauge_psi_residual", g.psi_residual <= 1e-10);
    cur = g.v;
    coeffs = g.coefficients;
  }

  if (cfg.domain_kind == "graph") {
    GraphDomain dom(Expr::parse(cfg.phi), cfg.extent);
    FlatteningMap fl(dom, std::optional<FlatteningMap::MatrixField>(coeffs.A));
    auto flat_mesh = std::make_shared<const Mesh>(map_mesh(cur.mesh(), fl));
    VectorField tangent = [dom](const Vec2& x) {
      double s = dom.slope(x.x());
      return Vec2(1.0 / std::hypot(1.0, s), s / std::hypot(1.0, s));
    };
    coeffs = pushforward_coefficients(coeffs, fl, tangent);
    cur = SolutionField(flat_mesh, cur.nodal());
    mesh_summary(out.stages["flatten"]["mesh"], *flat_mesh);
  }

  Mat2 A00 = coeffs.A(Vec2::Zero());
  if ((A00 - Mat2::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
    MatX A0x = A00;
    LinearChange nm = normalizing_map(A0x);
    auto norm_mesh = std::make_shared<const Mesh>(map_mesh(cur.mesh(), nm));
    coeffs = pushforward_coefficients(coeffs, nm);
    cur = SolutionField(norm_mesh, cur.nodal());
    out.stages["normalize"]["det"] = nm.det();
    Mat2 check = coeffs.A(Vec2::Zero());
    out.stages["normalize"]["A0_error"] =
        (check - Mat2::Identity()).cwiseAbs().maxCoeff();
  }
  out.A0 = coeffs.A(Vec2::Zero());

  auto view = std::make_shared<FemView>(cur);
  out.base_radius = view->max_radius();
  out.quad = QuadSpec::for_mesh(cur.mesh());
  out.view = view;
  out.is_fem = true;
  return out;
}

inline std::vector<double> radii_grid(const RunConfig& cfg, const AnalysisField& f) {
  double lo = cfg.r_min * f.base_radius;
  double hi = cfg.r_max * f.base_radius;
  return log_spaced(lo, hi, cfg.r_count);
}

}  // namespace pipedetail

// --- solve -------------------------------------------------------------------

inline Report run_solve(const RunConfig& cfg) {
  using namespace pipedetail;
  if (cfg.field_mode != "fem") throw Error("solve: requires field.mode = fem");
  Report rep;
  SolveStage st = do_solve(cfg);
  rep.summary["command"] = "solve";
  mesh_summary(rep.summary["mesh"], *st.mesh);
  rep.summary["solve"]["residual"] = st.rep.residual;
  rep.summary["solve"]["iterations"] = st.rep.iterations;
  rep.summary["solve"]["mean_zero"] = st.mean_zero;
  if (st.mean_zero) {
    rep.summary["solve"]["weighted_mean"] = [&] {
      double total = 0.0, mass = 0.0;
      for (std::size_t t = 0; t < st.mesh->triangles.size(); ++t) {
        double a = st.mesh->tri_area(static_cast<int>(t)) / 3.0;
        for (int k = 0; k < 3; ++k) {
          total += a * st.u.nodal()[st.mesh->triangles[t][k]];
          mass += a;
        }
      }
      return total / mass;
    }();
  }
  rep.summary["solution"]["sup_abs"] = st.u.sup_abs();

  if (cfg.use_eta) {
    // Robin defect |(a grad u + b u).n - eta u| at flat midpoints: a
    // consistency diagnostic, not a gate (it converges with h).
    double defect = 0.0;
    for (const auto& f : boundary_flux(st.u, st.coeffs, BoundaryTag::flat)) {
      double uv = st.u.value(f.midpoint);
      defect = std::max(defect, std::abs(f.conormal - st.coeffs.eta(f.midpoint) * uv));
    }
    rep.summary["solve"]["robin_defect"] = defect;
  }

  rep.gate("solve_residual", st.rep.residual <= 1e-10);
  rep.add_file("mesh.txt", mesh_text(*st.mesh));
  rep.add_file("solution.csv", to_csv(st.u));
  rep.add_file("config.ini", cfg.canonical());

  if (cfg.svg) {
    SvgSeries tr;
    tr.name = "u(x, 0)";
    double R = st.mesh->kind == DomainKind::graph ? cfg.extent : cfg.radius;
    for (int i = 0; i <= 200; ++i) {
      double x = -0.98 * R + 1.96 * R * i / 200.0;
      double y = st.mesh->kind == DomainKind::graph
                     ? GraphDomain(Expr::parse(cfg.phi), cfg.extent).height(x)
                     : 0.0;
      tr.x.push_back(x);
      tr.y.push_back(st.u.value(Vec2(x, y)));
    }
    rep.add_file("plots/flat_trace.svg",
                 svg_line_plot("boundary trace", "x", "u", {tr}));
  }
  return rep;
}

// --- gauge -------------------------------------------------------------------

inline Report run_gauge(const RunConfig& cfg) {
  using namespace pipedetail;
  if (!cfg.use_eta) throw Error("gauge: config does not enable eta");
  if (cfg.domain_kind == "disk") throw Error("gauge: needs a flat boundary portion");
  Report rep;
  rep.summary["command"] = "gauge";
  SolveStage st = do_solve(cfg);
  mesh_summary(rep.summary["mesh"], *st.mesh);
  rep.summary["solve"]["residual"] = st.rep.residual;

  GaugeResult g = gauge_transform(st.u, st.coeffs, cfg.gauge_split);
  double window = 0.9 * cfg.gauge_split;
  double res_u = conormal_residual(st.u, st.coeffs, window);
  double res_v = conormal_residual(g.v, g.coefficients, window);
  rep.summary["gauge"]["psi_residual"] = g.psi_residual;
  rep.summary["gauge"]["compatibility"] = g.compatibility;
  rep.summary["gauge"]["eta_outside_value"] = g.eta_tilde.outside_value;
  rep.summary["gauge"]["conormal_residual_u"] = res_u;
  rep.summary["gauge"]["conormal_residual_v"] = res_v;
  rep.summary["gauge"]["psi_sup"] = g.psi.sup_abs();

  rep.gate("solve_residual", st.rep.residual <= 1e-10);
  rep.gate("psi_residual", g.psi_residual <= 1e-10);
  rep.gate("eta_compatibility", g.compatibility <= 1e-8);
  rep.gate("conormal_reduced", res_v < res_u);

  if (cfg.reflect) {
    ReflectedProblem rp = reflect_even_extension(g.v, g.coefficients);
    double rr = reflection_residual(rp);
    rep.summary["reflect"]["interior_residual"] = rr;
    mesh_summary(rep.summary["reflect"]["mesh"], *rp.full_mesh);
  }

  rep.add_file("mesh.txt", mesh_text(*st.mesh));
  rep.add_file("solution.csv", to_csv(st.u));
  rep.add_file("psi.csv", to_csv(g.psi));
  rep.add_file("v.csv", to_csv(g.v));
  rep.add_file("config.ini", cfg.canonical());

  if (cfg.svg) {
    SvgSeries su, sv;
    su.name = "flux u";
    sv.name = "flux v";
    for (const auto& f : boundary_flux(st.u, st.coeffs, BoundaryTag::flat))
      if (f.midpoint.norm() <= window) {
        su.x.push_back(f.midpoint.x());
        su.y.push_back(f.conormal);
      }
    for (const auto& f : boundary_flux(g.v, g.coefficients, BoundaryTag::flat))
      if (f.midpoint.norm() <= window) {
        sv.x.push_back(f.midpoint.x());
        sv.y.push_back(f.conormal);
      }
    rep.add_file("plots/conormal_flux.svg",
                 svg_line_plot("conormal flux on the flat boundary", "x", "flux", {su, sv}));
  }
  return rep;
}

// --- frequency ---------------------------------------------------------------

inline Report run_frequency(const RunConfig& cfg) {
  using namespace pipedetail;
  if (cfg.field_mode == "analytic" && cfg.field_dim != 2)
    throw Error("frequency: profiles are for 2-d fields (use nodal for d = 3)");
  Report rep;
  rep.summary["command"] = "frequency";
  AnalysisField f = make_analysis_field(cfg);
  rep.summary["stages"] = f.stages;
  for (const auto& [name, pass] : f.gates) rep.gate(name, pass);

  std::vector<double> radii = radii_grid(cfg, f);
  RadialProfile prof = radial_profile(*f.view, radii, f.quad);
  VanishingOrderEstimate est = vanishing_order(prof, cfg.cutoff);
  RigidityReport rig = rigidity_check(prof, 1e-6, 1e-5);

  rep.summary["frequency"]["m_hat"] = est.m_hat;
  rep.summary["frequency"]["m_rounded"] = est.m_rounded;
  rep.summary["frequency"]["deviation"] = est.deviation;
  rep.summary["frequency"]["classification"] =
      est.cls == OrderClass::finite ? "finite" : "infinite_order_suspicion";
  rep.summary["frequency"]["rigid"] = rig.rigid;
  rep.summary["frequency"]["rigid_m"] = rig.m;
  rep.summary["frequency"]["max_dev_F"] = rig.max_dev_F;
  rep.summary["frequency"]["max_dev_N"] = rig.max_dev_N;
  rep.summary["frequency"]["r_first"] = radii.front();
  rep.summary["frequency"]["r_last"] = radii.back();

  std::ostringstream csv;
  write_profile_csv(prof, csv);
  rep.add_file("profile.csv", csv.str());
  rep.add_file("config.ini", cfg.canonical());

  if (cfg.svg) {
    SvgSeries sf{"F(r)", prof.radii, prof.F};
    SvgSeries sd{"log2 sqrt N", prof.radii, prof.dyadic_log};
    rep.add_file("plots/profile.svg",
                 svg_line_plot("frequency profile", "r", "value", {sf, sd}, true, false));
  }
  return rep;
}

// --- blowup --------------------------------------------------------------------

inline Report run_blowup(const RunConfig& cfg) {
  using namespace pipedetail;
  if (cfg.field_mode == "analytic" && cfg.field_dim != 2)
    throw Error("blowup: requires a 2-d field");
  Report rep;
  rep.summary["command"] = "blowup";
  AnalysisField f = make_analysis_field(cfg);
  rep.summary["stages"] = f.stages;
  for (const auto& [name, pass] : f.gates) rep.gate(name, pass);

  int degree = cfg.fit_degree;
  if (degree < 0) {
    RadialProfile prof = radial_profile(*f.view, radii_grid(cfg, f), f.quad);
    VanishingOrderEstimate est = vanishing_order(prof, cfg.cutoff);
    if (est.cls != OrderClass::finite)
      throw Error("blowup: estimated order exceeds the cutoff; no polynomial tangent");
    degree = est.m_rounded;
    rep.summary["blowup"]["m_hat"] = est.m_hat;
  }
  rep.summary["blowup"]["degree"] = degree;

  std::vector<double> lambdas;
  for (double l : cfg.lambdas) lambdas.push_back(l * f.base_radius);
  BlowupSequence seq = rescale_blowup(*f.view, lambdas);
  MatX A0x = f.A0;
  HomogeneousFit fit = fit_homogeneous(seq, A0x, degree);

  const RefGrid& grid = RefGrid::standard();
  double worst_norm = 0.0;
  for (Eigen::Index k = 0; k < seq.snapshots.rows(); ++k) {
    double total = 0.0;
    for (Eigen::Index g = 0; g < seq.snapshots.cols(); ++g)
      total += grid.weights[static_cast<std::size_t>(g)] *
               seq.snapshots(k, g) * seq.snapshots(k, g);
    worst_norm = std::max(worst_norm, std::abs(total / half_ball_area(1.0) - 1.0));
  }
  rep.summary["blowup"]["normalization_defect"] = worst_norm;
  rep.gate("blowup_normalized", worst_norm <= 1e-6);

  for (std::size_t k = 0; k < seq.lambdas.size(); ++k) {
    rep.summary["blowup"]["normalizers"][k] = seq.normalizers[k];
    rep.summary["blowup"]["residuals"][k] = fit.residuals[k];
  }
  rep.summary["blowup"]["residual_final"] = fit.residual;
  for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i)
    rep.summary["blowup"]["coefficients"][static_cast<std::size_t>(i)] = fit.coefficients[i];

  if (cfg.snapshots) {
    for (std::size_t k = 0; k < seq.lambdas.size(); ++k) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshots/snapshot_%.6f.csv", cfg.lambdas[k]);
      std::ostringstream os;
      os.precision(17);
      os << "x,y,value\n";
      for (std::size_t g = 0; g < grid.nodes.size(); ++g)
        os << grid.nodes[g].x() << "," << grid.nodes[g].y() << ","
           << seq.snapshots(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(g)) << "\n";
      rep.add_file(name, os.str());
    }
  }
  rep.add_file("config.ini", cfg.canonical());

  if (cfg.svg) {
    SvgSeries sr{"fit residual", cfg.lambdas, fit.residuals};
    rep.add_file("plots/blowup_residual.svg",
                 svg_line_plot("homogeneous fit residual", "lambda", "residual", {sr}, true, true));
  }
  return rep;
}

// --- nodal ---------------------------------------------------------------------

inline Report run_nodal(const RunConfig& cfg) {
  using namespace pipedetail;
  Report rep;
  rep.summary["command"] = "nodal";

  if (cfg.field_mode == "analytic" && cfg.field_dim == 3) {
    Expr e = Expr::parse(cfg.field_expr);
    auto trace = [e](double x1, double x2) { return e(x1, x2, 0.0); };
    BoundaryZeroSet zs = boundary_zero_set_plane(trace, cfg.zero_window, cfg.plane_levels);
    rep.summary["nodal"]["mode"] = "plane";
    rep.summary["nodal"]["dim_estimate"] = zs.dim_estimate;
    rep.summary["nodal"]["covered_cells_finest"] = zs.cells.size();
    std::ostringstream zcsv, bcsv;
    write_zeros_csv(zs, zcsv);
    write_boxcount_csv(zs, bcsv);
    rep.add_file("zeros.csv", zcsv.str());
    rep.add_file("boxcount.csv", bcsv.str());
    if (cfg.svg) {
      SvgSeries sc{"covered boxes"};
      for (std::size_t i = 0; i < zs.scales.size(); ++i) {
        sc.x.push_back(1.0 / zs.scales[i]);
        sc.y.push_back(static_cast<double>(zs.counts[i]));
      }
      rep.add_file("plots/boxcount.svg",
                   svg_line_plot("box counts", "1/scale", "count", {sc}, true, true));
    }
    rep.add_file("config.ini", cfg.canonical());
    return rep;
  }

  AnalysisField f = make_analysis_field(cfg);
  rep.summary["stages"] = f.stages;
  for (const auto& [name, pass] : f.gates) rep.gate(name, pass);

  double window = cfg.zero_window * f.base_radius;
  double resolution = cfg.zero_resolution * f.base_radius;
  int hint = -1;
  auto trace = [&](double t) {
    double val;
    Vec2 g;
    f.view->eval(Vec2(t, 0.0), val, g, &hint);
    return val;
  };
  BoundaryZeroSet zs = boundary_zero_set(trace, -window, window, resolution);
  rep.summary["nodal"]["mode"] = "trace";
  rep.summary["nodal"]["roots"] = zs.roots.size();
  rep.summary["nodal"]["plateaus"] = zs.plateaus.size();
  rep.summary["nodal"]["dim_estimate"] = zs.dim_estimate;
  for (std::size_t i = 0; i < zs.roots.size(); ++i)
    rep.summary["nodal"]["root_list"][i] = zs.roots[i];

  std::ostringstream zcsv, bcsv;
  write_zeros_csv(zs, zcsv);
  write_boxcount_csv(zs, bcsv);
  rep.add_file("zeros.csv", zcsv.str());
  rep.add_file("boxcount.csv", bcsv.str());
  rep.add_file("config.ini", cfg.canonical());

  if (cfg.svg) {
    SvgSeries tr{"trace"};
    for (int i = 0; i <= 400; ++i) {
      double t = -window + 2.0 * window * i / 400.0;
      tr.x.push_back(t);
      tr.y.push_back(trace(t));
    }
    rep.add_file("plots/trace.svg",
                 svg_line_plot("boundary trace", "x", "value", {tr}));
  }
  return rep;
}

// --- verify ----------------------------------------------------------------------

namespace pipedetail {

// Deterministic LCG in [-1, 1].
struct MixRng {
  std::uint64_t state = 0x243F6A8885A308D3ull;
  double next() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return 2.0 * (static_cast<double>(state >> 11) / 9007199254740992.0) - 1.0;
  }
};

inline int monotonicity_violations(const std::vector<double>& vals, double slack = 1e-6) {
  int bad = 0;
  for (std::size_t i = 0; i + 1 < vals.size(); ++i)
    if (vals[i + 1] < vals[i] - slack) ++bad;
  return bad;
}

}  // namespace pipedetail

inline Report run_verify(const RunConfig& cfg) {
  using namespace pipedetail;
  Report rep;
  rep.summary["command"] = "verify";

  std::vector<double> radii = log_spaced(0.01, 0.5, cfg.r_count);
  QuadSpec quad = QuadSpec::analytic();

  // pure modes: rigidity of the profile
  bool all_rigid = true;
  int mono_bad = 0;
  std::vector<std::vector<HomogPoly>> bases;
  for (int m = 0; m <= 4; ++m) bases.push_back(neumann_harmonic_basis(Mat2::Identity(), m));
  for (int m = 0; m <= 4; ++m) {
    const HomogPoly& P = bases[m][0];
    AnalyticView view([&P](const Vec2& p) { return P(p); },
                      [&P](const Vec2& p) { return P.grad2(p); }, 1e30);
    RadialProfile prof = radial_profile(view, radii, quad);
    RigidityReport rig = rigidity_check(prof, 1e-6, 1e-5);
    std::string key = "m" + std::to_string(m);
    rep.summary["rigidity"][key]["max_dev_F"] = rig.max_dev_F;
    rep.summary["rigidity"][key]["max_dev_N"] = rig.max_dev_N;
    rep.summary["rigidity"][key]["m"] = rig.m;
    all_rigid = all_rigid && rig.rigid && rig.m == m;
    mono_bad += monotonicity_violations(prof.F) + monotonicity_violations(prof.N);
    std::ostringstream csv;
    write_profile_csv(prof, csv);
    rep.add_file("profile_" + key + ".csv", csv.str());
  }
  rep.gate("rigidity", all_rigid);

  // random mixtures: monotonicity of F and N only
  MixRng rng;
  for (int k = 0; k < 5; ++k) {
    std::array<double, 5> coef{};
    for (auto& c : coef) c = rng.next();
    if (std::abs(coef[1]) + std::abs(coef[2]) < 0.2) coef[1] += 0.5;
    auto eval = [coef, &bases](const Vec2& p) {
      double s = 0.0;
      for (int m = 0; m <= 4; ++m) s += coef[static_cast<std::size_t>(m)] * bases[m][0](p);
      return s;
    };
    auto grad = [coef, &bases](const Vec2& p) {
      Vec2 g = Vec2::Zero();
      for (int m = 0; m <= 4; ++m) g += coef[static_cast<std::size_t>(m)] * bases[m][0].grad2(p);
      return g;
    };
    AnalyticView view(eval, grad, 1e30);
    RadialProfile prof = radial_profile(view, radii, quad);
    int bad = monotonicity_violations(prof.F) + monotonicity_violations(prof.N);
    mono_bad += bad;
    std::string key = "mix" + std::to_string(k);
    rep.summary["monotonicity"][key] = bad;
    std::ostringstream csv;
    write_profile_csv(prof, csv);
    rep.add_file("profile_" + key + ".csv", csv.str());
  }
  rep.summary["monotonicity"]["violations_total"] = mono_bad;
  rep.gate("monotonicity", mono_bad == 0);

  // derivative identities for m = 1..3 at three radii
  double worst_gap = 0.0, worst_doubling = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const HomogPoly& P = bases[m][0];
    AnalyticView view([&P](const Vec2& p) { return P(p); },
                      [&P](const Vec2& p) { return P.grad2(p); }, 1e30);
    for (double r : {0.2, 0.4, 0.6}) {
      IdentityReport ir = verify_identities(view, r, quad);
      std::string key = "m" + std::to_string(m) + "_r" + std::to_string(r).substr(0, 3);
      rep.summary["identities"][key]["derivative"] = ir.gap_derivative;
      rep.summary["identities"][key]["dirichlet"] = ir.gap_dirichlet;
      rep.summary["identities"][key]["logslope"] = ir.gap_logslope;
      rep.summary["identities"][key]["doubling"] = ir.gap_doubling;
      worst_gap = std::max({worst_gap, ir.gap_derivative, ir.gap_dirichlet, ir.gap_logslope});
      worst_doubling = std::max(worst_doubling, ir.gap_doubling);
    }
  }
  rep.summary["identities"]["worst_gap"] = worst_gap;
  rep.summary["identities"]["worst_doubling"] = worst_doubling;
  rep.gate("identities", worst_gap < 1e-5 && worst_doubling < 1e-5);

  rep.add_file("config.ini", cfg.canonical());
  return rep;
}

inline Report run_command(const std::string& cmd, const RunConfig& cfg) {
  if (cmd == "solve") return run_solve(cfg);
  if (cmd == "gauge") return run_gauge(cfg);
  if (cmd == "frequency") return run_frequency(cfg);
  if (cmd == "blowup") return run_blowup(cfg);
  if (cmd == "nodal") return run_nodal(cfg);
  if (cmd == "verify") return run_verify(cfg);
  throw Error("unknown command '" + cmd + "'");
}

}  // namespace ucplab
