// Command-line front end: convergence sweeps in h and tau, and the self-test suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sfwg/selftest.hpp"
#include "sfwg/study.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;

struct CommonArgs {
  int k = 2;
  std::optional<int> j_offset;
  double theta = 1.0;
  double t_end = 1.0;
  std::string mesh = "tri";
  std::string out;
  bool dat = false;
  bool json = false;
  std::string solver = "direct";
  double tol = 1e-10;
  int maxit = 20000;
  int quad_cell = -1;
  int quad_edge = -1;
  int quad_load = -1;
  std::string dump_matrix;
  std::string initial = "interpolant";
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("--k", a.k, "polynomial degree k (>= 2)")->capture_default_str();
  app->add_option("--j-offset", a.j_offset, "j - k (default 3 on triangles, 6 otherwise)");
  app->add_option("--theta", a.theta, "theta in [0.5, 1]")->capture_default_str();
  app->add_option("--t-end", a.t_end, "final time")->capture_default_str();
  app->add_option("--mesh", a.mesh, "tri, quad or file:<path> ({n} is replaced by the level)")->capture_default_str();
  app->add_option("--out", a.out, "output prefix for .csv/.md/.dat");
  app->add_flag("--dat", a.dat, "also write <prefix>.dat");
  app->add_flag("--json", a.json, "print the report as JSON instead of a markdown table");
  app->add_option("--solver", a.solver, "linear solver per step")
      ->check(CLI::IsMember({"cg", "direct"}))
      ->capture_default_str();
  app->add_option("--tol", a.tol, "CG relative residual tolerance")->capture_default_str();
  app->add_option("--maxit", a.maxit, "CG iteration cap")->capture_default_str();
  app->add_option("--quad-cell", a.quad_cell, "cell quadrature exactness (default 2j)");
  app->add_option("--quad-edge", a.quad_edge, "edge quadrature exactness (default k+j+1)");
  app->add_option("--quad-load", a.quad_load, "load quadrature exactness (default k+12)");
  app->add_option("--initial", a.initial, "U^0: interpolant (Q_h psi) or elliptic (E_h psi)")
      ->check(CLI::IsMember({"interpolant", "elliptic"}))
      ->capture_default_str();
  app->add_option("--dump-matrix", a.dump_matrix, "write the stiffness of the first level (Matrix Market)");
}

sfwg::SchemeConfig make_config(const CommonArgs& a, const sfwg::MeshSpec& mesh, int steps) {
  sfwg::SchemeConfig c;
  c.k = a.k;
  c.j = a.k + a.j_offset.value_or(mesh.default_j_offset());
  c.theta = a.theta;
  c.steps = steps;
  c.t_end = a.t_end;
  c.solver.kind = a.solver == "direct" ? sfwg::SolverKind::Direct : sfwg::SolverKind::Cg;
  c.solver.tol = a.tol;
  c.solver.maxit = a.maxit;
  c.quad.cell = a.quad_cell;
  c.quad.edge = a.quad_edge;
  c.quad.load = a.quad_load;
  c.initial = a.initial == "elliptic" ? sfwg::InitialValue::EllipticProjection : sfwg::InitialValue::Interpolant;
  c.validate();
  return c;
}

void dump_matrix(const CommonArgs& a, const sfwg::SchemeConfig& c, const sfwg::MeshSpec& mesh, int n) {
  if (a.dump_matrix.empty()) return;
  const sfwg::Mesh m = mesh.build(n);
  const sfwg::Space space(m, c.k, c.j, c.quad);
  sfwg::assemble_stiffness(space).write_matrix_market(a.dump_matrix);
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json report_json(const sfwg::StudyReport& r) {
  nlohmann::json j;
  j["kind"] = r.kind == sfwg::StudyReport::Kind::Space ? "h" : "tau";
  j["mesh"] = r.mesh;
  j["k"] = r.config.k;
  j["j"] = r.config.j;
  j["theta"] = r.config.theta;
  j["t_end"] = r.config.t_end;
  j["initial"] = r.config.initial == sfwg::InitialValue::EllipticProjection ? "elliptic" : "interpolant";
  if (r.kind == sfwg::StudyReport::Kind::Space) j["steps"] = r.config.steps;
  if (r.fixed_n) j["n"] = *r.fixed_n;
  if (r.reference_steps) j["reference_steps"] = *r.reference_steps;
  j["rows"] = nlohmann::json::array();
  for (const sfwg::StudyRow& row : r.rows) {
    j["rows"].push_back({{"level", row.level},
                         {"step", row.step},
                         {"trb_err", row.error.trb},
                         {"trb_rate", optional_json(row.trb_rate)},
                         {"h2_err", row.error.h2},
                         {"h2_rate", optional_json(row.h2_rate)},
                         {"l2_err", row.error.l2},
                         {"l2_rate", optional_json(row.l2_rate)},
                         {"dofs", row.dofs},
                         {"seconds", row.seconds}});
  }
  return j;
}

void emit(const sfwg::StudyReport& report, const CommonArgs& a) {
  for (const sfwg::StudyRow& row : report.rows) {
    if (row.mass_condition > sfwg::kMassConditionWarning) {
      std::fprintf(stderr, "warning: level %d: local mass condition estimate %.3e exceeds %.0e\n", row.level,
                   row.mass_condition, sfwg::kMassConditionWarning);
    }
  }
  if (!a.out.empty()) sfwg::write_report(report, a.out, a.dat);
  if (a.json) {
    std::cout << report_json(report).dump(2) << '\n';
  } else {
    std::cout << sfwg::report_markdown(report);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilizer-free weak Galerkin solver for u_t + biharmonic(u) = f"};
  app.require_subcommand(1);

  CommonArgs h_args;
  std::vector<int> h_ns{4, 8, 16};
  int h_steps = 100;
  auto* conv_h = app.add_subcommand("convergence-h", "spatial convergence sweep over n");
  add_common(conv_h, h_args);
  conv_h->add_option("--n", h_ns, "comma-separated mesh levels")->delimiter(',')->capture_default_str();
  conv_h->add_option("--steps", h_steps, "number of time steps P")->capture_default_str();

  CommonArgs t_args;
  int t_n = 8;
  std::vector<int> t_steps{4, 8, 16, 32};
  std::optional<int> t_reference;
  auto* conv_t = app.add_subcommand("convergence-tau", "temporal convergence sweep over P");
  add_common(conv_t, t_args);
  conv_t->add_option("--n", t_n, "mesh level")->capture_default_str();
  conv_t->add_option("--steps", t_steps, "comma-separated step counts")->delimiter(',')->capture_default_str();
  conv_t->add_option("--reference-steps", t_reference, "compare against a run with this many steps");

  bool st_json = false;
  bool st_flip = false;
  auto* selftest = app.add_subcommand("selftest", "run the invariant suite at small sizes");
  selftest->add_flag("--json", st_json, "print a JSON summary");
  selftest->add_flag("--inject-sign-flip", st_flip, "negate the normal-derivative edge term (must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*conv_h) {
      const sfwg::MeshSpec mesh = sfwg::MeshSpec::parse(h_args.mesh);
      const sfwg::SchemeConfig c = make_config(h_args, mesh, h_steps);
      dump_matrix(h_args, c, mesh, h_ns.front());
      emit(sfwg::run_convergence_h(c, mesh, h_ns), h_args);
      return 0;
    }
    if (*conv_t) {
      const sfwg::MeshSpec mesh = sfwg::MeshSpec::parse(t_args.mesh);
      const sfwg::SchemeConfig c = make_config(t_args, mesh, t_steps.front());
      dump_matrix(t_args, c, mesh, t_n);
      emit(sfwg::run_convergence_tau(c, mesh, t_n, t_steps, t_reference), t_args);
      return 0;
    }
    sfwg::SelftestOptions options;
    options.inject_sign_flip = st_flip;
    const auto results = sfwg::run_selftest(options);
    bool ok = true;
    nlohmann::json summary = nlohmann::json::object();
    for (const auto& r : results) {
      ok = ok && r.passed;
      summary[r.name] = {{"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}};
      if (!st_json) {
        std::printf("%-28s %s  %s (%.2fs)\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str(), r.seconds);
      }
      if (!r.passed) std::fprintf(stderr, "failed property: %s\n", r.name.c_str());
    }
    if (st_json) std::cout << nlohmann::json{{"passed", ok}, {"properties", summary}}.dump(2) << '\n';
    return ok ? 0 : 1;
  } catch (const sfwg::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const sfwg::FactorizationError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitSolver;
  } catch (const sfwg::MeshError& e) {
    std::fprintf(stderr, "invalid mesh: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid arguments: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
