#include "sfwg/study.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sfwg/parallel.hpp"

namespace sfwg {

MeshSpec MeshSpec::parse(const std::string& text) {
  MeshSpec spec;
  if (text == "tri" || text == "triangle") {
    spec.family = MeshFamily::Triangle;
  } else if (text == "quad" || text == "poly" || text == "polygon") {
    spec.family = MeshFamily::Quad;
  } else if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    spec.family = MeshFamily::File;
    spec.path = text.substr(5);
  } else {
    throw ConfigError("unknown mesh '" + text + "' (expected tri, quad or file:<path>)");
  }
  return spec;
}

Mesh MeshSpec::build(int n) const {
  switch (family) {
    case MeshFamily::Triangle:
      return build_uniform_triangle_mesh(n);
    case MeshFamily::Quad:
      return build_quad_mesh(n);
    case MeshFamily::File: {
      std::string p = path;
      if (const auto pos = p.find("{n}"); pos != std::string::npos) p.replace(pos, 3, std::to_string(n));
      return read_mesh_file(p);
    }
  }
  throw std::logic_error("unreachable mesh family");
}

std::string MeshSpec::name() const {
  switch (family) {
    case MeshFamily::Triangle:
      return "tri";
    case MeshFamily::Quad:
      return "quad";
    case MeshFamily::File:
      return "file:" + path;
  }
  return "?";
}

namespace {

void fill_rates(StudyReport& report) {
  std::vector<double> levels, trb, h2, l2;
  for (const StudyRow& r : report.rows) {
    levels.push_back(r.level);
    trb.push_back(r.error.trb);
    h2.push_back(r.error.h2);
    l2.push_back(r.error.l2);
  }
  const auto rt = compute_rates(levels, trb);
  const auto rh = compute_rates(levels, h2);
  const auto rl = compute_rates(levels, l2);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    report.rows[i].trb_rate = rt[i];
    report.rows[i].h2_rate = rh[i];
    report.rows[i].l2_rate = rl[i];
  }
}

void require_increasing(const std::vector<int>& v, const char* what) {
  if (v.empty()) throw ConfigError(std::string(what) + " list is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1) throw ConfigError(std::string(what) + " values must be positive");
    if (i > 0 && v[i] <= v[i - 1]) throw ConfigError(std::string(what) + " values must be strictly increasing");
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

StudyReport run_convergence_h(const SchemeConfig& config, const MeshSpec& mesh, const std::vector<int>& ns) {
  config.validate();
  require_increasing(ns, "n");
  StudyReport report;
  report.kind = StudyReport::Kind::Space;
  report.config = config;
  report.mesh = mesh.name();
  report.rows.resize(ns.size());

  parallel_for(static_cast<int>(ns.size()), [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    const Mesh m = mesh.build(ns[static_cast<std::size_t>(i)]);
    const Space space(m, config.k, config.j, config.quad);
    const TransientResult run = run_transient(space, config, ManufacturedSolution::problem());
    AssemblyDiagnostics diag;
    const SparseSym a = assemble_stiffness(space, &diag);
    const SparseSym mass = assemble_mass_v0(space);
    StudyRow& row = report.rows[static_cast<std::size_t>(i)];
    row.level = ns[static_cast<std::size_t>(i)];
    row.step = m.h();
    row.error = evaluate_errors(run.final, config.t_end, space, a, mass);
    row.dofs = space.dofmap.total_dofs();
    row.seconds = seconds_since(t0);
    row.mass_condition = diag.max_mass_condition;
  });
  fill_rates(report);
  return report;
}

StudyReport run_convergence_tau(const SchemeConfig& config, const MeshSpec& mesh, int n, const std::vector<int>& steps,
                                std::optional<int> reference_steps) {
  config.validate();
  require_increasing(steps, "steps");
  if (reference_steps && *reference_steps < 1) throw ConfigError("reference steps must be positive");
  StudyReport report;
  report.kind = StudyReport::Kind::Time;
  report.config = config;
  report.mesh = mesh.name();
  report.fixed_n = n;
  report.reference_steps = reference_steps;

  const Mesh m = mesh.build(n);
  const Space space(m, config.k, config.j, config.quad);
  AssemblyDiagnostics diag;
  const SparseSym a = assemble_stiffness(space, &diag);
  const SparseSym mass = assemble_mass_v0(space);
  const TransientProblem problem = ManufacturedSolution::problem();

  const int nruns = static_cast<int>(steps.size()) + (reference_steps ? 1 : 0);
  std::vector<WeakFunction> finals(static_cast<std::size_t>(nruns));
  std::vector<double> times(static_cast<std::size_t>(nruns));
  parallel_for(nruns, [&](int i) {
    const auto t0 = std::chrono::steady_clock::now();
    SchemeConfig c = config;
    c.steps = i < static_cast<int>(steps.size()) ? steps[static_cast<std::size_t>(i)] : *reference_steps;
    finals[static_cast<std::size_t>(i)] = run_transient(space, c, problem).final;
    times[static_cast<std::size_t>(i)] = seconds_since(t0);
  });

  const WeakFunction target =
      reference_steps ? finals.back() : ManufacturedSolution::interpolant(config.t_end, space);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    StudyRow row;
    row.level = steps[i];
    row.step = config.t_end / steps[i];
    const WeakFunction e(space.dofmap, target.coefficients - finals[i].coefficients);
    row.error = error_norms(e, space, a, mass);
    row.dofs = space.dofmap.total_dofs();
    row.seconds = times[i];
    row.mass_condition = diag.max_mass_condition;
    report.rows.push_back(row);
  }
  fill_rates(report);
  return report;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string rate_or(const std::optional<double>& r, const char* spec, const std::string& absent) {
  return r ? fmt(spec, *r) : absent;
}

}  // namespace

std::string report_csv(const StudyReport& report) {
  std::ostringstream out;
  out << "n_or_P,h_or_tau,trb_err,trb_rate,h2_err,h2_rate,l2_err,l2_rate\n";
  for (const StudyRow& r : report.rows) {
    out << r.level << ',' << fmt("%.10e", r.step) << ',' << fmt("%.10e", r.error.trb) << ','
        << rate_or(r.trb_rate, "%.6f", "") << ',' << fmt("%.10e", r.error.h2) << ','
        << rate_or(r.h2_rate, "%.6f", "") << ',' << fmt("%.10e", r.error.l2) << ','
        << rate_or(r.l2_rate, "%.6f", "") << '\n';
  }
  return out.str();
}

std::string report_markdown(const StudyReport& report) {
  std::ostringstream out;
  const SchemeConfig& c = report.config;
  out << "Errors and observed rates, mesh " << report.mesh << ", k = " << c.k << ", j = " << c.j
      << ", theta = " << fmt("%g", c.theta);
  if (report.kind == StudyReport::Kind::Space) {
    out << ", P = " << c.steps;
  } else {
    out << ", n = " << report.fixed_n.value_or(0);
    if (report.reference_steps) out << ", reference P = " << *report.reference_steps;
  }
  out << ", t_end = " << fmt("%g", c.t_end);
  if (c.initial == InitialValue::EllipticProjection) out << ", U^0 = E_h psi";
  out << "\n\n";
  out << "| " << (report.kind == StudyReport::Kind::Space ? "n" : "P")
      << " | \\|\\|\\|Q_h u - u_h\\|\\|\\| | Rate | \\|Q_h u - u_h\\|_{2,h} | Rate | \\|Q_h u - u_h\\| | Rate |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const StudyRow& r : report.rows) {
    out << "| " << r.level << " | " << fmt("%.4E", r.error.trb) << " | " << rate_or(r.trb_rate, "%.2f", "---")
        << " | " << fmt("%.4E", r.error.h2) << " | " << rate_or(r.h2_rate, "%.2f", "---") << " | "
        << fmt("%.4E", r.error.l2) << " | " << rate_or(r.l2_rate, "%.2f", "---") << " |\n";
  }
  return out.str();
}

std::string report_dat(const StudyReport& report) {
  std::ostringstream out;
  const char* names[] = {"trb", "h2", "l2"};
  for (int norm = 0; norm < 3; ++norm) {
    out << "# " << names[norm] << ": " << (report.kind == StudyReport::Kind::Space ? "h" : "tau") << " error\n";
    for (const StudyRow& r : report.rows) {
      const double e = norm == 0 ? r.error.trb : norm == 1 ? r.error.h2 : r.error.l2;
      out << fmt("%.10e", r.step) << ' ' << fmt("%.10e", e) << '\n';
    }
    out << "\n\n";
  }
  return out.str();
}

void write_report(const StudyReport& report, const std::string& prefix, bool with_dat) {
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
  };
  write(prefix + ".csv", report_csv(report));
  write(prefix + ".md", report_markdown(report));
  if (with_dat) write(prefix + ".dat", report_dat(report));
}

}  // namespace sfwg
