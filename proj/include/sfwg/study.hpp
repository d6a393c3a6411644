#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfwg/driver.hpp"
#include "sfwg/errors.hpp"

namespace sfwg {

enum class MeshFamily { Triangle, Quad, File };

/// `tri`, `quad`, or `file:<path>`; a `{n}` in the path is replaced by the level.
struct MeshSpec {
  MeshFamily family = MeshFamily::Triangle;
  std::string path;

  static MeshSpec parse(const std::string& text);
  [[nodiscard]] Mesh build(int n) const;
  [[nodiscard]] std::string name() const;
  /// Default j - k: 3 on triangles, 6 on polygons.
  [[nodiscard]] int default_j_offset() const { return family == MeshFamily::Triangle ? 3 : 6; }
};

struct StudyRow {
  int level = 0;          // n (space sweep) or P (time sweep)
  double step = 0.0;      // h or tau
  ErrorTriple error;
  std::optional<double> trb_rate;
  std::optional<double> h2_rate;
  std::optional<double> l2_rate;
  int dofs = 0;
  double seconds = 0.0;
  double mass_condition = 0.0;  // worst local mass condition estimate
};

struct StudyReport {
  enum class Kind { Space, Time } kind = Kind::Space;
  SchemeConfig config;
  std::string mesh;
  std::optional<int> fixed_n;            // time sweeps
  std::optional<int> reference_steps;    // time sweeps against a reference run
  std::vector<StudyRow> rows;
};

/// One transient run per n; errors against Q_h u at t_end.
StudyReport run_convergence_h(const SchemeConfig& config, const MeshSpec& mesh, const std::vector<int>& ns);

/// One transient run per step count P on a fixed mesh; errors against Q_h u at
/// t_end, or against a run with `reference_steps` steps when given.
StudyReport run_convergence_tau(const SchemeConfig& config, const MeshSpec& mesh, int n, const std::vector<int>& steps,
                                std::optional<int> reference_steps = std::nullopt);

/// Columns: n_or_P, h_or_tau, trb_err, trb_rate, h2_err, h2_rate, l2_err, l2_rate.
std::string report_csv(const StudyReport& report);
std::string report_markdown(const StudyReport& report);
/// Whitespace-separated level/error pairs, one block per norm.
std::string report_dat(const StudyReport& report);
/// Writes <prefix>.csv, <prefix>.md and, when `with_dat`, <prefix>.dat.
void write_report(const StudyReport& report, const std::string& prefix, bool with_dat);

}  // namespace sfwg
