#pragma once

// Job configuration, exporters and the generate / verify / scan pipelines
// behind the command-line tool.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tpms/assembly.hpp"
#include "tpms/catalog.hpp"
#include "tpms/error.hpp"
#include "tpms/period.hpp"

namespace tpms {

using json = nlohmann::json;

struct JobConfig {
  // family selector
  std::string family;     // basic | equal | opposite | neovius | spout
  std::vector<int> rst;   // (r, s) or (r, s, t)
  int n = 2;              // spout count
  std::optional<double> d;

  int nu = 64, nv = 64;
  int depth = 3;
  bool horizontal_mirror = false;
  bool conjugate = false;  // export the conjugate patch alone

  // solver
  double tol = 1e-10;
  int samples = 64;
  int max_iterations = 50;
  bool reduced = false;  // Neovius scan over q1 with p = 1/4

  // outputs (empty = not written)
  std::string obj, ply, csv, report;

  // verify
  bool all = false;
  bool impossibility = false;
  std::size_t spot_samples = 100000;
  std::vector<double> ds{1.0, 0.7, 0.5, 0.35};
  int grid = 32;
};

/// Strict: unknown keys and wrong types throw InvalidConfig.
JobConfig config_from_json(const json& j);
json config_to_json(const JobConfig& c);
JobConfig load_config(const std::string& path);

/// Range checks; with `need_family` also resolves the selector. Throws
/// InvalidConfig.
void validate(const JobConfig& c, bool need_family);
FamilySpec resolve_family(const JobConfig& c);
double job_d(const JobConfig& c, const FamilySpec& f);

/// 0 success, 2 non-convergence, 3 invalid config, 4 verification failure.
int exit_code_for(ErrorKind k);

// --- formats ---

/// printf %.{digits}g; "nan", "inf" spelled out.
std::string format_real(double x, int digits);
/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);

/// Triangles only, 1-based indices, 9 significant digits.
void write_obj(std::ostream& os, const TriplyPeriodicMesh& m, const std::string& comment = "");
void write_ply(std::ostream& os, const TriplyPeriodicMesh& m, const std::string& comment = "");

// --- pipelines ---

struct Solved {
  FamilySpec family;
  TorusParams torus;
  RootResult root;  // basic: full = {p}, empty residual
};
Solved solve_family(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt);
SolveOptions solve_options(const JobConfig& c);

struct GenerateResult {
  Solved solved;
  TriplyPeriodicMesh mesh;
  json summary;
};
/// catalog -> period solve -> patch -> assembly -> export. Errors carry the
/// stage name in their message.
GenerateResult run_generate(const JobConfig& c);

struct CheckResult {
  std::string name;
  bool passed;
  double measured;
  double threshold;
  std::string detail;
};
struct VerifyReport {
  std::vector<CheckResult> checks;
  std::size_t failures() const;
  json to_json() const;
  std::string to_text() const;
};
VerifyReport run_verify(const JobConfig& c);

struct ScanTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // numeric columns
  std::vector<std::string> reasons;       // last column, empty when fine
  std::vector<std::pair<double, double>> brackets;
};
void write_scan_csv(std::ostream& os, const ScanTable& t);
ScanTable run_scan(const JobConfig& c);

}  // namespace tpms
