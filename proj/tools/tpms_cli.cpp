// tpms: generate, verify and scan triply periodic minimal surfaces.

#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tpms/io.hpp"

namespace {

struct Flags {
  std::string config, family, rst, rs, obj, ply, csv, report, resolution;
  std::optional<int> n, depth, samples, max_iterations, grid;
  std::optional<double> d, tol;
  std::optional<std::size_t> spot_samples;
  std::vector<double> ds;
  bool mirror = false, conjugate = false, all = false, impossibility = false, reduced = false, json_out = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON job file; flags override its entries");
  sub->add_option("--family", f.family, "basic | equal | opposite | neovius | spout");
  sub->add_option("--rst", f.rst, "triangle data r,s[,t]");
  sub->add_option("--rs", f.rs, "r,s (t is completed)");
  sub->add_option("--n", f.n, "spout count");
  sub->add_option("--d", f.d, "torus parameter, tau = i d");
  sub->add_option("--tol", f.tol, "solver tolerance");
  sub->add_option("--max-iterations", f.max_iterations, "Newton iteration cap");
  sub->add_option("--samples", f.samples, "scan samples per free parameter");
}

tpms::JobConfig build_config(const Flags& f) {
  tpms::JobConfig c = f.config.empty() ? tpms::JobConfig{} : tpms::load_config(f.config);
  tpms::json patch = tpms::json::object();
  if (!f.family.empty()) patch["family"] = f.family;
  if (!f.rst.empty()) patch["rst"] = f.rst;
  if (!f.rs.empty()) patch["rst"] = f.rs;
  if (!f.resolution.empty()) patch["resolution"] = f.resolution;
  if (!f.obj.empty()) patch["obj"] = f.obj;
  if (!f.ply.empty()) patch["ply"] = f.ply;
  if (!f.csv.empty()) patch["csv"] = f.csv;
  if (!f.report.empty()) patch["report"] = f.report;
  if (f.n) patch["n"] = *f.n;
  if (f.depth) patch["depth"] = *f.depth;
  if (f.samples) patch["samples"] = *f.samples;
  if (f.max_iterations) patch["max_iterations"] = *f.max_iterations;
  if (f.grid) patch["grid"] = *f.grid;
  if (f.d) patch["d"] = *f.d;
  if (f.tol) patch["tol"] = *f.tol;
  if (f.spot_samples) patch["spot_samples"] = *f.spot_samples;
  if (!f.ds.empty()) patch["ds"] = f.ds;
  if (f.mirror) patch["horizontal_mirror"] = true;
  if (f.conjugate) patch["conjugate"] = true;
  if (f.all) patch["all"] = true;
  if (f.impossibility) patch["impossibility"] = true;
  if (f.reduced) patch["reduced"] = true;
  tpms::json merged = tpms::config_to_json(c);
  if (!c.d) merged.erase("d");
  merged.update(patch);
  return tpms::config_from_json(merged);
}

int list_families(bool as_json) {
  tpms::json out = tpms::json::array();
  for (const auto& f : tpms::all_families()) {
    tpms::json row = {{"kind", std::string(tpms::to_string(f.kind))},
                      {"name", f.name},
                      {"rst", {f.rst.r, f.rst.s, f.rst.t}},
                      {"n", f.n},
                      {"free_parameters", tpms::free_dimension(f)},
                      {"default_d", f.default_d}};
    if (f.fixed_p) row["p"] = f.fixed_p->str();
    if (f.kind == tpms::FamilyKind::EqualSign || f.kind == tpms::FamilyKind::OppositeSign)
      row["constraint"] = tpms::constraint_of(f).str();
    out.push_back(row);
  }
  if (as_json) {
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  for (const auto& row : out) {
    std::string line = row["kind"].get<std::string>() + "  " + row["name"].get<std::string>() + "  rst=(" +
                       std::to_string(row["rst"][0].get<int>()) + "," + std::to_string(row["rst"][1].get<int>()) +
                       "," + std::to_string(row["rst"][2].get<int>()) + ")  free=" +
                       std::to_string(row["free_parameters"].get<int>());
    if (row.contains("p")) line += "  p=" + row["p"].get<std::string>();
    if (row.contains("constraint")) line += "  " + row["constraint"].get<std::string>();
    std::cout << line << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("TPMS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"Triply periodic minimal surfaces from theta-function Gauss maps"};
  app.require_subcommand(1);
  Flags f;

  auto* list = app.add_subcommand("list-families", "Print every catalogued family");
  list->add_flag("--json", f.json_out, "JSON output");

  auto* gen = app.add_subcommand("generate", "Solve, sample, replicate and export a surface");
  add_common(gen, f);
  gen->add_option("--resolution", f.resolution, "nu[,nv] patch grid");
  gen->add_option("--depth", f.depth, "reflection word length");
  gen->add_flag("--horizontal-mirror", f.mirror, "also reflect in the plane x3 = 1/2");
  gen->add_flag("--conjugate", f.conjugate, "export the conjugate patch alone");
  gen->add_option("--obj", f.obj, "OBJ output path");
  gen->add_option("--ply", f.ply, "PLY output path");
  gen->add_option("--report", f.report, "JSON summary path");

  auto* ver = app.add_subcommand("verify", "Run the invariant suites");
  add_common(ver, f);
  ver->add_option("--resolution", f.resolution, "nu[,nv] patch grid");
  ver->add_option("--depth", f.depth, "reflection word length");
  ver->add_flag("--all", f.all, "every catalogued row of the family kind");
  ver->add_flag("--impossibility", f.impossibility, "four-corner scan");
  ver->add_option("--ds", f.ds, "d values for the impossibility scan")->delimiter(',');
  ver->add_option("--grid", f.grid, "grid points per d for the impossibility scan");
  ver->add_option("--spot-samples", f.spot_samples, "triangle pairs for the self-intersection check");
  ver->add_option("--report", f.report, "JSON report path");
  ver->add_flag("--json", f.json_out, "print the JSON report instead of text");

  auto* scan = app.add_subcommand("scan", "Residual landscape as CSV");
  add_common(scan, f);
  scan->add_flag("--reduced", f.reduced, "Neovius s = t: scan q1 with p = 1/4");
  scan->add_flag("--impossibility", f.impossibility, "four-corner residual over p");
  scan->add_option("--ds", f.ds, "d values for the impossibility scan")->delimiter(',');
  scan->add_option("--grid", f.grid, "grid points per d for the impossibility scan");
  scan->add_option("--csv", f.csv, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (list->parsed()) return list_families(f.json_out);
    const tpms::JobConfig cfg = build_config(f);
    if (gen->parsed()) {
      const auto res = tpms::run_generate(cfg);
      std::cout << res.summary.dump(2) << '\n';
      return 0;
    }
    if (ver->parsed()) {
      const auto rep = tpms::run_verify(cfg);
      std::cout << (f.json_out ? rep.to_json().dump(2) + "\n" : rep.to_text());
      return rep.failures() == 0 ? 0 : 4;
    }
    if (scan->parsed()) {
      const auto table = tpms::run_scan(cfg);
      if (cfg.csv.empty()) tpms::write_scan_csv(std::cout, table);
      for (const auto& [a, b] : table.brackets)
        std::cerr << "sign change in [" << tpms::format_real(a, 17) << ", " << tpms::format_real(b, 17) << "]\n";
      return 0;
    }
  } catch (const tpms::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tpms::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
