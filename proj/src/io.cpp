#include "tpms/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "tpms/weierstrass.hpp"

namespace tpms {

namespace {

[[noreturn]] void bad_config(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    bad_config("config key '" + key + "' has the wrong type");
  }
}

std::vector<int> parse_ints(const json& v, const std::string& key) {
  if (v.is_string()) {
    std::vector<int> out;
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        bad_config("config key '" + key + "': '" + item + "' is not an integer");
      }
    }
    return out;
  }
  return get_as<std::vector<int>>(v, key);
}

}  // namespace

JobConfig config_from_json(const json& j) {
  if (!j.is_object()) bad_config("config must be a JSON object");
  JobConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "family") c.family = get_as<std::string>(v, key);
    else if (key == "rst" || key == "rs") c.rst = parse_ints(v, key);
    else if (key == "n") c.n = get_as<int>(v, key);
    else if (key == "d") c.d = get_as<double>(v, key);
    else if (key == "resolution") {
      const auto r = parse_ints(v, key);
      if (r.size() == 1) c.nu = c.nv = r[0];
      else if (r.size() == 2) c.nu = r[0], c.nv = r[1];
      else bad_config("resolution takes one or two integers");
    } else if (key == "nu") c.nu = get_as<int>(v, key);
    else if (key == "nv") c.nv = get_as<int>(v, key);
    else if (key == "depth") c.depth = get_as<int>(v, key);
    else if (key == "horizontal_mirror") c.horizontal_mirror = get_as<bool>(v, key);
    else if (key == "conjugate") c.conjugate = get_as<bool>(v, key);
    else if (key == "tol") c.tol = get_as<double>(v, key);
    else if (key == "samples") c.samples = get_as<int>(v, key);
    else if (key == "max_iterations") c.max_iterations = get_as<int>(v, key);
    else if (key == "reduced") c.reduced = get_as<bool>(v, key);
    else if (key == "obj") c.obj = get_as<std::string>(v, key);
    else if (key == "ply") c.ply = get_as<std::string>(v, key);
    else if (key == "csv") c.csv = get_as<std::string>(v, key);
    else if (key == "report") c.report = get_as<std::string>(v, key);
    else if (key == "all") c.all = get_as<bool>(v, key);
    else if (key == "impossibility") c.impossibility = get_as<bool>(v, key);
    else if (key == "spot_samples") c.spot_samples = get_as<std::size_t>(v, key);
    else if (key == "ds") c.ds = get_as<std::vector<double>>(v, key);
    else if (key == "grid") c.grid = get_as<int>(v, key);
    else bad_config("unknown config key '" + key + "'");
  }
  return c;
}

json config_to_json(const JobConfig& c) {
  json j;
  j["family"] = c.family;
  j["rst"] = c.rst;
  j["n"] = c.n;
  if (c.d) j["d"] = *c.d;
  j["nu"] = c.nu;
  j["nv"] = c.nv;
  j["depth"] = c.depth;
  j["horizontal_mirror"] = c.horizontal_mirror;
  j["conjugate"] = c.conjugate;
  j["tol"] = c.tol;
  j["samples"] = c.samples;
  j["max_iterations"] = c.max_iterations;
  j["reduced"] = c.reduced;
  j["obj"] = c.obj;
  j["ply"] = c.ply;
  j["csv"] = c.csv;
  j["report"] = c.report;
  j["all"] = c.all;
  j["impossibility"] = c.impossibility;
  j["spot_samples"] = c.spot_samples;
  j["ds"] = c.ds;
  j["grid"] = c.grid;
  return j;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad_config("config file " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

FamilySpec resolve_family(const JobConfig& c) {
  const auto& v = c.rst;
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (v.size() < lo || v.size() > hi)
      bad_config("family '" + c.family + "' needs " + std::to_string(lo) +
                 (lo == hi ? "" : " or " + std::to_string(hi)) + " integers in --rst/--rs");
  };
  auto check_t = [&](int t) {
    if (v.size() == 3 && v[2] != t)
      bad_config("t = " + std::to_string(v[2]) + " does not complete (" + std::to_string(v[0]) + "," +
                 std::to_string(v[1]) + "); expected " + std::to_string(t));
  };
  try {
    if (c.family == "basic") {
      need(2, 3);
      const int t = complete_triple(v[0], v[1]);
      check_t(t);
      return basic_family(v[0], v[1], t);
    }
    if (c.family == "equal" || c.family == "opposite") {
      need(2, 3);
      check_t(complete_triple(v[0], v[1]));
      return c.family == "equal" ? equal_sign_family(v[0], v[1]) : opposite_sign_family(v[0], v[1]);
    }
    if (c.family == "neovius") {
      need(2, 3);
      const int t = complete_triple(v[0], v[1]);
      check_t(t);
      return neovius_family(v[0], v[1], t);
    }
    if (c.family == "spout") {
      need(2, 3);
      check_t(complete_triple(v[0], v[1]));
      return spout_family(v[0], v[1], c.n);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidConfig) throw;
    bad_config(e.what());
  }
  bad_config(c.family.empty() ? "no family given" : "unknown family '" + c.family + "'");
}

void validate(const JobConfig& c, bool need_family) {
  if (c.nu < 8 || c.nv < 8) bad_config("resolution must be at least 8x8");
  if (c.depth < 0 || c.depth > 6) bad_config("depth must lie in 0..6");
  if (!(c.tol > 0.0)) bad_config("tol must be positive");
  if (c.samples < 2) bad_config("samples must be at least 2");
  if (c.max_iterations < 1) bad_config("max_iterations must be positive");
  if (c.grid < 2) bad_config("grid must be at least 2");
  if (c.d && !(std::isfinite(*c.d) && *c.d >= 0.05)) bad_config("d must be finite and at least 0.05");
  for (double d : c.ds)
    if (!(std::isfinite(d) && d >= 0.05)) bad_config("every entry of ds must be finite and at least 0.05");
  if (need_family) resolve_family(c);
}

double job_d(const JobConfig& c, const FamilySpec& f) { return c.d.value_or(f.default_d); }

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergence:
    case ErrorKind::NoSignChange:
    case ErrorKind::QuadratureNonConvergence:
      return 2;
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidTriple:
    case ErrorKind::InvalidArgument:
    case ErrorKind::OutOfRange:
    case ErrorKind::DomainTooThin:
    case ErrorKind::ConstraintInfeasible:
    case ErrorKind::OverlappingPoints:
      return 3;
    case ErrorKind::PoleProximity:
    case ErrorKind::DegenerateEdge:
    case ErrorKind::AngleMismatch:
      return 4;
  }
  return 4;
}

// --- formats ---

std::string format_real(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << "\r\n";
}

void write_obj(std::ostream& os, const TriplyPeriodicMesh& m, const std::string& comment) {
  if (!comment.empty()) os << "# " << comment << '\n';
  for (const auto& v : m.vertices)
    os << "v " << format_real(v[0], 9) << ' ' << format_real(v[1], 9) << ' ' << format_real(v[2], 9) << '\n';
  for (const auto& t : m.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_ply(std::ostream& os, const TriplyPeriodicMesh& m, const std::string& comment) {
  os << "ply\nformat ascii 1.0\n";
  if (!comment.empty()) os << "comment " << comment << '\n';
  os << "element vertex " << m.vertices.size() << "\nproperty double x\nproperty double y\nproperty double z\n";
  os << "element face " << m.triangles.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& v : m.vertices)
    os << format_real(v[0], 17) << ' ' << format_real(v[1], 17) << ' ' << format_real(v[2], 17) << '\n';
  for (const auto& t : m.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

namespace {

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) bad_config("cannot write " + path);
  return out;
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.message());
  }
}

std::vector<std::string> parameter_names(const FamilySpec& f) {
  std::vector<std::string> names{"p"};
  if (f.n == 1) names.push_back("q");
  else
    for (int i = 1; i <= f.n; ++i) names.push_back("q" + std::to_string(i));
  return names;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

SolveOptions solve_options(const JobConfig& c) {
  SolveOptions o;
  o.tol = c.tol;
  o.samples = c.samples;
  o.max_iterations = c.max_iterations;
  return o;
}

namespace {

// Newton from the catalog start, then from the best point of a residual grid
RootResult newton_with_fallback(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt) {
  std::string first;
  try {
    return solve_multidim(f, t, initial_guess(f), opt);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonConvergence && e.kind() != ErrorKind::QuadratureNonConvergence) throw;
    first = e.message();
  }
  const std::vector<double> seed = grid_seed(f, t, 12, opt.quad);
  try {
    RootResult r = solve_multidim(f, t, seed, opt);
    r.log.insert(r.log.begin(), "catalog start failed (" + first + "); restarted from the residual grid minimum");
    return r;
  } catch (const Error& e) {
    throw Error(e.kind(), e.message() + "; catalog start: " + first);
  }
}

}  // namespace

Solved solve_family(const FamilySpec& f, const TorusParams& t, const SolveOptions& opt) {
  Solved s{f, t, {}};
  switch (f.kind) {
    case FamilyKind::Basic:
      s.root.full = {f.fixed_p->to_double()};
      break;
    case FamilyKind::EqualSign:
      s.root = solve_equal_sign(f, t, opt);
      break;
    case FamilyKind::OppositeSign:
      s.root = solve_opposite_sign(f, t, opt);
      break;
    case FamilyKind::Neovius:
      s.root = f.symmetric_reduction ? solve_neovius_reduced(f, t, opt) : newton_with_fallback(f, t, opt);
      break;
    case FamilyKind::Spout:
      s.root = free_dimension(f) == 1 ? solve_1d(f, t, opt) : newton_with_fallback(f, t, opt);
      break;
  }
  return s;
}

GenerateResult run_generate(const JobConfig& c) {
  validate(c, true);
  GenerateResult out{{resolve_family(c), TorusParams(1.0), {}}, {}, {}};
  const FamilySpec& f = out.solved.family;
  const TorusParams torus = stage("catalog", [&] { return TorusParams(job_d(c, f)); });
  out.solved = stage("period", [&] { return solve_family(f, torus, solve_options(c)); });
  const auto& root = out.solved.root;
  auto g = stage("patch", [&] { return std::make_shared<const GaussMap>(expand(family_divisor(f, torus, root.full))); });
  const SurfacePatch patch = stage("patch", [&] { return make_patch(g, c.nu, c.nv); });

  json& s = out.summary;
  s["family"] = {{"kind", std::string(to_string(f.kind))},
                 {"name", f.name},
                 {"rst", {f.rst.r, f.rst.s, f.rst.t}},
                 {"n", f.n}};
  s["d"] = torus.d();
  const auto names = parameter_names(f);
  for (std::size_t i = 0; i < root.full.size() && i < names.size(); ++i) s["parameters"][names[i]] = root.full[i];
  if (f.fixed_p) s["parameters"]["p_exact"] = f.fixed_p->str();
  if (const auto cf = symmetric_solution(f)) s["closed_form"] = {{"p", cf->first.str()}, {"q", cf->second.str()}};
  s["residual"] = root.residual;
  s["iterations"] = root.iterations;
  s["solver_log"] = root.log;
  for (const auto& label : patch.labels()) {
    const VerticalPlane pl = stage("patch", [&] { return plane_of(patch, label); });
    s["planes"].push_back(
        {{"label", label}, {"normal", {pl.n[0], pl.n[1]}}, {"offset", pl.offset}, {"residual", pl.residual}});
  }

  if (c.conjugate) {
    const SurfacePatch conj = conjugate_patch(patch);
    out.mesh = patch_mesh(conj);
    double straight = 0.0;
    for (const auto& label : conj.labels()) straight = std::max(straight, straightness_defect(conj, label));
    s["conjugate"] = {{"straightness_defect", straight}};
  } else {
    stage("assembly", [&] {
      const TriangleGroup grp = group_for_patch(patch, f.rst);
      const SurfacePatch aligned = align_patch(patch, grp);
      const MeasuredTriangle tri = measure_triangle(aligned);
      std::vector<double> over_pi;
      for (double a : tri.angles) over_pi.push_back(kPi / a);
      s["triangle"] = {{"angles_pi_over", over_pi}, {"side01", (grp.v[1] - grp.v[0]).norm()}};
      s["seam_gap"] = seam_gap(aligned, grp);
      out.mesh = replicate(aligned, grp, c.depth, c.horizontal_mirror);
      return 0;
    });
    const auto& m = out.mesh;
    s["lattice"] = {vec_json(m.lattice[0]), vec_json(m.lattice[1]), vec_json(m.lattice[2])};
    s["vertical_period"] = m.vertical_period;
    s["doubled_vertical_period"] = m.doubled_vertical_period;
    s["horizontal_mirror"] = m.horizontal_mirror;
    const MeshTopology topo = mesh_topology(m);
    s["topology"] = {{"boundary_edges", topo.boundary_edges},
                     {"manifold_edges", topo.manifold_edges},
                     {"singular_edges", topo.singular_edges},
                     {"degenerate_faces", topo.degenerate_faces}};
  }
  s["mesh"] = {{"vertices", out.mesh.vertices.size()},
               {"triangles", out.mesh.triangles.size()},
               {"copies", out.mesh.copies.size()}};

  const std::string comment = f.name + " d=" + format_real(torus.d(), 17);
  if (!c.obj.empty()) {
    auto os = open_out(c.obj);
    write_obj(os, out.mesh, comment);
  }
  if (!c.ply.empty()) {
    auto os = open_out(c.ply);
    write_ply(os, out.mesh, comment);
  }
  if (!c.report.empty()) {
    auto os = open_out(c.report);
    os << s.dump(2) << '\n';
  }
  return out;
}

// --- verify ---

std::size_t VerifyReport::failures() const {
  std::size_t n = 0;
  for (const auto& ch : checks) n += ch.passed ? 0 : 1;
  return n;
}

json VerifyReport::to_json() const {
  json j;
  j["checks"] = json::array();
  for (const auto& ch : checks) {
    j["checks"].push_back({{"name", ch.name},
                           {"passed", ch.passed},
                           {"measured", std::isfinite(ch.measured) ? json(ch.measured) : json(format_real(ch.measured, 6))},
                           {"threshold", ch.threshold},
                           {"detail", ch.detail}});
  }
  j["passed"] = checks.size() - failures();
  j["failed"] = failures();
  return j;
}

std::string VerifyReport::to_text() const {
  std::string out;
  for (const auto& ch : checks) {
    out += (ch.passed ? "PASS " : "FAIL ") + ch.name + "  measured=" + format_real(ch.measured, 6) +
           " threshold=" + format_real(ch.threshold, 6);
    if (!ch.detail.empty()) out += "  (" + ch.detail + ")";
    out += '\n';
  }
  out += std::to_string(checks.size() - failures()) + " passed, " + std::to_string(failures()) + " failed\n";
  return out;
}

namespace {

struct Checker {
  VerifyReport& rep;
  std::string prefix;
  void below(const std::string& name, double measured, double threshold, const std::string& detail = "") {
    rep.checks.push_back({prefix + name, measured < threshold, measured, threshold, detail});
  }
  void within(const std::string& name, double measured, double lo, double hi) {
    rep.checks.push_back({prefix + name, measured >= lo && measured <= hi, measured, hi,
                          "expected in [" + format_real(lo, 6) + ", " + format_real(hi, 6) + "]"});
  }
  void fail(const std::string& name, const std::string& detail) {
    rep.checks.push_back({prefix + name, false, std::numeric_limits<double>::quiet_NaN(), 0.0, detail});
  }
  // Runs f; an exception becomes a failed check.
  void guard(const std::string& name, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      fail(name, e.what());
    }
  }
};

void family_checks(const FamilySpec& f, const JobConfig& c, VerifyReport& rep) {
  Checker ck{rep, f.name + " " + f.rst.str() + ": "};
  const TorusParams torus(job_d(c, f));
  ck.guard("pipeline", [&] {
    if (f.fixed_p) {
      const Rational formula = basic_p(f.rst.r, f.rst.s);
      const Rational table = tabulated_basic_p(f.rst);
      ck.rep.checks.push_back({ck.prefix + "tabulated p", formula == table, std::abs((formula - table).to_double()),
                               0.0, "formula " + formula.str() + " vs table " + table.str()});
    }
    const Solved sol = solve_family(f, torus, solve_options(c));
    if (!sol.root.residual.empty()) {
      double r = 0.0;
      for (double x : sol.root.residual) r = std::max(r, std::abs(x));
      ck.below("period residual", r, 1e-8);
    }
    auto g = std::make_shared<const GaussMap>(expand(family_divisor(f, torus, sol.root.full)));
    const SurfacePatch patch = make_patch(g, c.nu, c.nv);
    double planar = 0.0;
    for (const auto& label : patch.labels()) planar = std::max(planar, plane_of(patch, label).residual);
    ck.below("boundary planarity", planar, 1e-6);
    if (f.kind == FamilyKind::Basic) {
      const VerticalPlane a = plane_of(patch, "L1"), b = plane_of(patch, "U");
      const double ang = std::acos(std::min(1.0, std::abs(a.n.dot(b.n))));
      ck.below("angle [-p,p] vs upper plane", std::abs(ang - kPi / f.rst.s), 1e-6);
    }
    const PatchQuality q = patch_quality(patch);
    ck.below("conformality", q.conformality, 1e-3);
    ck.below("normal consistency", q.normal_angle, 1e-3);
    const PatchQuality coarse = patch_quality(make_patch(g, (c.nu + 1) / 2, (c.nv + 1) / 2));
    ck.within("harmonicity ratio per halving", coarse.harmonicity / q.harmonicity, 2.5, 6.0);
    ck.below("vertical period", vertical_period_error(*g, 32), 1e-8);

    const TriangleGroup grp = group_for_patch(patch, f.rst);
    const SurfacePatch aligned = align_patch(patch, grp);
    const MeasuredTriangle tri = measure_triangle(aligned);
    double angle_err = 0.0;
    for (int k = 0; k < 3; ++k) {
      double best = 1e300;
      for (int m = 0; m < 3; ++m) best = std::min(best, std::abs(tri.angles[k] - grp.angles[m]));
      angle_err = std::max(angle_err, best);
    }
    ck.below("dihedral angles vs triangle group", angle_err, 1e-5);
    ck.below("seam gap", seam_gap(aligned, grp), 1e-6);
    const TriplyPeriodicMesh mesh = replicate(aligned, grp, c.depth, c.horizontal_mirror);
    Mat3 L;
    for (int k = 0; k < 3; ++k) L.col(k) = mesh.lattice[k];
    ck.rep.checks.push_back({ck.prefix + "lattice independence", std::abs(L.determinant()) > 1e-6,
                             std::abs(L.determinant()), 1e-6, "|det| of the three lattice vectors"});
    ck.below("lattice invariance", lattice_invariance_error(mesh, 64), 1e-6);
    const MeshTopology topo = mesh_topology(mesh);
    ck.below("singular edges", static_cast<double>(topo.singular_edges), 0.5);
    ck.below("degenerate faces", static_cast<double>(topo.degenerate_faces), 0.5);
    const SpotCheckReport spot = self_intersection_spot_check(mesh, c.spot_samples);
    ck.below("self-intersections", static_cast<double>(spot.intersections), 0.5,
             std::to_string(spot.pairs_tested) + " pairs tested");
  });
}

}  // namespace

VerifyReport run_verify(const JobConfig& c) {
  validate(c, !c.family.empty());
  VerifyReport rep;
  Checker ck{rep, ""};
  for (double d : {0.5, 1.0, 2.0}) {
    const ThetaIdentityErrors e = theta_identity_errors(TorusParams(d), 1000);
    ck.below("theta identities d=" + format_real(d, 6), e.max(), 1e-10, "1000 random points");
  }
  if (!c.family.empty()) {
    std::vector<FamilySpec> fams;
    if (c.all) {
      const FamilyKind kind = resolve_family(c).kind;
      for (const auto& f : all_families())
        if (f.kind == kind) fams.push_back(f);
    } else {
      fams.push_back(resolve_family(c));
    }
    for (const auto& f : fams) family_checks(f, c, rep);
  }
  if (c.impossibility) {
    Triple rst{3, 3, 3};
    if (!c.rst.empty()) {
      if (c.rst.size() < 2) bad_config("impossibility needs (r,s) or (r,s,t)");
      rst = {c.rst[0], c.rst[1], complete_triple(c.rst[0], c.rst[1])};
    }
    ck.guard("impossibility " + rst.str(), [&] {
      const ImpossibilityReport r = impossibility_scan(rst, c.ds, c.grid);
      for (const auto& row : r.rows)
        rep.checks.push_back({"impossibility " + rst.str() + " constant sign d=" + format_real(row.d, 6),
                              row.constant_sign, row.inf_abs, 0.0, "inf |residual| over the grid"});
      rep.checks.push_back({"impossibility " + rst.str() + " inf |residual| decreases with d", r.inf_decreasing,
                            r.rows.empty() ? 0.0 : r.rows.back().inf_abs, 0.0, ""});
    });
  }
  if (!c.report.empty()) {
    auto os = open_out(c.report);
    os << rep.to_json().dump(2) << '\n';
  }
  return rep;
}

// --- scan ---

void write_scan_csv(std::ostream& os, const ScanTable& t) {
  auto header = t.header;
  header.push_back("reason");
  write_csv_row(os, header);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::vector<std::string> f;
    for (double x : t.rows[i]) f.push_back(format_real(x, 17));
    f.push_back(t.reasons[i]);
    write_csv_row(os, f);
  }
}

ScanTable run_scan(const JobConfig& c) {
  validate(c, !c.impossibility);
  ScanTable out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (c.impossibility) {
    Triple rst{3, 3, 3};
    if (c.rst.size() >= 2) rst = {c.rst[0], c.rst[1], complete_triple(c.rst[0], c.rst[1])};
    const FourCornerCandidate cand = four_corner_candidate(rst);
    const auto [lo, hi] = cand.p_range();
    out.header = {"d", "p", "q", "residual"};
    for (double d : c.ds) {
      const TorusParams t(d);
      std::vector<std::vector<double>> rows(c.grid);
      std::vector<std::string> why(c.grid);
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < c.grid; ++k) {
        const double p = lo + (hi - lo) * (k + 0.5) / c.grid;
        double r = nan;
        try {
          r = four_corner_residual(cand, p, t);
        } catch (const std::exception& e) {
          why[k] = e.what();
        }
        rows[k] = {d, p, cand.q_of(p), r};
      }
      for (int k = 0; k < c.grid; ++k) {
        out.rows.push_back(rows[k]);
        out.reasons.push_back(why[k]);
      }
    }
  } else {
    const FamilySpec f = resolve_family(c);
    const TorusParams t(job_d(c, f));
    const int dim = free_dimension(f);
    const auto names = parameter_names(f);
    if (c.reduced) {
      if (!f.symmetric_reduction) bad_config("--reduced needs a Neovius family with s = t");
      out.header = {"p", "q1", "q2", "residual_1", "residual_2"};
      std::vector<std::vector<double>> rows(c.samples);
      std::vector<std::string> why(c.samples);
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < c.samples; ++k) {
        const double q1 = 0.25 * (k + 0.5) / c.samples;
        rows[k] = {0.25, q1, 0.5 - q1, nan, nan};
        try {
          const auto r = neovius_reduced_residual(f, t, q1);
          rows[k][3] = r.at(0);
          rows[k][4] = r.at(1);
        } catch (const std::exception& e) {
          why[k] = e.what();
        }
      }
      out.rows = rows;
      out.reasons = why;
      for (int k = 0; k + 1 < c.samples; ++k) {
        const double a = rows[k][3], b = rows[k + 1][3];
        if (std::isfinite(a) && std::isfinite(b) && (a < 0) != (b < 0)) out.brackets.emplace_back(rows[k][1], rows[k + 1][1]);
      }
    } else if (dim == 1) {
      out.header = {names[0], names[1], "residual"};
      const Scan1D s = scan_1d(f, t, c.samples);
      for (const auto& pt : s.points) {
        double q = nan;
        try {
          q = full_parameters(f, pt.params).at(1);
        } catch (const std::exception&) {
        }
        out.rows.push_back({pt.params[0], q, pt.residual});
        out.reasons.push_back(pt.reason);
      }
      out.brackets = s.brackets;
    } else if (dim == 2) {
      out.header = names;
      out.header.push_back("residual_1");
      out.header.push_back("residual_2");
      const int n = c.samples;
      std::vector<std::vector<double>> rows(static_cast<std::size_t>(n) * n);
      std::vector<std::string> why(rows.size());
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < n * n; ++k) {
        const double p = 0.5 * (k / n + 0.5) / n, q1 = 0.5 * (k % n + 0.5) / n;
        rows[k] = {p, q1, nan, nan, nan};
        try {
          rows[k][2] = full_parameters(f, {p, q1}).at(2);
          const auto r = period_residual(f, t, {p, q1});
          rows[k][3] = r.at(0);
          rows[k][4] = r.at(1);
        } catch (const std::exception& e) {
          why[k] = e.what();
        }
      }
      out.rows = rows;
      out.reasons = why;
    } else {
      bad_config("scan supports families with one or two free parameters; " + f.name + " has " + std::to_string(dim));
    }
  }
  if (!c.csv.empty()) {
    auto os = open_out(c.csv);
    write_scan_csv(os, out);
  }
  return out;
}

}  // namespace tpms
