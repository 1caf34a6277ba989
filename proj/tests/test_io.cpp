#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tpms/io.hpp"

using namespace tpms;

namespace {
ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("tpms_test_" + name)).string();
}
}  // namespace

TEST_CASE("config parsing") {
  const JobConfig c = config_from_json(json::parse(R"({"family":"basic","rst":"2,4,4","d":0.8,"resolution":[16,12]})"));
  CHECK(c.family == "basic");
  CHECK(c.rst == std::vector<int>{2, 4, 4});
  CHECK(*c.d == 0.8);
  CHECK(c.nu == 16);
  CHECK(c.nv == 12);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"famly":"basic"})")); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"d":"one"})")); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"rst":"2,x"})")); }) == ErrorKind::InvalidConfig);
  // round trip
  const JobConfig back = config_from_json(config_to_json(c));
  CHECK(back.rst == c.rst);
  CHECK(*back.d == 0.8);
}

TEST_CASE("config validation and family resolution") {
  JobConfig c;
  c.family = "opposite";
  c.rst = {4, 4, 2};
  CHECK(resolve_family(c).name == "Schoen I-WP");
  c.rst = {4, 4, 3};
  CHECK(kind_of([&] { resolve_family(c); }) == ErrorKind::InvalidConfig);
  c.rst = {2, 5};
  CHECK(kind_of([&] { resolve_family(c); }) == ErrorKind::InvalidConfig);
  c.family = "spout";
  c.rst = {3, 6};
  c.n = 2;
  CHECK(resolve_family(c).n == 2);
  c.nu = 4;
  CHECK(kind_of([&] { validate(c, true); }) == ErrorKind::InvalidConfig);
  c.nu = 64;
  c.tol = 0.0;
  CHECK(kind_of([&] { validate(c, true); }) == ErrorKind::InvalidConfig);
  c.tol = 1e-10;
  c.family = "gyroid";
  CHECK(kind_of([&] { validate(c, true); }) == ErrorKind::InvalidConfig);
  CHECK(job_d(JobConfig{}, basic_family(2, 4, 4)) == 1.0);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::NonConvergence) == 2);
  CHECK(exit_code_for(ErrorKind::NoSignChange) == 2);
  CHECK(exit_code_for(ErrorKind::InvalidConfig) == 3);
  CHECK(exit_code_for(ErrorKind::InvalidTriple) == 3);
  CHECK(exit_code_for(ErrorKind::AngleMismatch) == 4);
}

TEST_CASE("number and CSV formatting") {
  CHECK(format_real(0.1, 17) == "0.10000000000000001");
  CHECK(format_real(1.0 / 3.0, 9) == "0.333333333");
  CHECK(format_real(std::nan(""), 17) == "nan");
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  std::ostringstream os;
  write_csv_row(os, {"x", "1,2", ""});
  CHECK(os.str() == "x,\"1,2\",\r\n");
}

TEST_CASE("OBJ and PLY writers") {
  TriplyPeriodicMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1.0 / 3.0, 0)};
  m.triangles = {{0, 1, 2}};
  std::ostringstream obj, ply;
  write_obj(obj, m, "tri");
  CHECK(obj.str() == "# tri\nv 0 0 0\nv 1 0 0\nv 0 0.333333333 0\nf 1 2 3\n");
  write_ply(ply, m);
  CHECK(ply.str().find("element vertex 3\n") != std::string::npos);
  CHECK(ply.str().find("element face 1\n") != std::string::npos);
  CHECK(ply.str().find("\n3 0 1 2\n") != std::string::npos);
}

TEST_CASE("generate is deterministic and writes its outputs") {
  JobConfig c;
  c.family = "basic";
  c.rst = {2, 4, 4};
  c.nu = c.nv = 12;
  c.depth = 2;
  c.obj = temp_path("a.obj");
  c.report = temp_path("a.json");
  const GenerateResult r1 = run_generate(c);
  const std::string first = slurp(c.obj);
  c.obj = temp_path("b.obj");
  c.ply = temp_path("b.ply");
  run_generate(c);
  CHECK(first == slurp(c.obj));
  CHECK(!first.empty());
  CHECK(slurp(c.ply).rfind("ply\n", 0) == 0);
  const json summary = json::parse(slurp(c.report));
  CHECK(summary["parameters"]["p_exact"] == "1/4");
  CHECK(summary["family"]["name"] == "Schwarz P");
  CHECK(r1.summary["lattice"].size() == 3);
  // every face index in range and 1-based
  std::istringstream in(first);
  std::string tag;
  std::size_t nv = 0, bad = 0;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    ls >> tag;
    if (tag == "v") ++nv;
    if (tag == "f") {
      long a, b, d;
      ls >> a >> b >> d;
      bad += (a < 1 || b < 1 || d < 1 || a > long(nv) || b > long(nv) || d > long(nv));
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("generate surfaces solver failures with their stage") {
  JobConfig c;
  c.family = "neovius";
  c.rst = {2, 4, 4};
  c.nu = c.nv = 12;
  c.samples = 16;
  try {
    run_generate(c);
    FAIL("expected failure at d = 1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoSignChange);
    CHECK(std::string(e.what()).find("period:") != std::string::npos);
  }
}

TEST_CASE("scan: one sign change for equal (3,6), NaN rows carry a reason") {
  JobConfig c;
  c.family = "equal";
  c.rst = {3, 6};
  c.samples = 24;
  const ScanTable t = run_scan(c);
  CHECK(t.header == std::vector<std::string>{"p", "q", "residual"});
  CHECK(t.rows.size() == 24);
  CHECK(t.brackets.size() == 1);

  JobConfig n;
  n.family = "neovius";
  n.rst = {2, 4, 4};
  n.samples = 4;
  n.d = 0.7;
  const ScanTable g = run_scan(n);
  CHECK(g.rows.size() == 16);
  std::size_t nan_rows = 0;
  for (std::size_t k = 0; k < g.rows.size(); ++k) {
    if (std::isnan(g.rows[k].back())) {
      ++nan_rows;
      CHECK(!g.reasons[k].empty());
    }
  }
  CHECK(nan_rows > 0);
  std::ostringstream os;
  write_scan_csv(os, g);
  CHECK(os.str().find("nan") != std::string::npos);
  CHECK(os.str().rfind("p,q1,q2,residual_1,residual_2,reason\r\n", 0) == 0);
}

TEST_CASE("impossibility scan has no sign change") {
  JobConfig c;
  c.impossibility = true;
  c.grid = 8;
  c.ds = {1.0, 0.5};
  const ScanTable t = run_scan(c);
  CHECK(t.rows.size() == 16);
  for (const auto& row : t.rows) CHECK(row[3] > 0.0);
}

TEST_CASE("verify reports pass and fail entries") {
  JobConfig c;
  c.family = "basic";
  c.rst = {2, 4, 4};
  c.spot_samples = 2000;
  const VerifyReport r = run_verify(c);
  CHECK(r.failures() == 0);
  CHECK(r.checks.size() > 10);
  const json j = r.to_json();
  CHECK(j["failed"] == 0);
  CHECK(r.to_text().find("PASS ") != std::string::npos);
}

TEST_CASE("two-parameter Neovius: solved at d = 0.7, both starts reported at d = 1") {
  const Solved s = solve_family(neovius_family(2, 3, 6), TorusParams(0.7), SolveOptions{});
  REQUIRE(s.root.residual.size() == 2);
  CHECK(std::abs(s.root.residual[0]) < 1e-10);
  CHECK(std::abs(s.root.residual[1]) < 1e-10);
  try {
    solve_family(neovius_family(2, 3, 6), TorusParams(1.0), SolveOptions{});
    FAIL("expected NonConvergence at d = 1");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonConvergence);
    CHECK(e.message().find("catalog start") != std::string::npos);
  }
}
