#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "subspace_ent/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Catch::Matchers::WithinAbs;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = subspace_ent::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const char* env = std::getenv("SUBSPACE_ENT_OUT_DIR");
  fs::path dir = env && *env ? fs::path(env) : fs::temp_directory_path() / "subspace_ent_tests";
  dir /= name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("usage errors exit 2", "[cli]") {
  CHECK(run({}).code == subspace_ent::kExitUsage);
  CHECK(run({"frobnicate"}).code == subspace_ent::kExitUsage);
  const auto r = run({"measure", "--kind", "gm", "--bogus"});
  CHECK(r.code == subspace_ent::kExitUsage);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({"check", "--subspace", "/nonexistent/file", "--claim", "ces"}).code == subspace_ent::kExitUsage);
  CHECK(run({"--help"}).code == subspace_ent::kExitOk);
}

TEST_CASE("runtime errors exit 1", "[cli]") {
  const auto dir = scratch("runtime");
  CHECK(run({"make-state", "--family", "nope"}).code == subspace_ent::kExitRuntime);
  std::ofstream(dir / "bad.txt") << "dims: 2\n0 0.5 0\n";
  const auto r = run({"measure", "--state", (dir / "bad.txt").string(), "--kind", "gm"});
  CHECK(r.code == subspace_ent::kExitRuntime);
  CHECK(r.err.find("norm") != std::string::npos);
}

TEST_CASE("make-state and measure", "[cli]") {
  const auto dir = scratch("measure");
  const auto ghz = (dir / "ghz33.txt").string();
  REQUIRE(run({"make-state", "--family", "ghz", "--n", "3", "--d", "3", "--out", ghz}).code == 0);
  const auto r = run({"measure", "--state", ghz, "--kind", "ggm"});
  REQUIRE(r.code == 0);
  const auto j = r.doc();
  CHECK(j["schema_version"] == subspace_ent::kSchemaVersion);
  CHECK(j["kind"] == "measure");
  CHECK(j["exact"] == "2/3");
  CHECK_THAT(j["value"].get<double>(), WithinAbs(2.0 / 3, 1e-15));
}

TEST_CASE("check exit codes follow the verdict", "[cli]") {
  const auto dir = scratch("check");
  const auto two = (dir / "bell2.txt").string(), three = (dir / "bell3.txt").string();
  REQUIRE(run({"make-subspace", "--family", "bell", "--d", "3", "--k", "2", "--out", two}).code == 0);
  REQUIRE(run({"make-subspace", "--family", "bell", "--d", "3", "--k", "3", "--out", three}).code == 0);
  const auto a = run({"check", "--subspace", two, "--claim", "ces"});
  CHECK(a.code == subspace_ent::kExitOk);
  CHECK(a.doc()["exact_bound"] == "1/3");
  CHECK(a.doc()["verdict"] == "Detected");
  const auto b = run({"check", "--subspace", three, "--claim", "ces"});
  CHECK(b.code == subspace_ent::kExitNotDetected);
  CHECK(b.doc()["verdict"] == "NotDetected");
  CHECK(run({"check", "--subspace", two}).code == subspace_ent::kExitUsage);
}

TEST_CASE("oracle output", "[cli]") {
  const auto dir = scratch("oracle");
  const auto gw = (dir / "gw.txt").string();
  REQUIRE(run({"make-subspace", "--family", "ghz-w", "--n", "3", "--out", gw}).code == 0);
  const auto r = run({"oracle", "--subspace", gw, "--measure", "gm", "--restarts", "16"});
  REQUIRE(r.code == 0);
  const auto j = r.doc();
  CHECK_THAT(j["min_value"].get<double>(), WithinAbs((5 - std::sqrt(5.0)) / 10, 1e-7));
  CHECK(j["projection_norm"].get<double>() > 1 - 1e-9);
  CHECK(j["coefficients"].size() == 2);
}

TEST_CASE("identical runs give byte-identical output", "[cli][determinism]") {
  const auto dir = scratch("determinism");
  const auto sub = (dir / "rot.txt").string();
  REQUIRE(run({"make-subspace", "--family", "ghz-w-rotated", "--n", "4", "--out", sub}).code == 0);
  const std::vector<std::string> args{"check", "--subspace", sub, "--claim", "ces", "--restarts", "8"};
  const auto a = run(args), b = run(args);
  CHECK(a.code == subspace_ent::kExitNotDetected);
  CHECK(a.out == b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(run(threaded).out == a.out);

  const std::vector<std::string> oracle{"oracle", "--subspace", sub, "--measure", "gm", "--restarts", "6"};
  CHECK(run(oracle).out == run(oracle).out);
}

TEST_CASE("sweeps write their tables to the output directory", "[cli][sweep]") {
  const auto d1 = scratch("sweep1"), d2 = scratch("sweep2");
  for (const auto& d : {d1, d2}) {
    REQUIRE(run({"fig1", "--nmax", "80", "--odd", "--out-dir", d.string()}).code == 0);
    REQUIRE(run({"fig2", "--dmax", "12", "--out-dir", d.string()}).code == 0);
    REQUIRE(run({"fig3", "--nmax", "5", "--dmax", "5", "--out-dir", d.string()}).code == 0);
    REQUIRE(run({"figD", "--d", "3,4", "--nmax", "8", "--out-dir", d.string(), "--format", "json"}).code == 0);
  }
  for (const char* f : {"fig1.csv", "fig2.csv", "fig3.csv", "figD.json"}) {
    REQUIRE(fs::exists(d1 / f));
    CHECK(slurp(d1 / f) == slurp(d2 / f));
  }
  const auto header = slurp(d1 / "fig3.csv").substr(0, slurp(d1 / "fig3.csv").find('\n'));
  CHECK(header == "N,d,num_compositions,max_ges_dim,bound,bound_float");
  const auto fd = json::parse(slurp(d1 / "figD.json"));
  CHECK(fd["kind"] == "sweep-data");
  CHECK(fd["rows"].size() == 14);
}

TEST_CASE("sweep output directory falls back to the environment", "[cli][sweep]") {
  const char* env = std::getenv("SUBSPACE_ENT_OUT_DIR");
  if (!env || !*env) SKIP("SUBSPACE_ENT_OUT_DIR not set");
  const auto r = run({"fig2", "--dmax", "6"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(fs::path(env) / "fig2.csv"));
  CHECK(r.doc()["path"] == (fs::path(env) / "fig2.csv").string());
}
