#include "subspace_ent/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "subent/subent.hpp"

namespace subspace_ent {
namespace {

using json = nlohmann::ordered_json;
using namespace subent;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad integer '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

std::vector<Composition> parse_kvecs(const std::string& text) {
  std::vector<Composition> out;
  std::string part;
  std::istringstream is(text);
  while (std::getline(is, part, ';'))
    if (!part.empty()) out.push_back(parse_int_list(part));
  if (out.empty()) throw std::invalid_argument("no occupation vectors given");
  return out;
}

json complex_array(std::span<const cplx> v) {
  json a = json::array();
  for (const auto& c : v) a.push_back({c.real(), c.imag()});
  return a;
}

json dims_of(const SystemShape& s) { return json(std::vector<int>(s.dims().begin(), s.dims().end())); }

json optional_rational(const std::optional<Rational>& q) { return q ? json(to_string(*q)) : json(nullptr); }

void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

void emit_json(const json& j, const std::string& path, std::ostream& out) { emit_text(j.dump(2) + "\n", path, out); }

json document(const std::string& kind) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

struct Common {
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  int restarts = 64;
  int max_iters = 500;
  std::string format;  ///< empty: json for documents, csv for sweeps
  std::string out;

  OptimizerConfig config() const {
    OptimizerConfig c;
    c.seed = seed;
    c.threads = threads;
    c.restarts = restarts;
    c.max_iters = max_iters;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* sub, Common& c, bool randomized, bool csv_allowed) {
  if (randomized) {
    sub->add_option("--seed", c.seed, "master seed for restarts")->capture_default_str();
    sub->add_option("--restarts", c.restarts, "random restarts per search")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", c.max_iters, "see-saw sweeps per restart")->capture_default_str()->check(CLI::PositiveNumber);
  }
  sub->add_option("--threads", c.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--format", c.format, csv_allowed ? "csv (default) or json" : "json")
      ->check(csv_allowed ? CLI::IsMember({"json", "csv"}) : CLI::IsMember({"json"}));
}

// ---------------------------------------------------------------------------
// make-state / make-subspace

struct FamilyArgs {
  std::string family;
  int n = 0, d = 0, k = -1, j = 0, m = 1, index = 0;
  std::string kvec, kvecs, js;
};

PureState make_state(const FamilyArgs& a) {
  const auto& f = a.family;
  if (f == "ghz") return states::ghz(a.n, a.d ? a.d : 2);
  if (f == "ghz-shifted") return states::ghz_shifted(a.n, a.d, a.j);
  if (f == "w") return states::w_state(a.n);
  if (f == "dicke") return states::dicke_qubit(a.n, a.k);
  if (f == "qudit-dicke") return states::dicke_qudit(parse_int_list(a.kvec));
  if (f == "bell") return states::bell_basis_vector(a.d, a.j);
  if (f == "ame") return states::ame_state(a.n, a.d);
  if (f == "antisym") {
    auto basis = states::antisymmetric_basis(a.n, a.d);
    if (a.index < 0 || static_cast<std::size_t>(a.index) >= basis.size()) throw std::out_of_range("antisym: --index out of range");
    return basis[static_cast<std::size_t>(a.index)];
  }
  if (f == "upb") {
    auto upb = states::upb_3qubit();
    if (a.index < 0 || a.index >= 4) throw std::out_of_range("upb: --index must lie in [0, 4)");
    return upb[static_cast<std::size_t>(a.index)];
  }
  throw std::invalid_argument("unknown state family '" + f + "'");
}

Subspace make_subspace(const FamilyArgs& a) {
  const auto& f = a.family;
  std::vector<PureState> b;
  if (f == "bell") {
    if (!a.js.empty()) {
      for (int j : parse_int_list(a.js)) b.push_back(states::bell_basis_vector(a.d, j));
    } else {
      const int k = a.k < 0 ? a.d : a.k;
      for (int j = 0; j < k; ++j) b.push_back(states::bell_basis_vector(a.d, j));
    }
  } else if (f == "ghz-w") {
    b = {states::ghz(a.n, 2), states::w_state(a.n)};
  } else if (f == "ghz-w-rotated") {
    const std::vector<PureState> gw{states::ghz(a.n, 2), states::w_state(a.n)};
    const double s = 1.0 / std::sqrt(2.0);
    const cplx plus[] = {s, s}, minus[] = {s, -s};
    b = {superpose(gw, plus), superpose(gw, minus)};
  } else if (f == "dicke") {
    for (int k = a.m; k <= a.n - a.m; ++k) b.push_back(states::dicke_qubit(a.n, k));
  } else if (f == "antisym") {
    b = states::antisymmetric_basis(a.n, a.d);
    if (a.k > 0 && static_cast<std::size_t>(a.k) < b.size()) b.erase(b.begin() + a.k, b.end());
  } else if (f == "upb-complement") {
    return states::upb_complement_3qubit();
  } else if (f == "ghz-shifted") {
    const int k = a.k < 0 ? a.d : a.k;
    for (int j = 0; j < k; ++j) b.push_back(states::ghz_shifted(a.n, a.d, j));
  } else if (f == "qudit-dicke") {
    for (const auto& kv : parse_kvecs(a.kvecs)) b.push_back(states::dicke_qudit(kv));
  } else {
    throw std::invalid_argument("unknown subspace family '" + f + "'");
  }
  if (b.empty()) throw std::invalid_argument("subspace family produced no vectors");
  return Subspace(std::move(b));
}

void add_family_options(CLI::App* sub, FamilyArgs& a, const std::string& families) {
  sub->add_option("--family", a.family, families)->required();
  sub->add_option("--n", a.n, "number of sites");
  sub->add_option("--d", a.d, "local dimension");
  sub->add_option("--k", a.k, "excitations (dicke) or number of basis vectors");
  sub->add_option("--j", a.j, "phase or shift index");
  sub->add_option("--m", a.m, "outermost excitation number of a Dicke span");
  sub->add_option("--index", a.index, "basis vector index");
  sub->add_option("--kvec", a.kvec, "occupation vector, e.g. 1,1,1");
  sub->add_option("--kvecs", a.kvecs, "occupation vectors, e.g. '1,1,1;2,1,0'");
  sub->add_option("--js", a.js, "Bell phase indices, e.g. 0,2");
}

// ---------------------------------------------------------------------------
// JSON renderings

json measure_json(const PureState& psi, const MeasureSpec& spec, const MeasureValue& v) {
  json j = document("measure");
  j["measure"] = spec.name();
  j["dims"] = dims_of(psi.shape());
  j["value"] = v.value;
  j["exact"] = optional_rational(v.exact);
  j["method"] = to_string(v.method);
  j["converged"] = v.converged;
  j["detail"] = v.detail;
  return j;
}

json report_json(const Subspace& v, const CriterionReport& r) {
  json j = document("check");
  j["claim"] = r.claim.to_string();
  j["measure"] = r.measure.name();
  j["dims"] = dims_of(v.shape());
  j["dimension"] = v.dimension();
  j["values"] = r.values;
  json methods = json::array();
  for (auto m : r.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["converged"] = std::vector<bool>(r.converged.begin(), r.converged.end());
  j["details"] = r.details;
  j["bound"] = r.bound;
  j["exact_bound"] = optional_rational(r.exact_bound);
  j["verdict"] = to_string(r.verdict);
  j["verdict_label"] = r.verdict_label();
  j["certified"] = r.certified;
  j["tolerance"] = r.tolerance;
  j["notes"] = r.notes;
  return j;
}

json oracle_json(const Subspace& v, const OracleResult& r) {
  json j = document("oracle");
  j["measure"] = r.measure.name();
  j["dims"] = dims_of(v.shape());
  j["dimension"] = v.dimension();
  j["method"] = to_string(r.method);
  j["min_value"] = r.min_value;
  j["coefficients"] = complex_array(r.coefficients);
  j["restarts"] = r.restarts;
  j["converged"] = r.converged;
  j["detail"] = r.detail;
  j["projection_norm"] = project_onto(v, PureState::normalized(v.shape(), r.state)).norm;
  return j;
}

json sweep_json(const SweepResult& s) {
  json j = document("sweep-data");
  j["name"] = s.name;
  j["axes"] = s.axes;
  j["columns"] = s.columns;
  j["rows"] = s.rows;
  json meta = json::object();
  for (const auto& [k, v] : s.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

std::string output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SUBSPACE_ENT_OUT_DIR"); env && *env) return env;
  return ".";
}

json write_sweep(const SweepResult& s, const Common& c, const std::string& out_dir_flag) {
  const std::filesystem::path dir = output_dir(out_dir_flag);
  std::filesystem::create_directories(dir);
  const std::string format = c.format.empty() ? "csv" : c.format;
  const auto path = dir / (s.name + "." + format);
  emit_text(format == "csv" ? s.csv() : sweep_json(s).dump(2) + "\n", path.string(), std::cout);
  json j = document("sweep");
  j["name"] = s.name;
  j["path"] = path.string();
  j["format"] = format;
  j["columns"] = s.columns;
  j["rows"] = s.rows.size();
  json meta = json::object();
  for (const auto& [k, v] : s.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement of subspaces: measures, detection criteria, oracles and sweeps", "subspace-ent"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "expand all help");
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "progress messages on stderr");

  Common common;
  FamilyArgs fam;
  std::string state_file, subspace_file, measure_text, claim_text, method = "seesaw", suite = "quick", out_dir;
  int resolution = 256, nmax = 0, nmin = 2, dmin = kGesMinLevels, dmax = 0;
  std::string ds = "3,4,5";
  bool odd = false, inject_fault = false, timing = false;

  auto* make_state_cmd = app.add_subcommand("make-state", "write a named state to a state file");
  add_family_options(make_state_cmd, fam, "ghz|ghz-shifted|w|dicke|qudit-dicke|bell|ame|antisym|upb");
  make_state_cmd->add_option("--out", common.out, "output file (default stdout)");

  auto* make_subspace_cmd = app.add_subcommand("make-subspace", "write a named subspace basis to a subspace file");
  add_family_options(make_subspace_cmd, fam, "bell|ghz-w|ghz-w-rotated|dicke|antisym|upb-complement|ghz-shifted|qudit-dicke");
  make_subspace_cmd->add_option("--out", common.out, "output file (default stdout)");

  auto* measure_cmd = app.add_subcommand("measure", "evaluate an entanglement measure on a state");
  measure_cmd->add_option("--state", state_file, "state file")->required()->check(CLI::ExistingFile);
  measure_cmd->add_option("--kind", measure_text, "gm|ggm|er:R|producibility:K|gme-er:R")->required();
  measure_cmd->add_option("--out", common.out, "output file (default stdout)");
  add_common(measure_cmd, common, true, false);

  auto* check_cmd = app.add_subcommand("check", "apply the subspace criterion (exit 0 Detected, 3 NotDetected)");
  check_cmd->add_option("--subspace", subspace_file, "subspace file")->required()->check(CLI::ExistingFile);
  auto* claim_opt = check_cmd->add_option("--claim", claim_text, "ces|ges|rank:R|depth:K");
  auto* cmeasure_opt = check_cmd->add_option("--measure", measure_text, "measure to use instead of a claim");
  claim_opt->excludes(cmeasure_opt);
  check_cmd->add_option("--out", common.out, "output file (default stdout)");
  add_common(check_cmd, common, true, false);

  auto* oracle_cmd = app.add_subcommand("oracle", "minimal entanglement over a subspace by direct search");
  oracle_cmd->add_option("--subspace", subspace_file, "subspace file")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--measure", measure_text, "gm|ggm|er:R|gme-er:R|producibility:K")->required();
  oracle_cmd->add_option("--method", method, "seesaw|grid|hybrid")
      ->capture_default_str()
      ->check(CLI::IsMember({"seesaw", "grid", "hybrid"}));
  oracle_cmd->add_option("--resolution", resolution, "grid resolution (>= 64)")->capture_default_str();
  oracle_cmd->add_option("--out", common.out, "output file (default stdout)");
  add_common(oracle_cmd, common, true, false);

  auto* fig1_cmd = app.add_subcommand("fig1", "qubit Dicke CES thresholds -> fig1.csv");
  fig1_cmd->add_option("--nmax", nmax, "largest N")->default_val(400);
  fig1_cmd->add_flag("--odd", odd, "include odd N (central pair extension)");
  fig1_cmd->add_option("--out-dir", out_dir, "output directory (default $SUBSPACE_ENT_OUT_DIR or .)");
  add_common(fig1_cmd, common, false, true);

  auto* fig2_cmd = app.add_subcommand("fig2", "antisymmetric detection region -> fig2.csv");
  fig2_cmd->add_option("--dmax", dmax, "largest local dimension")->default_val(50);
  fig2_cmd->add_option("--out-dir", out_dir, "output directory (default $SUBSPACE_ENT_OUT_DIR or .)");
  add_common(fig2_cmd, common, false, true);

  auto* fig3_cmd = app.add_subcommand("fig3", "qudit Dicke GES dimensions, 3<=N<=10, 3<=d<=11 -> fig3.csv");
  int fig3_nmin = kGesMinSites, fig3_nmax = kGesMaxSites, fig3_dmax = kGesMaxLevels;
  fig3_cmd->add_option("--nmin", fig3_nmin, "smallest N")->capture_default_str();
  fig3_cmd->add_option("--nmax", fig3_nmax, "largest N")->capture_default_str();
  fig3_cmd->add_option("--dmin", dmin, "smallest d")->capture_default_str();
  fig3_cmd->add_option("--dmax", fig3_dmax, "largest d")->capture_default_str();
  fig3_cmd->add_option("--out-dir", out_dir, "output directory (default $SUBSPACE_ENT_OUT_DIR or .)");
  add_common(fig3_cmd, common, false, true);

  auto* figd_cmd = app.add_subcommand("figD", "maximal qudit Dicke GGM against N -> figD.csv");
  figd_cmd->add_option("--d", ds, "local dimensions, e.g. 3,4,5")->capture_default_str();
  int figd_nmax = 20;
  figd_cmd->add_option("--nmin", nmin, "smallest N")->capture_default_str();
  figd_cmd->add_option("--nmax", figd_nmax, "largest N")->capture_default_str();
  figd_cmd->add_option("--out-dir", out_dir, "output directory (default $SUBSPACE_ENT_OUT_DIR or .)");
  add_common(figd_cmd, common, false, true);

  auto* validate_cmd = app.add_subcommand("validate", "run the end-to-end checks");
  validate_cmd->add_option("--suite", suite, "quick|full")->capture_default_str()->check(CLI::IsMember({"quick", "full"}));
  validate_cmd->add_flag("--inject-fault", inject_fault, "negative control: corrupt the soundness bounds")->group("");
  validate_cmd->add_flag("--timing", timing, "include per-check run times");
  validate_cmd->add_option("--seed", common.seed, "master seed")->capture_default_str();
  validate_cmd->add_option("--threads", common.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  validate_cmd->add_option("--out", common.out, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.back()->help());
    return kExitUsage;
  }

  struct Progress {
    bool on;
    std::string name;
    std::ostream& err;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    ~Progress() {
      if (!on) return;
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      err << "subspace-ent " << name << ": finished in " << dt.count() << " s\n";
    }
  } progress{verbose, app.get_subcommands().front()->get_name(), err};
  if (verbose)
    err << "subspace-ent " << progress.name << ": seed " << common.seed << ", threads " << common.threads << '\n';

  try {
    if (make_state_cmd->parsed()) {
      std::ostringstream os;
      write_state(os, make_state(fam));
      emit_text(os.str(), common.out, out);
      return kExitOk;
    }
    if (make_subspace_cmd->parsed()) {
      std::ostringstream os;
      write_subspace(os, make_subspace(fam));
      emit_text(os.str(), common.out, out);
      return kExitOk;
    }
    if (measure_cmd->parsed()) {
      const auto psi = load_state(state_file);
      const auto spec = MeasureSpec::parse(measure_text).resolved(psi.sites());
      emit_json(measure_json(psi, spec, evaluate(psi, spec, common.config())), common.out, out);
      return kExitOk;
    }
    if (check_cmd->parsed()) {
      if (claim_text.empty() && measure_text.empty()) {
        err << "check: give --claim or --measure\n" << check_cmd->help();
        return kExitUsage;
      }
      const auto v = load_subspace(subspace_file);
      const auto r = claim_text.empty() ? check_subspace(v, MeasureSpec::parse(measure_text), common.config())
                                        : check_subspace(v, Claim::parse(claim_text), common.config());
      emit_json(report_json(v, r), common.out, out);
      return r.detected() ? kExitOk : kExitNotDetected;
    }
    if (oracle_cmd->parsed()) {
      const auto v = load_subspace(subspace_file);
      const auto spec = MeasureSpec::parse(measure_text);
      GridOptions grid;
      grid.resolution = resolution;
      OracleResult r;
      if (method == "seesaw") r = min_subspace_entanglement(v, spec, common.config());
      else if (method == "grid") r = min_entanglement_grid_2d(v, spec, common.config(), grid);
      else r = min_subspace_entanglement_hybrid(v, spec, common.config(), grid);
      emit_json(oracle_json(v, r), common.out, out);
      return kExitOk;
    }
    if (fig1_cmd->parsed()) {
      emit_json(write_sweep(fig1_sweep(nmax, odd, common.threads), common, out_dir), "", out);
      return kExitOk;
    }
    if (fig2_cmd->parsed()) {
      emit_json(write_sweep(fig2_sweep(dmax), common, out_dir), "", out);
      return kExitOk;
    }
    if (fig3_cmd->parsed()) {
      emit_json(write_sweep(fig3_sweep(fig3_nmin, fig3_nmax, dmin, fig3_dmax, common.threads), common, out_dir), "", out);
      return kExitOk;
    }
    if (figd_cmd->parsed()) {
      const auto dlist = parse_int_list(ds);
      emit_json(write_sweep(figD_sweep(dlist, nmin, figd_nmax, common.threads), common, out_dir), "", out);
      return kExitOk;
    }
    if (validate_cmd->parsed()) {
      validation::Options o;
      o.quick = suite == "quick";
      o.inject_fault = inject_fault;
      o.seed = common.seed;
      o.threads = common.threads;
      const auto results = validation::run_all(o);
      json j = document("validate");
      j["suite"] = suite;
      bool all = true;
      json checks = json::array();
      for (const auto& r : results) {
        json c;
        c["id"] = r.id;
        c["name"] = r.name;
        c["passed"] = r.passed;
        c["detail"] = r.detail;
        if (timing) c["seconds"] = r.seconds;
        checks.push_back(c);
        if (!r.passed) {
          all = false;
          err << "FAILED check " << r.id << " (" << r.name << "): " << r.detail << '\n';
        }
      }
      j["passed"] = all;
      j["checks"] = checks;
      emit_json(j, common.out, out);
      return all ? kExitOk : kExitRuntime;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace subspace_ent
