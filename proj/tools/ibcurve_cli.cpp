// ---------------------------------------------------------------------------
// ibcurve_cli.cpp
//
// Command-line front end, written entirely against the public C API.
//
//   ibcurve curve     INPUT --beta-lin lo:hi:n ... --out PREFIX
//   ibcurve analytic  INPUT (--talpha-grid N | --dib-envelope | --hard-front)
//   ibcurve verify    INPUT --eps ... [--theorems ...] --out PREFIX
//   ibcurve demo      [--classes K] [--inputs-per-class M] --out PREFIX
//
// Every run writes a PREFIX.manifest.json describing the command, its
// resolved parameters, and the produced files; re-running a manifest's
// command reproduces the outputs byte for byte.  Exit code 0 means clean,
// 1 means the command could not run, 2 means it ran but recorded failures
// (unsolved scan points or violated bounds).
// ---------------------------------------------------------------------------
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ibcurve.h"
#include "json.hpp"

namespace {

using nlohmann::json;

[[noreturn]] void die(const std::string& message) {
  std::fprintf(stderr, "ibcurve: %s\n", message.c_str());
  std::exit(1);
}

void check(ibc_status status) {
  if (status != IBC_OK) die(ibc_last_error());
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct JointHandle {
  ibc_joint* ptr = nullptr;
  ~JointHandle() { ibc_joint_free(ptr); }
};

struct ScanHandle {
  ibc_scan* ptr = nullptr;
  ~ScanHandle() { ibc_scan_free(ptr); }
};

struct TableHandle {
  ibc_table* ptr = nullptr;
  ~TableHandle() { ibc_table_free(ptr); }
};

struct BoundsHandle {
  ibc_bounds* ptr = nullptr;
  ~BoundsHandle() { ibc_bounds_free(ptr); }
};

std::string fingerprint(const ibc_joint* joint) {
  char buf[17];
  check(ibc_joint_fingerprint(joint, buf, sizeof buf));
  return buf;
}

ibc_objective parse_objective(const std::string& name) {
  static const std::map<std::string, ibc_objective> table = {
      {"ib-lagrangian", IBC_OBJECTIVE_IB_LAGRANGIAN},
      {"squared-ib", IBC_OBJECTIVE_SQUARED_IB},
      {"dib", IBC_OBJECTIVE_DIB},
      {"squared-dib", IBC_OBJECTIVE_SQUARED_DIB}};
  const auto it = table.find(name);
  if (it == table.end()) {
    die("unknown objective '" + name +
        "' (expected ib-lagrangian, squared-ib, dib, or squared-dib)");
  }
  return it->second;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_num(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') die(what + ": '" + text + "'");
  return v;
}

// "lo:hi:n" evenly spaced, linearly or in log space.
std::vector<double> parse_grid(const std::string& spec, bool log_space) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) die("grid must look like lo:hi:n, got '" + spec + "'");
  const double lo = parse_num(parts[0], "bad grid endpoint");
  const double hi = parse_num(parts[1], "bad grid endpoint");
  const long n = std::strtol(parts[2].c_str(), nullptr, 10);
  if (n < 1) die("grid needs at least one point");
  if (n == 1) {
    if (lo != hi) die("a one-point grid needs lo == hi");
    return {lo};
  }
  if (!(lo < hi)) die("grid needs lo < hi");
  std::vector<double> out;
  if (log_space) {
    if (!(lo > 0.0)) die("log grid needs lo > 0");
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (long i = 0; i < n; ++i) {
      out.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                       static_cast<double>(n - 1)));
    }
  } else {
    for (long i = 0; i < n; ++i) {
      out.push_back(lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(n - 1));
    }
  }
  return out;
}

std::vector<double> parse_list(const std::string& spec,
                               const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(spec, ',')) out.push_back(parse_num(part, what));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) die("write failed: " + path);
}

void write_manifest(const std::string& prefix, json doc) {
  doc["tool_version"] = ibc_version();
  write_file(prefix + ".manifest.json", doc.dump(2) + "\n");
}

// Solver options shared by the subcommands that run the solvers.
struct SolverFlags {
  int restarts = -1;
  int max_iters = -1;
  double tol = -1.0;
  int t_card = -1;
  double damping = -1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--restarts", restarts, "solver restarts per point");
    cmd->add_option("--max-iters", max_iters, "iteration cap per restart");
    cmd->add_option("--tol", tol, "convergence tolerance on the objective");
    cmd->add_option("--t-card", t_card,
                    "bottleneck alphabet size (0 picks |X|+1)");
    cmd->add_option("--damping", damping,
                    "weight smoothing for the squared objectives, in (0,1]");
  }

  ibc_solver_config resolve(std::uint64_t seed) const {
    ibc_solver_config cfg;
    ibc_solver_config_init(&cfg);
    cfg.seed = seed;
    if (restarts >= 0) cfg.restarts = restarts;
    if (max_iters >= 0) cfg.max_iters = max_iters;
    if (tol >= 0.0) cfg.tol = tol;
    if (t_card >= 0) cfg.t_cardinality = t_card;
    if (damping >= 0.0) cfg.damping = damping;
    return cfg;
  }

  json to_json(const ibc_solver_config& cfg) const {
    json j;
    j["restarts"] = cfg.restarts;
    j["max_iters"] = cfg.max_iters;
    j["tol"] = cfg.tol;
    j["t_cardinality"] = cfg.t_cardinality;
    j["damping"] = cfg.damping;
    return j;
  }
};

int run_curve(const std::string& input, const std::string& objective_name,
              const std::string& lin, const std::string& log,
              const std::string& list, const SolverFlags& flags,
              std::uint64_t seed, int workers, bool embed,
              const std::string& prefix) {
  int given = 0;
  given += !lin.empty();
  given += !log.empty();
  given += !list.empty();
  if (given != 1) die("give exactly one of --beta-lin, --beta-log, --betas");
  std::vector<double> betas;
  if (!lin.empty()) betas = parse_grid(lin, false);
  if (!log.empty()) betas = parse_grid(log, true);
  if (!list.empty()) betas = parse_list(list, "bad beta");

  JointHandle joint;
  check(ibc_joint_load(input.c_str(), &joint.ptr));

  const ibc_solver_config cfg = flags.resolve(seed);
  ScanHandle scan;
  check(ibc_scan_run(joint.ptr, parse_objective(objective_name), betas.data(),
                     static_cast<int>(betas.size()), &cfg, workers,
                     &scan.ptr));

  const std::string csv_path = prefix + ".csv";
  const std::string json_path = prefix + ".json";
  check(ibc_scan_write_csv(scan.ptr, csv_path.c_str()));
  check(ibc_scan_write_json(scan.ptr, json_path.c_str(), embed ? 1 : 0));

  json manifest;
  manifest["command"] = "curve";
  manifest["input"] = {{"path", input}, {"fingerprint", fingerprint(joint.ptr)}};
  manifest["seed"] = seed;
  manifest["params"] = flags.to_json(cfg);
  manifest["params"]["objective"] = objective_name;
  manifest["params"]["betas"] = betas;
  manifest["params"]["workers"] = workers;
  manifest["params"]["embed_encoders"] = embed;
  manifest["outputs"] = {csv_path, json_path};
  write_manifest(prefix, manifest);

  const int points = ibc_scan_num_points(scan.ptr);
  const int failed = ibc_scan_failed_count(scan.ptr);
  std::printf("scanned %d beta values (%d failed)\n", points, failed);
  std::printf("wrote %s, %s, %s.manifest.json\n", csv_path.c_str(),
              json_path.c_str(), prefix.c_str());
  return failed > 0 ? 2 : 0;
}

int run_analytic(const std::string& input, int talpha_grid, bool envelope,
                 bool hard_front, const std::string& prefix) {
  int given = 0;
  given += talpha_grid > 0;
  given += envelope;
  given += hard_front;
  if (given != 1) {
    die("give exactly one of --talpha-grid, --dib-envelope, --hard-front");
  }

  JointHandle joint;
  check(ibc_joint_load(input.c_str(), &joint.ptr));

  TableHandle table;
  std::string kind;
  if (talpha_grid > 0) {
    kind = "talpha";
    check(ibc_table_talpha(joint.ptr, talpha_grid, &table.ptr));
  } else if (envelope) {
    kind = "dib-envelope";
    check(ibc_table_dib_envelope(joint.ptr, 12, &table.ptr));
  } else {
    kind = "hard-front";
    check(ibc_table_hard_front(joint.ptr, 12, &table.ptr));
  }

  const std::string csv_path = prefix + ".csv";
  check(ibc_table_write_csv(table.ptr, csv_path.c_str()));

  json manifest;
  manifest["command"] = "analytic";
  manifest["input"] = {{"path", input}, {"fingerprint", fingerprint(joint.ptr)}};
  manifest["params"] = {{"kind", kind}};
  if (talpha_grid > 0) manifest["params"]["grid"] = talpha_grid;
  manifest["outputs"] = {csv_path};
  write_manifest(prefix, manifest);

  std::printf("wrote %s (%d rows), %s.manifest.json\n", csv_path.c_str(),
              ibc_table_rows(table.ptr), prefix.c_str());
  return 0;
}

int run_verify(const std::string& input, const std::string& theorems_spec,
               const std::string& eps_spec, int trials,
               const std::string& betas_spec, const SolverFlags& flags,
               std::uint64_t seed, const std::string& prefix) {
  std::vector<std::string> theorems;
  if (!theorems_spec.empty()) theorems = split(theorems_spec, ',');
  std::vector<const char*> theorem_ptrs;
  for (const auto& t : theorems) theorem_ptrs.push_back(t.c_str());

  const std::vector<double> eps = parse_list(eps_spec, "bad epsilon");
  std::vector<double> betas;
  if (!betas_spec.empty()) betas = parse_list(betas_spec, "bad beta");

  JointHandle joint;
  check(ibc_joint_load(input.c_str(), &joint.ptr));

  const ibc_solver_config cfg = flags.resolve(seed);
  BoundsHandle bounds;
  check(ibc_verify_run(joint.ptr,
                       theorem_ptrs.empty() ? nullptr : theorem_ptrs.data(),
                       static_cast<int>(theorem_ptrs.size()), eps.data(),
                       static_cast<int>(eps.size()), trials, seed,
                       betas.empty() ? nullptr : betas.data(),
                       static_cast<int>(betas.size()), &cfg, &bounds.ptr));

  const std::string csv_path = prefix + ".csv";
  check(ibc_bounds_write_csv(bounds.ptr, csv_path.c_str()));

  json manifest;
  manifest["command"] = "verify";
  manifest["input"] = {{"path", input}, {"fingerprint", fingerprint(joint.ptr)}};
  manifest["seed"] = seed;
  manifest["params"] = flags.to_json(cfg);
  manifest["params"]["theorems"] =
      theorems.empty() ? json::array({"all"}) : json(theorems);
  manifest["params"]["epsilons"] = eps;
  manifest["params"]["trials"] = trials;
  if (!betas.empty()) manifest["params"]["betas"] = betas;
  manifest["outputs"] = {csv_path};
  write_manifest(prefix, manifest);

  // Per-tag digest: a row counts as a violation only when it fails without
  // the inconclusive marker; lower-edge misses that a non-global solver can
  // cause are recorded but do not fail the run.
  struct Digest {
    int rows = 0;
    int violations = 0;
    int inconclusive = 0;
  };
  std::map<std::string, Digest> digests;
  const int n = ibc_bounds_num_rows(bounds.ptr);
  for (int i = 0; i < n; ++i) {
    const char* theorem = nullptr;
    const char* notes = nullptr;
    int holds = 0;
    check(ibc_bounds_row(bounds.ptr, i, &theorem, nullptr, nullptr, nullptr,
                         nullptr, nullptr, nullptr, &holds, &notes));
    Digest& d = digests[theorem];
    ++d.rows;
    const bool inconclusive =
        std::string(notes).find("inconclusive") != std::string::npos;
    if (inconclusive) ++d.inconclusive;
    if (!holds && !inconclusive) ++d.violations;
  }
  int violations = 0;
  for (const auto& [tag, d] : digests) {
    std::printf("%s: %d rows, %d violations, %d inconclusive\n", tag.c_str(),
                d.rows, d.violations, d.inconclusive);
    violations += d.violations;
  }
  std::printf("wrote %s, %s.manifest.json\n", csv_path.c_str(),
              prefix.c_str());
  if (violations > 0) {
    std::fprintf(stderr, "ibcurve: %d bound violations recorded\n",
                 violations);
    return 2;
  }
  return 0;
}

int run_demo(int classes, int per_class, std::uint64_t seed, int workers,
             const std::string& prefix) {
  if (classes < 2) die("demo needs at least two classes");
  if (per_class < 1) die("demo needs at least one input per class");
  const int nx = classes * per_class;

  std::vector<int> f(nx);
  std::vector<double> p_x(nx, 1.0 / nx);
  for (int x = 0; x < nx; ++x) f[x] = x % classes;

  JointHandle joint;
  check(ibc_joint_deterministic(f.data(), p_x.data(), nx, classes,
                                &joint.ptr));

  std::vector<double> betas;
  for (int i = 0; i < 9; ++i) betas.push_back(0.1 + 0.1 * i);

  ibc_solver_config cfg;
  ibc_solver_config_init(&cfg);
  cfg.seed = seed;

  ScanHandle scan;
  check(ibc_scan_run(joint.ptr, IBC_OBJECTIVE_IB_LAGRANGIAN, betas.data(),
                     static_cast<int>(betas.size()), &cfg, workers,
                     &scan.ptr));

  const std::string csv_path = prefix + ".csv";
  check(ibc_scan_write_csv(scan.ptr, csv_path.c_str()));

  const double h_y = std::log(static_cast<double>(classes));
  std::string summary;
  summary += "synthetic deterministic joint: |X|=" + std::to_string(nx) +
             ", |Y|=" + std::to_string(classes) + ", uniform inputs\n";
  summary += "H(Y) = " + fmt12(h_y) +
             " nats; the trade-off curve is min{r, H(Y)} with corner (" +
             fmt12(h_y) + ", " + fmt12(h_y) + ")\n\n";

  const int points = ibc_scan_num_points(scan.ptr);
  for (int i = 0; i < points; ++i) {
    double beta = 0.0;
    ibc_report report;
    int ok = 0;
    int converged = 0;
    check(ibc_scan_point(scan.ptr, i, &beta, &report, nullptr, nullptr,
                         &converged, nullptr, &ok));
    if (!ok) {
      summary += "beta=" + fmt12(beta) + ": failed\n";
      continue;
    }
    summary += "beta=" + fmt12(beta) + ": i_xt=" + fmt12(report.i_xt) +
               ", i_yt=" + fmt12(report.i_yt) +
               (converged ? "" : " (not converged)") + "\n";
  }

  // Small instances admit an exhaustive cross-check: no scan point may sit
  // meaningfully above the searched front.  The grid shrinks at four inputs
  // to keep the row-tuple enumeration affordable.
  bool checked = false;
  double max_excess = 0.0;
  if (nx <= 4) {
    checked = true;
    const int grid = nx <= 3 ? 21 : 11;
    TableHandle front;
    check(ibc_table_brute_force(joint.ptr, 3, grid, &front.ptr));
    const int rows = ibc_table_rows(front.ptr);
    for (int i = 0; i < points; ++i) {
      ibc_report report;
      int ok = 0;
      check(ibc_scan_point(scan.ptr, i, nullptr, &report, nullptr, nullptr,
                           nullptr, nullptr, &ok));
      if (!ok) continue;
      double best = 0.0;
      for (int r = 0; r < rows; ++r) {
        double ix = 0.0;
        double iy = 0.0;
        check(ibc_table_cell(front.ptr, r, 0, &ix));
        check(ibc_table_cell(front.ptr, r, 1, &iy));
        if (ix <= report.i_xt + 1e-9 && iy > best) best = iy;
      }
      max_excess = std::max(max_excess, report.i_yt - best);
    }
    summary += "\nexhaustive cross-check: max i_yt excess over the searched "
               "front = " +
               fmt12(max_excess) + "\n";
  }

  const std::string summary_path = prefix + "_summary.txt";
  write_file(summary_path, summary);

  json manifest;
  manifest["command"] = "demo";
  manifest["input"] = {{"synthetic",
                        {{"classes", classes},
                         {"inputs_per_class", per_class},
                         {"fingerprint", fingerprint(joint.ptr)}}}};
  manifest["seed"] = seed;
  manifest["params"] = {{"betas", betas}, {"workers", workers}};
  manifest["outputs"] = {csv_path, summary_path};
  write_manifest(prefix, manifest);

  std::printf("%s", summary.c_str());
  std::printf("wrote %s, %s, %s.manifest.json\n", csv_path.c_str(),
              summary_path.c_str(), prefix.c_str());
  const int failed = ibc_scan_failed_count(scan.ptr);
  if (checked && max_excess > 0.05) {
    std::fprintf(stderr, "ibcurve: scan exceeds the exhaustive front\n");
    return 2;
  }
  return failed > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"information-bottleneck trade-off curves for finite joints"};
  app.require_subcommand(1);

  std::string input;
  std::string prefix;
  std::uint64_t seed = 0x5eedba5eULL;
  int workers = 1;

  // curve
  auto* curve = app.add_subcommand(
      "curve", "solve a beta scan and write the trade-off points");
  std::string objective_name = "ib-lagrangian";
  std::string beta_lin;
  std::string beta_log;
  std::string beta_list;
  bool embed = false;
  SolverFlags curve_flags;
  curve->add_option("input", input, "joint distribution (.csv or .json)")
      ->required();
  curve->add_option("--objective", objective_name,
                    "ib-lagrangian, squared-ib, dib, or squared-dib");
  curve->add_option("--beta-lin", beta_lin, "linear beta grid lo:hi:n");
  curve->add_option("--beta-log", beta_log, "log-spaced beta grid lo:hi:n");
  curve->add_option("--betas", beta_list, "explicit increasing beta list");
  curve_flags.attach(curve);
  curve->add_option("--seed", seed, "master seed")->envname("IBCURVE_SEED");
  curve->add_option("--workers", workers, "parallel scan workers")
      ->envname("IBCURVE_WORKERS");
  curve->add_flag("--embed-encoders", embed,
                  "include winning encoders in the JSON output");
  curve->add_option("--out", prefix, "output path prefix")->required();

  // analytic
  auto* analytic = app.add_subcommand(
      "analytic", "closed-form constructions for deterministic joints");
  int talpha_grid = 0;
  bool envelope = false;
  bool hard_front = false;
  analytic->add_option("input", input, "joint distribution (.csv or .json)")
      ->required();
  analytic->add_option("--talpha-grid", talpha_grid,
                       "erasure-family sweep with N alphas");
  analytic->add_flag("--dib-envelope", envelope,
                     "step envelope over hard clusterings");
  analytic->add_flag("--hard-front", hard_front,
                     "information coordinates of every hard clustering");
  analytic->add_option("--out", prefix, "output path prefix")->required();

  // verify
  auto* verify = app.add_subcommand(
      "verify", "check the perturbation bounds on sampled joints");
  std::string theorems_spec;
  std::string eps_spec;
  std::string betas_spec;
  int trials = 10;
  SolverFlags verify_flags;
  verify->add_option("input", input, "deterministic base joint")->required();
  verify->add_option("--theorems", theorems_spec,
                     "comma list from a1,a2,a3,a4,a5,issue3 (default all)");
  verify->add_option("--eps", eps_spec, "comma list of l1 radii in [0, 1/2]")
      ->required();
  verify->add_option("--trials", trials, "perturbation samples per epsilon");
  verify->add_option("--betas", betas_spec,
                     "trade-off weights for the localization checks");
  verify_flags.attach(verify);
  verify->add_option("--seed", seed, "master seed")->envname("IBCURVE_SEED");
  verify->add_option("--out", prefix, "output path prefix")->required();

  // demo
  auto* demo = app.add_subcommand(
      "demo", "build a synthetic deterministic joint and scan it");
  int classes = 4;
  int per_class = 3;
  demo->add_option("--classes", classes, "number of y classes");
  demo->add_option("--inputs-per-class", per_class, "x symbols per class");
  demo->add_option("--seed", seed, "master seed")->envname("IBCURVE_SEED");
  demo->add_option("--workers", workers, "parallel scan workers")
      ->envname("IBCURVE_WORKERS");
  demo->add_option("--out", prefix, "output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  if (curve->parsed()) {
    return run_curve(input, objective_name, beta_lin, beta_log, beta_list,
                     curve_flags, seed, workers, embed, prefix);
  }
  if (analytic->parsed()) {
    return run_analytic(input, talpha_grid, envelope, hard_front, prefix);
  }
  if (verify->parsed()) {
    return run_verify(input, theorems_spec, eps_spec, trials, betas_spec,
                      verify_flags, seed, prefix);
  }
  return run_demo(classes, per_class, seed, workers, prefix);
}
