// ---------------------------------------------------------------------------
// solvers.hpp
//
// Alternating self-consistent solvers for the four trade-off objectives,
// a multi-point scan driver, and two exhaustive oracles used to certify
// solver output on small instances.
//
// Soft solvers (ib-lagrangian, squared-ib) iterate
//     q(t)    <- sum_x p(x) q(t|x)
//     p(y|t)  <- Bayes posterior of the current encoder
//     q(t|x)  ~  q(t) * exp(-KL(p(y|x) || p(y|t)) / beta)
// with beta = 0 treated as pure posterior matching (hard argmin of the KL,
// no occupancy factor).  The squared variant re-weights each step with an
// effective beta_eff = 2 * beta * I(X;T), damped between steps, which
// steers the iteration to the stationarity condition of the squared
// objective.
//
// Hard solvers (dib, squared-dib) run sequential reassignment sweeps: each
// x in turn moves to the t (occupied or one spare empty slot) that most
// increases the exact objective, with cluster statistics updated per move
// and ties resolved to the lowest t index.  Scoring candidate moves against
// the actual post-move objective, rather than against frozen posteriors,
// is what lets sweeps cross between hard clusterings; frozen-posterior
// scores are blocked by infinite KL terms whenever the joint is
// deterministic.
//
// Determinism: identical (joint, config, seed) input produces bit-identical
// results.  Restart 0 always starts from a canonical spread-init encoder
// (x -> t = x mod |T|, lightly smoothed for the soft solvers); remaining
// restarts draw from the seeded generator.
// ---------------------------------------------------------------------------
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/bottleneck.hpp"

namespace ibcurve {

struct SolverConfig {
  double beta = 0.0;
  int t_cardinality = 0;  // 0 resolves to |X| + 1
  int max_iters = 10000;
  double tol = 1e-10;  // convergence threshold on the objective change
  int restarts = 20;
  std::uint64_t seed = 0x5eedba5eULL;
  double damping = 0.5;  // step weight for the beta_eff update
};

// Light per-restart record kept for diagnostics and recovery statistics.
struct RestartOutcome {
  BottleneckReport report;
  double objective;
  int iterations;
  bool converged;
};

struct SolveResult {
  Encoder encoder;
  BottleneckReport report;
  double objective;
  int iterations;
  bool converged;
  int restart_index;  // which restart produced the returned encoder
  std::vector<RestartOutcome> restart_log;
};

SolveResult solve_ib_lagrangian(const JointXY& joint, const SolverConfig& cfg);
SolveResult solve_squared_ib(const JointXY& joint, const SolverConfig& cfg);
SolveResult solve_dib(const JointXY& joint, const SolverConfig& cfg);
SolveResult solve_squared_dib(const JointXY& joint, const SolverConfig& cfg);

SolveResult solve(const JointXY& joint, Objective objective,
                  const SolverConfig& cfg);

struct ScanPoint {
  double beta;
  SolveResult result;
  bool ok;
  std::string error;  // empty when ok
};

struct ScanResult {
  Objective objective;
  std::string joint_fingerprint;
  std::vector<ScanPoint> points;

  int failed_count() const;
};

// Solves every beta in the strictly increasing grid.  Each point gets its
// own seed derived from cfg.seed and the point index, so results do not
// depend on the worker count.  Per-point failures are recorded, not thrown.
ScanResult scan(const JointXY& joint, Objective objective,
                const std::vector<double>& betas, const SolverConfig& cfg,
                int workers = 1);

// FNV-1a over the joint's dimensions and probability bytes.
std::string joint_fingerprint(const JointXY& joint);

// Exhaustive search over encoders whose rows live on the simplex grid with
// grid_per_row levels per coordinate (row entries are multiples of
// 1/(grid_per_row - 1)).  Returns the upper-left Pareto staircase of
// (i_xt, i_yt) pairs in increasing i_xt order.  Guards: |X| <= 4,
// t_cardinality <= 3, grid_per_row <= 21.
std::vector<std::pair<double, double>> brute_force_front(const JointXY& joint,
                                                         int t_cardinality,
                                                         int grid_per_row);

// Largest i_yt over front points with i_xt <= r (0 when none qualify).
double front_value_at(const std::vector<std::pair<double, double>>& front,
                      double r);

// Exact evaluation of every hard clustering of the class labels of a
// deterministic joint: (h_t, i_xt, i_yt) per partition, enumeration order.
// Guard: |Y| <= 12.
std::vector<std::array<double, 3>> hard_cluster_front(
    const JointXY& joint, int max_classes = 12);

}  // namespace ibcurve
