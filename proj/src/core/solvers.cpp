#include "core/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "core/constructs.hpp"
#include "core/infotheory.hpp"

namespace ibcurve {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Floor applied to posteriors inside update scores only.  It keeps KL terms
// finite so iterates can move between near-deterministic configurations;
// the leak it induces at an equilibrium weight b is exp(ln(floor)/b), far
// below every tolerance in use.  Reported quantities never see it.
constexpr double kScoreFloor = 1e-12;
constexpr double kBetaEffFloor = 1e-6;

// Mix-in weight of the uniform row in the canonical restart-0 encoder.
constexpr double kInitSmoothing = 0.05;

// Minimum objective gain for a hard-solver reassignment to be accepted.
constexpr double kMoveGain = 1e-13;

struct Problem {
  int nx = 0;
  int ny = 0;
  std::vector<double> p_x;
  std::vector<double> p_y;
  // Nonzero (y, p(x,y)) pairs per x; deterministic joints have one per row.
  std::vector<std::vector<std::pair<int, double>>> rows;
  // Nonzero (y, p(y|x)) pairs per x.
  std::vector<std::vector<std::pair<int, double>>> cond;
  double h_y = 0.0;
  double i_xy = 0.0;
};

Problem make_problem(const JointXY& joint) {
  Problem pb;
  pb.nx = joint.num_x();
  pb.ny = joint.num_y();
  pb.p_x = joint.x_marginal();
  pb.p_y = joint.y_marginal();
  pb.rows.resize(pb.nx);
  pb.cond.resize(pb.nx);
  for (int x = 0; x < pb.nx; ++x) {
    for (int y = 0; y < pb.ny; ++y) {
      const double v = joint.p(x, y);
      if (v > kZeroTol) {
        pb.rows[x].emplace_back(y, v);
        pb.cond[x].emplace_back(y, v / pb.p_x[x]);
      }
    }
  }
  pb.h_y = joint.entropy_y();
  pb.i_xy = info::mutual_information(joint.p);
  return pb;
}

SolverConfig resolve_config(const JointXY& joint, const SolverConfig& cfg) {
  SolverConfig out = cfg;
  if (!(out.beta >= 0.0) || !std::isfinite(out.beta)) {
    throw std::invalid_argument("solver: beta must be finite and >= 0");
  }
  if (out.t_cardinality == 0) out.t_cardinality = joint.num_x() + 1;
  if (out.t_cardinality < 1) {
    throw std::invalid_argument("solver: t_cardinality must be >= 1");
  }
  if (out.max_iters < 1) {
    throw std::invalid_argument("solver: max_iters must be >= 1");
  }
  if (!(out.tol > 0.0)) {
    throw std::invalid_argument("solver: tol must be > 0");
  }
  if (out.restarts < 1) {
    throw std::invalid_argument("solver: restarts must be >= 1");
  }
  if (!(out.damping > 0.0 && out.damping <= 1.0)) {
    throw std::invalid_argument("solver: damping must lie in (0, 1]");
  }
  return out;
}

// Joints with I(X;Y) = 0 have nothing to trade off; every objective is
// maximized by the constant encoder.
SolveResult degenerate_result(const JointXY& joint, Objective objective,
                              const SolverConfig& cfg) {
  Mat q(joint.num_x(), cfg.t_cardinality);
  for (int x = 0; x < joint.num_x(); ++x) q(x, 0) = 1.0;
  SolveResult res;
  res.encoder = make_encoder(std::move(q));
  res.report = evaluate(joint, res.encoder);
  res.objective = objective_value(res.report, objective, cfg.beta);
  res.iterations = 0;
  res.converged = true;
  res.restart_index = 0;
  res.restart_log.push_back(
      RestartOutcome{res.report, res.objective, 0, true});
  return res;
}

// ---------------------------------------------------------------------------
// Soft solvers: alternating self-consistent updates.
// ---------------------------------------------------------------------------

struct SoftState {
  int nt = 0;
  Mat q;                       // nx x nt encoder
  std::vector<double> p_t;     // t occupancy
  std::vector<double> log_pt;  // ln p_t where occupied
  Mat log_d;                   // nt x ny, ln(max(posterior, floor))
  std::vector<char> occupied;
  BottleneckReport report{};
};

// Occupancy, posterior logs, and the information-plane report of the
// current encoder, all in one pass.
void soft_stats(const Problem& pb, SoftState& st) {
  const int nx = pb.nx, ny = pb.ny, nt = st.nt;
  st.p_t.assign(nt, 0.0);
  Mat p_ty(nt, ny);
  double sum_q_lnq = 0.0;  // sum_x p(x) sum_t q ln q
  for (int x = 0; x < nx; ++x) {
    const double px = pb.p_x[x];
    double row_lnq = 0.0;
    for (int t = 0; t < nt; ++t) {
      const double qv = st.q(x, t);
      if (qv <= kZeroTol) continue;
      st.p_t[t] += px * qv;
      row_lnq += qv * std::log(qv);
      for (const auto& [y, pxy] : pb.rows[x]) p_ty(t, y) += pxy * qv;
    }
    sum_q_lnq += px * row_lnq;
  }

  double h_t = 0.0;
  for (int t = 0; t < nt; ++t) {
    if (st.p_t[t] > kZeroTol) h_t -= st.p_t[t] * std::log(st.p_t[t]);
  }
  double h_ty = 0.0;
  for (double v : p_ty.a) {
    if (v > kZeroTol) h_ty -= v * std::log(v);
  }

  st.report.i_xt = std::max(0.0, sum_q_lnq + h_t);
  st.report.i_yt = std::max(0.0, h_t + pb.h_y - h_ty);
  st.report.h_t = h_t;
  st.report.h_y = pb.h_y;

  st.occupied.assign(nt, 0);
  st.log_pt.assign(nt, 0.0);
  st.log_d = Mat(nt, ny);
  const double log_floor = std::log(kScoreFloor);
  for (int t = 0; t < nt; ++t) {
    if (st.p_t[t] <= 0.0) continue;
    st.occupied[t] = 1;
    st.log_pt[t] = std::log(st.p_t[t]);
    for (int y = 0; y < ny; ++y) {
      const double post = p_ty(t, y) / st.p_t[t];
      st.log_d(t, y) = (post > kScoreFloor) ? std::log(post) : log_floor;
    }
  }
}

// One self-consistent update at inverse weight inv_b = 1/beta_eff.  The KL
// term enters through sum_y p(y|x) ln d(t,y); the row entropy of p(y|x) is
// constant per x and cancels in the softmax.
void soft_update(const Problem& pb, double inv_b, SoftState& st) {
  const int nx = pb.nx, nt = st.nt;
  std::vector<double> score(nt);
  for (int x = 0; x < nx; ++x) {
    double best = -kInf;
    for (int t = 0; t < nt; ++t) {
      if (!st.occupied[t]) {
        score[t] = -kInf;
        continue;
      }
      double dot = 0.0;
      for (const auto& [y, pyx] : pb.cond[x]) dot += pyx * st.log_d(t, y);
      score[t] = st.log_pt[t] + inv_b * dot;
      if (score[t] > best) best = score[t];
    }
    double norm = 0.0;
    for (int t = 0; t < nt; ++t) {
      const double e = (score[t] > -kInf) ? std::exp(score[t] - best) : 0.0;
      st.q(x, t) = e;
      norm += e;
    }
    for (int t = 0; t < nt; ++t) st.q(x, t) /= norm;
  }
}

// beta = 0: each x goes to the occupied t whose posterior is closest in KL
// (pure prediction, no occupancy factor); ties to the lowest t.
void soft_update_match(const Problem& pb, SoftState& st) {
  const int nx = pb.nx, nt = st.nt;
  for (int x = 0; x < nx; ++x) {
    double best = -kInf;
    int arg = -1;
    for (int t = 0; t < nt; ++t) {
      if (!st.occupied[t]) continue;
      double dot = 0.0;
      for (const auto& [y, pyx] : pb.cond[x]) dot += pyx * st.log_d(t, y);
      if (dot > best) {
        best = dot;
        arg = t;
      }
    }
    for (int t = 0; t < nt; ++t) st.q(x, t) = 0.0;
    st.q(x, arg) = 1.0;
  }
}

Mat canonical_soft_init(int nx, int nt) {
  Mat q(nx, nt, kInitSmoothing / nt);
  for (int x = 0; x < nx; ++x) q(x, x % nt) += 1.0 - kInitSmoothing;
  return q;
}

Mat random_soft_init(int nx, int nt, Rng& rng) {
  Mat q(nx, nt);
  for (int x = 0; x < nx; ++x) rng.fill_simplex(q.row(x));
  return q;
}

RestartOutcome run_soft_restart(const Problem& pb, Objective objective,
                                const SolverConfig& cfg, Mat init,
                                Mat* q_out) {
  const bool squared = objective == Objective::SquaredIb;
  SoftState st;
  st.nt = init.cols;
  st.q = std::move(init);
  soft_stats(pb, st);
  double obj = objective_value(st.report, objective, cfg.beta);
  double beta_eff = squared
                        ? std::max(2.0 * cfg.beta * st.report.i_xt,
                                   kBetaEffFloor)
                        : cfg.beta;

  RestartOutcome out{st.report, obj, cfg.max_iters, false};
  for (int step = 1; step <= cfg.max_iters; ++step) {
    if (squared) {
      const double target =
          std::max(2.0 * cfg.beta * st.report.i_xt, kBetaEffFloor);
      beta_eff = cfg.damping * target + (1.0 - cfg.damping) * beta_eff;
    }
    if (cfg.beta == 0.0) {
      soft_update_match(pb, st);
    } else {
      soft_update(pb, 1.0 / beta_eff, st);
    }
    soft_stats(pb, st);
    const double next = objective_value(st.report, objective, cfg.beta);
    const bool settled = std::abs(next - obj) < cfg.tol;
    obj = next;
    if (settled) {
      out.iterations = step;
      out.converged = true;
      break;
    }
  }
  out.report = st.report;
  out.objective = obj;
  *q_out = std::move(st.q);
  return out;
}

SolveResult solve_soft(const JointXY& joint, Objective objective,
                       const SolverConfig& raw_cfg) {
  const SolverConfig cfg = resolve_config(joint, raw_cfg);
  const Problem pb = make_problem(joint);
  if (pb.i_xy <= kMassTol) return degenerate_result(joint, objective, cfg);

  const int nt = cfg.t_cardinality;
  SolveResult res;
  res.objective = -kInf;
  res.restart_index = -1;
  Mat best_q;
  for (int r = 0; r < cfg.restarts; ++r) {
    Mat init;
    if (r == 0) {
      init = canonical_soft_init(pb.nx, nt);
    } else {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      init = random_soft_init(pb.nx, nt, rng);
    }
    Mat q;
    RestartOutcome outcome =
        run_soft_restart(pb, objective, cfg, std::move(init), &q);
    res.restart_log.push_back(outcome);
    if (outcome.objective > res.objective) {
      res.objective = outcome.objective;
      res.restart_index = r;
      best_q = std::move(q);
    }
  }

  res.encoder = make_encoder(std::move(best_q));
  res.report = evaluate(joint, res.encoder);
  res.objective = objective_value(res.report, objective, cfg.beta);
  res.iterations = res.restart_log[res.restart_index].iterations;
  res.converged = res.restart_log[res.restart_index].converged;
  return res;
}

// ---------------------------------------------------------------------------
// Hard solvers: sequential exact-gain reassignment sweeps.
// ---------------------------------------------------------------------------

struct HardState {
  int nt = 0;
  std::vector<int> assign;  // t per x
  std::vector<int> count;   // x count per t; occupancy is integral
  std::vector<double> m;    // cluster mass
  Mat M;                    // nt x ny cluster-class mass
  std::vector<double> ci;   // per-cluster contribution to I(Y;T)
  std::vector<double> ch;   // per-cluster contribution to H(T)
  double i_yt = 0.0;
  double h_t = 0.0;
};

double cluster_i(const Problem& pb, std::span<const double> row, double mass) {
  if (mass <= kZeroTol) return 0.0;
  double c = 0.0;
  for (int y = 0; y < pb.ny; ++y) {
    const double v = row[y];
    if (v > kZeroTol) c += v * std::log(v / (mass * pb.p_y[y]));
  }
  return c;
}

double cluster_h(double mass) {
  return (mass > kZeroTol) ? -mass * std::log(mass) : 0.0;
}

void hard_refresh(const Problem& pb, HardState& st) {
  st.m.assign(st.nt, 0.0);
  st.count.assign(st.nt, 0);
  st.M = Mat(st.nt, pb.ny);
  for (int x = 0; x < pb.nx; ++x) {
    const int t = st.assign[x];
    st.count[t] += 1;
    st.m[t] += pb.p_x[x];
    for (const auto& [y, pxy] : pb.rows[x]) st.M(t, y) += pxy;
  }
  st.ci.assign(st.nt, 0.0);
  st.ch.assign(st.nt, 0.0);
  st.i_yt = 0.0;
  st.h_t = 0.0;
  for (int t = 0; t < st.nt; ++t) {
    st.ci[t] = cluster_i(pb, st.M.row(t), st.m[t]);
    st.ch[t] = cluster_h(st.m[t]);
    st.i_yt += st.ci[t];
    st.h_t += st.ch[t];
  }
}

double hard_objective(Objective objective, double beta, double i, double h) {
  return (objective == Objective::SquaredDib) ? i - beta * h * h
                                              : i - beta * h;
}

RestartOutcome run_hard_restart(const Problem& pb, Objective objective,
                                const SolverConfig& cfg,
                                std::vector<int> init,
                                std::vector<int>* assign_out) {
  HardState st;
  st.nt = cfg.t_cardinality;
  st.assign = std::move(init);
  hard_refresh(pb, st);
  double obj = hard_objective(objective, cfg.beta, st.i_yt, st.h_t);

  std::vector<double> row_without(pb.ny), row_with(pb.ny);
  RestartOutcome out{{}, obj, cfg.max_iters, false};
  for (int sweep = 1; sweep <= cfg.max_iters; ++sweep) {
    bool moved = false;
    for (int x = 0; x < pb.nx; ++x) {
      const int t0 = st.assign[x];
      const double px = pb.p_x[x];

      // Cluster t0 with x removed.
      for (int y = 0; y < pb.ny; ++y) row_without[y] = st.M(t0, y);
      for (const auto& [y, pxy] : pb.rows[x]) row_without[y] -= pxy;
      const double m0 = (st.count[t0] == 1) ? 0.0 : st.m[t0] - px;
      if (st.count[t0] == 1) {
        std::fill(row_without.begin(), row_without.end(), 0.0);
      }
      const double ci0 = cluster_i(pb, row_without, m0);
      const double ch0 = cluster_h(m0);
      const double base_i = st.i_yt - st.ci[t0] + ci0;
      const double base_h = st.h_t - st.ch[t0] + ch0;

      // Candidates: every occupied cluster plus one spare empty slot; all
      // empty slots are interchangeable, so only the lowest is tried.
      int best_t = t0;
      double best_obj = obj;
      int spare = -1;
      for (int t1 = 0; t1 < st.nt; ++t1) {
        const bool empty = (st.count[t1] == 0 || (t1 == t0 && m0 == 0.0));
        if (empty) {
          if (spare >= 0) continue;
          spare = t1;
        }
        if (t1 == t0) continue;
        for (int y = 0; y < pb.ny; ++y) row_with[y] = st.M(t1, y);
        for (const auto& [y, pxy] : pb.rows[x]) row_with[y] += pxy;
        const double m1 = st.m[t1] + px;
        const double cand_i = base_i - st.ci[t1] + cluster_i(pb, row_with, m1);
        const double cand_h = base_h - st.ch[t1] + cluster_h(m1);
        const double cand =
            hard_objective(objective, cfg.beta, cand_i, cand_h);
        if (cand > best_obj + kMoveGain) {
          best_obj = cand;
          best_t = t1;
        }
      }

      if (best_t != t0) {
        st.assign[x] = best_t;
        hard_refresh(pb, st);
        obj = hard_objective(objective, cfg.beta, st.i_yt, st.h_t);
        moved = true;
      }
    }
    if (!moved) {
      out.iterations = sweep;
      out.converged = true;
      break;
    }
  }
  out.objective = obj;
  *assign_out = std::move(st.assign);
  return out;
}

SolveResult solve_hard(const JointXY& joint, Objective objective,
                       const SolverConfig& raw_cfg) {
  const SolverConfig cfg = resolve_config(joint, raw_cfg);
  const Problem pb = make_problem(joint);
  if (pb.i_xy <= kMassTol) return degenerate_result(joint, objective, cfg);

  const int nt = cfg.t_cardinality;
  SolveResult res;
  res.objective = -kInf;
  res.restart_index = -1;
  std::vector<int> best_assign;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<int> init(pb.nx);
    if (r == 0) {
      for (int x = 0; x < pb.nx; ++x) init[x] = x % nt;
    } else {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      for (int x = 0; x < pb.nx; ++x) init[x] = rng.next_int(nt);
    }
    std::vector<int> assign;
    RestartOutcome outcome =
        run_hard_restart(pb, objective, cfg, std::move(init), &assign);
    // Per-restart reports come from the public evaluator so recovery
    // statistics are exact.
    Mat q(pb.nx, nt);
    for (int x = 0; x < pb.nx; ++x) q(x, assign[x]) = 1.0;
    Encoder enc = make_encoder(std::move(q));
    outcome.report = evaluate(joint, enc);
    outcome.objective =
        objective_value(outcome.report, objective, cfg.beta);
    res.restart_log.push_back(outcome);
    if (outcome.objective > res.objective) {
      res.objective = outcome.objective;
      res.restart_index = r;
      best_assign = std::move(assign);
    }
  }

  Mat q(pb.nx, nt);
  for (int x = 0; x < pb.nx; ++x) q(x, best_assign[x]) = 1.0;
  res.encoder = make_encoder(std::move(q));
  res.report = evaluate(joint, res.encoder);
  res.objective = objective_value(res.report, objective, cfg.beta);
  res.iterations = res.restart_log[res.restart_index].iterations;
  res.converged = res.restart_log[res.restart_index].converged;
  return res;
}

}  // namespace

SolveResult solve_ib_lagrangian(const JointXY& joint,
                                const SolverConfig& cfg) {
  return solve_soft(joint, Objective::IbLagrangian, cfg);
}

SolveResult solve_squared_ib(const JointXY& joint, const SolverConfig& cfg) {
  return solve_soft(joint, Objective::SquaredIb, cfg);
}

SolveResult solve_dib(const JointXY& joint, const SolverConfig& cfg) {
  return solve_hard(joint, Objective::Dib, cfg);
}

SolveResult solve_squared_dib(const JointXY& joint, const SolverConfig& cfg) {
  return solve_hard(joint, Objective::SquaredDib, cfg);
}

SolveResult solve(const JointXY& joint, Objective objective,
                  const SolverConfig& cfg) {
  switch (objective) {
    case Objective::IbLagrangian:
      return solve_ib_lagrangian(joint, cfg);
    case Objective::SquaredIb:
      return solve_squared_ib(joint, cfg);
    case Objective::Dib:
      return solve_dib(joint, cfg);
    case Objective::SquaredDib:
      return solve_squared_dib(joint, cfg);
  }
  throw std::invalid_argument("solve: unknown objective");
}

int ScanResult::failed_count() const {
  int n = 0;
  for (const auto& p : points) {
    if (!p.ok) ++n;
  }
  return n;
}

ScanResult scan(const JointXY& joint, Objective objective,
                const std::vector<double>& betas, const SolverConfig& cfg,
                int workers) {
  if (betas.empty()) {
    throw std::invalid_argument("scan: empty beta grid");
  }
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (!std::isfinite(betas[i]) || betas[i] < 0.0) {
      throw std::invalid_argument("scan: beta values must be finite and >= 0");
    }
    if (i > 0 && betas[i] <= betas[i - 1]) {
      throw std::invalid_argument("scan: beta grid must be strictly increasing");
    }
  }

  ScanResult out;
  out.objective = objective;
  out.joint_fingerprint = joint_fingerprint(joint);
  out.points.resize(betas.size());

  auto run_point = [&](std::size_t i) {
    ScanPoint& pt = out.points[i];
    pt.beta = betas[i];
    SolverConfig point_cfg = cfg;
    point_cfg.beta = betas[i];
    point_cfg.seed = derive_seed(cfg.seed, i);
    try {
      pt.result = solve(joint, objective, point_cfg);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  };

  const int n = static_cast<int>(betas.size());
  const int nw = std::max(1, std::min(workers, n));
  if (nw == 1) {
    for (int i = 0; i < n; ++i) run_point(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const int i = next.fetch_add(1);
          if (i >= n) return;
          run_point(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

std::string joint_fingerprint(const JointXY& joint) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const unsigned char* bytes, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(joint.num_x()),
                                 static_cast<std::uint64_t>(joint.num_y())};
  mix(reinterpret_cast<const unsigned char*>(dims), sizeof(dims));
  mix(reinterpret_cast<const unsigned char*>(joint.p.a.data()),
      joint.p.a.size() * sizeof(double));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::vector<std::pair<double, double>> brute_force_front(const JointXY& joint,
                                                         int t_cardinality,
                                                         int grid_per_row) {
  if (t_cardinality < 1) {
    throw std::invalid_argument("brute_force_front: t_cardinality must be >= 1");
  }
  if (grid_per_row < 2) {
    throw std::invalid_argument("brute_force_front: grid_per_row must be >= 2");
  }
  if (joint.num_x() > 4) {
    throw ResourceLimitError("brute_force_front: |X| > 4");
  }
  if (t_cardinality > 3) {
    throw ResourceLimitError("brute_force_front: t_cardinality > 3");
  }
  if (grid_per_row > 21) {
    throw ResourceLimitError("brute_force_front: grid_per_row > 21");
  }

  const int nx = joint.num_x(), ny = joint.num_y(), nt = t_cardinality;
  const int steps = grid_per_row - 1;

  // All rows on the simplex grid, with each row's sum q ln q precomputed.
  std::vector<std::vector<double>> rows;
  std::vector<double> row_neg_h;
  {
    std::vector<int> k(nt, 0);
    std::vector<double> lntab(steps + 1, 0.0);
    for (int i = 1; i <= steps; ++i) {
      lntab[i] = std::log(static_cast<double>(i) / steps);
    }
    // Compositions of `steps` into nt parts via an odometer.
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == nt - 1) {
        k[pos] = left;
        std::vector<double> row(nt);
        double nh = 0.0;
        for (int t = 0; t < nt; ++t) {
          row[t] = static_cast<double>(k[t]) / steps;
          if (k[t] > 0) nh += row[t] * lntab[k[t]];
        }
        rows.push_back(std::move(row));
        row_neg_h.push_back(nh);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        k[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, steps);
  }

  const auto p_x = joint.x_marginal();
  const auto p_y = joint.y_marginal();
  const double h_y = joint.entropy_y();

  // Upper-left Pareto staircase maintained online: i_xt -> i_yt, strictly
  // increasing in both coordinates.  Insertions must clear the left
  // neighbour by kFrontMargin, so the staircase resolves prediction values
  // at that granularity and stays compact; stored coordinates are exact.
  constexpr double kFrontMargin = 1e-4;
  std::map<double, double> front;
  auto offer = [&front, kFrontMargin](double ix, double iy) {
    auto it = front.upper_bound(ix);
    if (it != front.begin()) {
      auto prev = std::prev(it);
      if (prev->second >= iy - kFrontMargin) return;  // no real improvement
      if (prev->first == ix) {
        prev->second = iy;
        it = std::next(prev);
      } else {
        it = std::next(front.emplace_hint(it, ix, iy));
      }
    } else {
      it = std::next(front.emplace_hint(it, ix, iy));
    }
    while (it != front.end() && it->second <= iy + kFrontMargin) {
      it = front.erase(it);
    }
  };

  // True when no stored point with a smaller or equal i_xt already reaches
  // iy; candidates capped below an existing point cannot change the front.
  auto could_improve = [&front](double ix, double iy_cap) {
    auto it = front.upper_bound(ix);
    if (it == front.begin()) return true;
    return std::prev(it)->second < iy_cap - kFrontMargin;
  };

  // Depth-first sweep over row tuples.  Prefixes carry only the t marginal
  // and the conditional-entropy sum; the t-y table is rebuilt at a leaf and
  // only after the candidate survives the data-processing cap
  // i_yt <= min{i_xt, H(Y)}, which rejects the bulk of the tuples once the
  // staircase has filled in.
  std::vector<int> choice(nx, 0);
  std::vector<std::vector<double>> level_p_t(
      nx + 1, std::vector<double>(nt, 0.0));
  std::vector<double> level_sum(nx + 1, 0.0);
  std::vector<double> p_ty(static_cast<std::size_t>(nt) * ny);
  const int num_rows = static_cast<int>(rows.size());

  std::function<void(int)> sweep = [&](int x) {
    if (x == nx) {
      const auto& p_t = level_p_t[nx];
      double h_t = 0.0;
      for (int t = 0; t < nt; ++t) {
        if (p_t[t] > kZeroTol) h_t -= p_t[t] * std::log(p_t[t]);
      }
      const double i_xt = std::max(0.0, level_sum[nx] + h_t);
      if (!could_improve(i_xt, std::min(i_xt, h_y))) return;

      std::fill(p_ty.begin(), p_ty.end(), 0.0);
      for (int px = 0; px < nx; ++px) {
        const auto& row = rows[choice[px]];
        for (int t = 0; t < nt; ++t) {
          if (row[t] == 0.0) continue;
          for (int y = 0; y < ny; ++y) {
            p_ty[static_cast<std::size_t>(t) * ny + y] +=
                joint.p(px, y) * row[t];
          }
        }
      }
      double h_ty = 0.0;
      for (double v : p_ty) {
        if (v > kZeroTol) h_ty -= v * std::log(v);
      }
      const double i_yt = std::max(0.0, h_t + h_y - h_ty);
      offer(i_xt, i_yt);
      return;
    }
    for (int r = 0; r < num_rows; ++r) {
      choice[x] = r;
      const auto& row = rows[r];
      for (int t = 0; t < nt; ++t) {
        level_p_t[x + 1][t] = level_p_t[x][t] + p_x[x] * row[t];
      }
      level_sum[x + 1] = level_sum[x] + p_x[x] * row_neg_h[r];
      sweep(x + 1);
    }
  };
  sweep(0);

  std::vector<std::pair<double, double>> out;
  out.reserve(front.size());
  for (const auto& [ix, iy] : front) out.emplace_back(ix, iy);
  return out;
}

double front_value_at(const std::vector<std::pair<double, double>>& front,
                      double r) {
  double best = 0.0;
  for (const auto& [ix, iy] : front) {
    if (ix <= r + 1e-12 && iy > best) best = iy;
  }
  return best;
}

std::vector<std::array<double, 3>> hard_cluster_front(const JointXY& joint,
                                                      int max_classes) {
  auto f_opt = is_deterministic(joint);
  if (!f_opt) {
    throw std::invalid_argument("hard_cluster_front: joint is not deterministic");
  }
  const auto& f = *f_opt;
  const auto p_x = joint.x_marginal();
  const auto p_y = joint.y_marginal();
  const int ny = joint.num_y();

  std::vector<std::array<double, 3>> out;
  for_each_hard_clustering(
      ny,
      [&](const HardClustering& g) {
        std::vector<double> m(ny, 0.0);
        int nt = 0;
        for (int y = 0; y < ny; ++y) {
          m[g[y]] += p_y[y];
          nt = std::max(nt, g[y] + 1);
        }
        double h_t = 0.0;
        for (int t = 0; t < nt; ++t) {
          if (m[t] > kZeroTol) h_t -= m[t] * std::log(m[t]);
        }
        double i_xt = 0.0;
        for (int x = 0; x < joint.num_x(); ++x) {
          if (p_x[x] > kZeroTol) i_xt -= p_x[x] * std::log(m[g[f[x]]]);
        }
        double i_yt = 0.0;
        for (int y = 0; y < ny; ++y) {
          if (p_y[y] > kZeroTol) i_yt -= p_y[y] * std::log(m[g[y]]);
        }
        out.push_back({h_t, i_xt, i_yt});
      },
      max_classes);
  return out;
}

}  // namespace ibcurve
