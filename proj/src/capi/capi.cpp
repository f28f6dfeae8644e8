// ---------------------------------------------------------------------------
// capi.cpp
//
// The extern "C" surface of the shared library.  Handles wrap the C++ value
// types; every entry point funnels through guard(), which converts the
// library's exception taxonomy into status codes and stores the message in
// a thread-local slot for ibc_last_error().
// ---------------------------------------------------------------------------
#include "ibcurve.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "core/bottleneck.hpp"
#include "core/constructs.hpp"
#include "core/perturb.hpp"
#include "core/serialize.hpp"
#include "core/solvers.hpp"

struct ibc_joint {
  ibcurve::JointXY v;
};
struct ibc_encoder {
  ibcurve::Encoder v;
};
struct ibc_scan {
  ibcurve::ScanResult v;
};
struct ibc_table {
  ibcurve::Table v;
};
struct ibc_bounds {
  std::vector<ibcurve::BoundReport> v;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
ibc_status guard(Fn&& fn) {
  try {
    fn();
    return IBC_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return IBC_ERR_INVALID_INPUT;
  } catch (const ibcurve::ParseError& e) {
    g_last_error = e.what();
    return IBC_ERR_PARSE;
  } catch (const ibcurve::ResourceLimitError& e) {
    g_last_error = e.what();
    return IBC_ERR_RESOURCE_LIMIT;
  } catch (const ibcurve::IoError& e) {
    g_last_error = e.what();
    return IBC_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return IBC_ERR_UNKNOWN;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return IBC_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown failure";
    return IBC_ERR_UNKNOWN;
  }
}

ibc_status invalid(const char* message) {
  g_last_error = message;
  return IBC_ERR_INVALID_INPUT;
}

ibcurve::Objective to_objective(ibc_objective objective) {
  switch (objective) {
    case IBC_OBJECTIVE_IB_LAGRANGIAN:
      return ibcurve::Objective::IbLagrangian;
    case IBC_OBJECTIVE_SQUARED_IB:
      return ibcurve::Objective::SquaredIb;
    case IBC_OBJECTIVE_DIB:
      return ibcurve::Objective::Dib;
    case IBC_OBJECTIVE_SQUARED_DIB:
      return ibcurve::Objective::SquaredDib;
  }
  throw std::invalid_argument("unknown objective code");
}

ibcurve::SolverConfig to_config(const ibc_solver_config* cfg) {
  ibcurve::SolverConfig out;
  if (!cfg) return out;
  out.beta = cfg->beta;
  out.t_cardinality = cfg->t_cardinality;
  out.max_iters = cfg->max_iters;
  out.tol = cfg->tol;
  out.restarts = cfg->restarts;
  out.seed = cfg->seed;
  out.damping = cfg->damping;
  return out;
}

ibc_report to_report(const ibcurve::BottleneckReport& r) {
  return ibc_report{r.i_xt, r.i_yt, r.h_t, r.h_y};
}

std::vector<ibcurve::Encoder> to_chain(const ibc_encoder* const* stages,
                                       int num_stages) {
  if (!stages || num_stages < 1) {
    throw std::invalid_argument("chain needs at least one stage");
  }
  std::vector<ibcurve::Encoder> chain;
  chain.reserve(num_stages);
  for (int i = 0; i < num_stages; ++i) {
    if (!stages[i]) throw std::invalid_argument("null stage in chain");
    chain.push_back(stages[i]->v);
  }
  return chain;
}

}  // namespace

extern "C" {

const char* ibc_version(void) { return "0.1.0"; }

const char* ibc_last_error(void) { return g_last_error.c_str(); }

/* --- joints ------------------------------------------------------------- */

ibc_status ibc_joint_load(const char* path, ibc_joint** out) {
  if (!path || !out) return invalid("null argument");
  return guard([&] { *out = new ibc_joint{ibcurve::load_joint(path)}; });
}

ibc_status ibc_joint_save(const ibc_joint* joint, const char* path) {
  if (!joint || !path) return invalid("null argument");
  return guard([&] { ibcurve::save_joint(joint->v, path); });
}

ibc_status ibc_joint_from_csv(const char* text, ibc_joint** out) {
  if (!text || !out) return invalid("null argument");
  return guard([&] { *out = new ibc_joint{ibcurve::joint_from_csv(text)}; });
}

ibc_status ibc_joint_from_json(const char* text, ibc_joint** out) {
  if (!text || !out) return invalid("null argument");
  return guard([&] { *out = new ibc_joint{ibcurve::joint_from_json(text)}; });
}

ibc_status ibc_joint_from_dense(const double* p, int num_x, int num_y,
                                ibc_joint** out) {
  if (!p || !out) return invalid("null argument");
  return guard([&] {
    if (num_x < 1 || num_y < 1) {
      throw std::invalid_argument("joint needs positive dimensions");
    }
    ibcurve::Mat m(num_x, num_y);
    std::memcpy(m.a.data(), p, m.a.size() * sizeof(double));
    *out = new ibc_joint{ibcurve::make_joint(std::move(m))};
  });
}

ibc_status ibc_joint_deterministic(const int* class_of, const double* p_x,
                                   int num_x, int num_classes,
                                   ibc_joint** out) {
  if (!class_of || !p_x || !out) return invalid("null argument");
  return guard([&] {
    if (num_x < 1) throw std::invalid_argument("need at least one x");
    std::vector<int> f(class_of, class_of + num_x);
    *out = new ibc_joint{ibcurve::joint_from_function(
        f, std::span<const double>(p_x, static_cast<std::size_t>(num_x)),
        num_classes)};
  });
}

int ibc_joint_num_x(const ibc_joint* joint) {
  return joint ? joint->v.num_x() : 0;
}

int ibc_joint_num_y(const ibc_joint* joint) {
  return joint ? joint->v.num_y() : 0;
}

ibc_status ibc_joint_entry(const ibc_joint* joint, int x, int y, double* out) {
  if (!joint || !out) return invalid("null argument");
  if (x < 0 || x >= joint->v.num_x() || y < 0 || y >= joint->v.num_y()) {
    return invalid("joint entry index out of range");
  }
  *out = joint->v.p(x, y);
  return IBC_OK;
}

int ibc_joint_is_deterministic(const ibc_joint* joint) {
  if (!joint) return 0;
  return ibcurve::is_deterministic(joint->v) ? 1 : 0;
}

ibc_status ibc_joint_fingerprint(const ibc_joint* joint, char* buf,
                                 size_t buf_len) {
  if (!joint || !buf) return invalid("null argument");
  if (buf_len < 17) return invalid("fingerprint buffer needs 17 bytes");
  return guard([&] {
    const std::string fp = ibcurve::joint_fingerprint(joint->v);
    std::snprintf(buf, buf_len, "%s", fp.c_str());
  });
}

void ibc_joint_free(ibc_joint* joint) { delete joint; }

/* --- encoders ------------------------------------------------------------ */

ibc_status ibc_encoder_from_dense(const double* q, int num_in, int num_t,
                                  ibc_encoder** out) {
  if (!q || !out) return invalid("null argument");
  return guard([&] {
    if (num_in < 1 || num_t < 1) {
      throw std::invalid_argument("encoder needs positive dimensions");
    }
    ibcurve::Mat m(num_in, num_t);
    std::memcpy(m.a.data(), q, m.a.size() * sizeof(double));
    *out = new ibc_encoder{ibcurve::make_encoder(std::move(m))};
  });
}

ibc_status ibc_encoder_identity(const ibc_joint* joint, ibc_encoder** out) {
  if (!joint || !out) return invalid("null argument");
  return guard([&] {
    const int n = joint->v.num_x();
    ibcurve::Mat m(n, n);
    for (int x = 0; x < n; ++x) m(x, x) = 1.0;
    *out = new ibc_encoder{
        ibcurve::make_encoder(std::move(m), joint->v.x_labels)};
  });
}

ibc_status ibc_encoder_collapse(const ibc_joint* joint, ibc_encoder** out) {
  if (!joint || !out) return invalid("null argument");
  return guard([&] {
    const auto f = ibcurve::is_deterministic(joint->v);
    if (!f) {
      throw std::invalid_argument("collapse needs a deterministic joint");
    }
    ibcurve::Mat m(joint->v.num_x(), joint->v.num_y());
    for (int x = 0; x < joint->v.num_x(); ++x) m(x, f->at(x)) = 1.0;
    *out = new ibc_encoder{
        ibcurve::make_encoder(std::move(m), joint->v.y_labels)};
  });
}

ibc_status ibc_encoder_erasure(const ibc_joint* joint, double alpha,
                               ibc_encoder** out) {
  if (!joint || !out) return invalid("null argument");
  return guard([&] {
    *out = new ibc_encoder{ibcurve::t_alpha_encoder(alpha, joint->v)};
  });
}

int ibc_encoder_num_in(const ibc_encoder* encoder) {
  return encoder ? encoder->v.num_in() : 0;
}

int ibc_encoder_num_t(const ibc_encoder* encoder) {
  return encoder ? encoder->v.num_t() : 0;
}

ibc_status ibc_encoder_entry(const ibc_encoder* encoder, int row, int t,
                             double* out) {
  if (!encoder || !out) return invalid("null argument");
  if (row < 0 || row >= encoder->v.num_in() || t < 0 ||
      t >= encoder->v.num_t()) {
    return invalid("encoder entry index out of range");
  }
  *out = encoder->v.q(row, t);
  return IBC_OK;
}

void ibc_encoder_free(ibc_encoder* encoder) { delete encoder; }

/* --- evaluation ----------------------------------------------------------- */

ibc_status ibc_evaluate(const ibc_joint* joint, const ibc_encoder* encoder,
                        ibc_report* out) {
  if (!joint || !encoder || !out) return invalid("null argument");
  return guard([&] { *out = to_report(ibcurve::evaluate(joint->v, encoder->v)); });
}

ibc_status ibc_chain_evaluate(const ibc_joint* joint,
                              const ibc_encoder* const* stages,
                              int num_stages, ibc_report* out_reports) {
  if (!joint || !out_reports) return invalid("null argument");
  return guard([&] {
    const auto reports =
        ibcurve::chain_evaluate(joint->v, to_chain(stages, num_stages));
    for (int i = 0; i < num_stages; ++i) out_reports[i] = to_report(reports[i]);
  });
}

ibc_status ibc_prediction_error(const ibc_joint* joint,
                                const ibc_encoder* const* stages,
                                int num_stages, double* out) {
  if (!joint || !out) return invalid("null argument");
  return guard([&] {
    *out = ibcurve::point_prediction_error(joint->v,
                                           to_chain(stages, num_stages));
  });
}

/* --- solving -------------------------------------------------------------- */

void ibc_solver_config_init(ibc_solver_config* cfg) {
  if (!cfg) return;
  const ibcurve::SolverConfig d;
  cfg->beta = d.beta;
  cfg->t_cardinality = d.t_cardinality;
  cfg->max_iters = d.max_iters;
  cfg->tol = d.tol;
  cfg->restarts = d.restarts;
  cfg->seed = d.seed;
  cfg->damping = d.damping;
}

ibc_status ibc_solve(const ibc_joint* joint, ibc_objective objective,
                     const ibc_solver_config* cfg, ibc_encoder** out_encoder,
                     ibc_report* out_report, double* out_objective,
                     int* out_iterations, int* out_converged,
                     int* out_restart_index) {
  if (!joint) return invalid("null argument");
  return guard([&] {
    ibcurve::SolveResult result =
        ibcurve::solve(joint->v, to_objective(objective), to_config(cfg));
    if (out_report) *out_report = to_report(result.report);
    if (out_objective) *out_objective = result.objective;
    if (out_iterations) *out_iterations = result.iterations;
    if (out_converged) *out_converged = result.converged ? 1 : 0;
    if (out_restart_index) *out_restart_index = result.restart_index;
    if (out_encoder) {
      *out_encoder = new ibc_encoder{std::move(result.encoder)};
    }
  });
}

/* --- beta scans ------------------------------------------------------------ */

ibc_status ibc_scan_run(const ibc_joint* joint, ibc_objective objective,
                        const double* betas, int num_betas,
                        const ibc_solver_config* cfg, int workers,
                        ibc_scan** out) {
  if (!joint || !betas || !out) return invalid("null argument");
  return guard([&] {
    if (num_betas < 1) throw std::invalid_argument("empty beta grid");
    std::vector<double> grid(betas, betas + num_betas);
    *out = new ibc_scan{ibcurve::scan(joint->v, to_objective(objective), grid,
                                      to_config(cfg), workers)};
  });
}

int ibc_scan_num_points(const ibc_scan* scan) {
  return scan ? static_cast<int>(scan->v.points.size()) : 0;
}

int ibc_scan_failed_count(const ibc_scan* scan) {
  return scan ? scan->v.failed_count() : 0;
}

ibc_status ibc_scan_point(const ibc_scan* scan, int index, double* out_beta,
                          ibc_report* out_report, double* out_objective,
                          int* out_iterations, int* out_converged,
                          int* out_restart_index, int* out_ok) {
  if (!scan) return invalid("null argument");
  if (index < 0 || index >= static_cast<int>(scan->v.points.size())) {
    return invalid("scan point index out of range");
  }
  const auto& point = scan->v.points[index];
  if (out_beta) *out_beta = point.beta;
  if (out_ok) *out_ok = point.ok ? 1 : 0;
  if (out_report) *out_report = to_report(point.result.report);
  if (out_objective) *out_objective = point.result.objective;
  if (out_iterations) *out_iterations = point.result.iterations;
  if (out_converged) *out_converged = point.result.converged ? 1 : 0;
  if (out_restart_index) *out_restart_index = point.result.restart_index;
  return IBC_OK;
}

ibc_status ibc_scan_write_csv(const ibc_scan* scan, const char* path) {
  if (!scan || !path) return invalid("null argument");
  return guard(
      [&] { ibcurve::write_text_file(path, ibcurve::scan_to_csv(scan->v)); });
}

ibc_status ibc_scan_write_json(const ibc_scan* scan, const char* path,
                               int embed_encoders) {
  if (!scan || !path) return invalid("null argument");
  return guard([&] {
    ibcurve::write_text_file(
        path, ibcurve::scan_to_json(scan->v, embed_encoders != 0));
  });
}

void ibc_scan_free(ibc_scan* scan) { delete scan; }

/* --- closed-form tables ----------------------------------------------------- */

ibc_status ibc_table_talpha(const ibc_joint* joint, int n, ibc_table** out) {
  if (!joint || !out) return invalid("null argument");
  return guard(
      [&] { *out = new ibc_table{ibcurve::talpha_table(joint->v, n)}; });
}

ibc_status ibc_table_dib_envelope(const ibc_joint* joint, int max_classes,
                                  ibc_table** out) {
  if (!joint || !out) return invalid("null argument");
  return guard([&] {
    *out = new ibc_table{ibcurve::dib_envelope_table(joint->v, max_classes)};
  });
}

ibc_status ibc_table_hard_front(const ibc_joint* joint, int max_classes,
                                ibc_table** out) {
  if (!joint || !out) return invalid("null argument");
  return guard([&] {
    *out = new ibc_table{ibcurve::hard_front_table(joint->v, max_classes)};
  });
}

ibc_status ibc_table_brute_force(const ibc_joint* joint, int t_cardinality,
                                 int grid_per_row, ibc_table** out) {
  if (!joint || !out) return invalid("null argument");
  return guard([&] {
    *out = new ibc_table{
        ibcurve::brute_force_table(joint->v, t_cardinality, grid_per_row)};
  });
}

int ibc_table_rows(const ibc_table* table) { return table ? table->v.rows : 0; }

int ibc_table_cols(const ibc_table* table) {
  return table ? static_cast<int>(table->v.columns.size()) : 0;
}

const char* ibc_table_column_name(const ibc_table* table, int col) {
  if (!table || col < 0 || col >= static_cast<int>(table->v.columns.size())) {
    return "";
  }
  return table->v.columns[col].c_str();
}

ibc_status ibc_table_cell(const ibc_table* table, int row, int col,
                          double* out) {
  if (!table || !out) return invalid("null argument");
  if (row < 0 || row >= table->v.rows || col < 0 ||
      col >= static_cast<int>(table->v.columns.size())) {
    return invalid("table cell index out of range");
  }
  *out = table->v.at(row, col);
  return IBC_OK;
}

ibc_status ibc_table_write_csv(const ibc_table* table, const char* path) {
  if (!table || !path) return invalid("null argument");
  return guard(
      [&] { ibcurve::write_text_file(path, ibcurve::table_to_csv(table->v)); });
}

void ibc_table_free(ibc_table* table) { delete table; }

/* --- perturbation-bound verification ----------------------------------------- */

ibc_status ibc_bound_cond_entropy(double epsilon, int y_card, double* out) {
  if (!out) return invalid("null argument");
  return guard([&] { *out = ibcurve::bound_cond_entropy(epsilon, y_card); });
}

ibc_status ibc_bound_mi_diff(double epsilon, int y_card, double* out) {
  if (!out) return invalid("null argument");
  return guard([&] { *out = ibcurve::bound_mi_diff(epsilon, y_card); });
}

ibc_status ibc_gamma_bound(double epsilon, int y_card, double* out) {
  if (!out) return invalid("null argument");
  return guard([&] { *out = ibcurve::gamma_bound(epsilon, y_card); });
}

ibc_status ibc_verify_run(const ibc_joint* base, const char* const* theorems,
                          int num_theorems, const double* epsilons,
                          int num_epsilons, int trials, uint64_t seed,
                          const double* betas, int num_betas,
                          const ibc_solver_config* solver, ibc_bounds** out) {
  if (!base || !epsilons || !out) return invalid("null argument");
  if (num_theorems > 0 && !theorems) return invalid("null theorem list");
  if (num_betas > 0 && !betas) return invalid("null beta list");
  return guard([&] {
    ibcurve::VerifyOptions options;
    for (int i = 0; i < num_theorems; ++i) {
      if (!theorems[i]) throw std::invalid_argument("null theorem tag");
      options.theorems.push_back(theorems[i]);
    }
    options.epsilons.assign(epsilons, epsilons + num_epsilons);
    options.trials = trials;
    options.seed = seed;
    if (num_betas > 0) options.betas.assign(betas, betas + num_betas);
    if (solver) options.solver = to_config(solver);
    *out = new ibc_bounds{ibcurve::run_verification(base->v, options)};
  });
}

int ibc_bounds_num_rows(const ibc_bounds* bounds) {
  return bounds ? static_cast<int>(bounds->v.size()) : 0;
}

int ibc_bounds_all_hold(const ibc_bounds* bounds) {
  if (!bounds) return 0;
  for (const auto& r : bounds->v) {
    if (!r.holds) return 0;
  }
  return 1;
}

int ibc_bounds_inconclusive_count(const ibc_bounds* bounds) {
  if (!bounds) return 0;
  int n = 0;
  for (const auto& r : bounds->v) {
    if (r.notes.find("inconclusive") != std::string::npos) ++n;
  }
  return n;
}

ibc_status ibc_bounds_row(const ibc_bounds* bounds, int index,
                          const char** out_theorem, double* out_eps_target,
                          double* out_eps_actual, int* out_y_card,
                          double* out_measured, double* out_bound,
                          double* out_margin, int* out_holds,
                          const char** out_notes) {
  if (!bounds) return invalid("null argument");
  if (index < 0 || index >= static_cast<int>(bounds->v.size())) {
    return invalid("bounds row index out of range");
  }
  const auto& r = bounds->v[index];
  if (out_theorem) *out_theorem = r.theorem.c_str();
  if (out_eps_target) *out_eps_target = r.epsilon_target;
  if (out_eps_actual) *out_eps_actual = r.epsilon_actual;
  if (out_y_card) *out_y_card = r.y_card;
  if (out_measured) *out_measured = r.measured;
  if (out_bound) *out_bound = r.bound;
  if (out_margin) *out_margin = r.margin;
  if (out_holds) *out_holds = r.holds ? 1 : 0;
  if (out_notes) *out_notes = r.notes.c_str();
  return IBC_OK;
}

ibc_status ibc_bounds_write_csv(const ibc_bounds* bounds, const char* path) {
  if (!bounds || !path) return invalid("null argument");
  return guard([&] {
    ibcurve::write_text_file(path, ibcurve::bounds_to_csv(bounds->v));
  });
}

void ibc_bounds_free(ibc_bounds* bounds) { delete bounds; }

} /* extern "C" */
