// ---------------------------------------------------------------------------
// serialize.hpp
//
// File formats for joints, encoders, scan results, bound reports, and the
// small numeric tables produced by the closed-form constructions.
//
// Conventions: result tables are CSV with 12 significant digits; probability
// matrices round-trip at full double precision (17 significant digits).
// Labeled grids put y (or t) labels on the first row and x labels in the
// first column.  Malformed input raises ParseError with a row and column
// location; file-system trouble raises IoError.
// ---------------------------------------------------------------------------
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/bottleneck.hpp"
#include "core/constructs.hpp"
#include "core/perturb.hpp"
#include "core/solvers.hpp"

namespace ibcurve {

std::string format_sig12(double v);  // %.12g
std::string format_exact(double v);  // %.17g

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::string joint_to_csv(const JointXY& joint);
JointXY joint_from_csv(const std::string& text);

// JSON form: {"x_labels": [...], "y_labels": [...], "p": [row-major]}.
std::string joint_to_json(const JointXY& joint);
JointXY joint_from_json(const std::string& text);

// Dispatch on the file extension: ".json" is JSON, everything else CSV.
JointXY load_joint(const std::string& path);
void save_joint(const JointXY& joint, const std::string& path);

std::string encoder_to_csv(const Encoder& encoder,
                           const std::vector<std::string>& in_labels);
Encoder encoder_from_csv(const std::string& text,
                         std::vector<std::string>* in_labels = nullptr);

// Scan results.  CSV columns are fixed:
//   beta,i_xt,i_yt,h_t,objective,iterations,converged,restart_index
// Failed points keep their beta and carry nan values with restart_index -1.
std::string scan_to_csv(const ScanResult& scan);

struct ScanRow {
  double beta = 0.0;
  double i_xt = 0.0;
  double i_yt = 0.0;
  double h_t = 0.0;
  double objective = 0.0;
  long iterations = 0;
  int converged = 0;
  int restart_index = 0;
};

std::vector<ScanRow> scan_rows_from_csv(const std::string& text);
std::string scan_rows_to_csv(const std::vector<ScanRow>& rows);

// JSON mirror of the scan, optionally embedding the winning encoder of each
// point as {"t_labels": [...], "q": [row-major]}.
std::string scan_to_json(const ScanResult& scan, bool embed_encoders);

// Bound reports.  CSV columns are fixed:
//   theorem,epsilon_target,epsilon_actual,y_card,measured,bound,margin,
//   holds,notes
// Notes have commas and newlines replaced so rows stay machine-splittable.
std::string bounds_to_csv(const std::vector<BoundReport>& reports);

// A small all-numeric table with named columns.
struct Table {
  std::vector<std::string> columns;
  int rows = 0;
  std::vector<double> data;  // row-major, rows x columns.size()

  double at(int r, int c) const {
    return data[static_cast<std::size_t>(r) * columns.size() + c];
  }
};

std::string table_to_csv(const Table& table);

// Erasure-family sweep: alpha, i_xt, i_yt, h_t at n evenly spaced alphas.
Table talpha_table(const JointXY& joint, int n);

// Step envelope of the deterministic bottleneck: h_t, i_yt per level.
Table dib_envelope_table(const JointXY& joint,
                         int max_classes = kMaxEnumClasses);

// Hard-clustering front: h_t, i_xt, i_yt per partition of the classes.
Table hard_front_table(const JointXY& joint, int max_classes = kMaxEnumClasses);

// Exhaustively searched trade-off front: i_xt, i_yt.
Table brute_force_table(const JointXY& joint, int t_cardinality,
                        int grid_per_row);

}  // namespace ibcurve
