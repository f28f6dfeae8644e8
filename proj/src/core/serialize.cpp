#include "core/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ibcurve {

namespace {

using nlohmann::json;

std::string fmt(const char* spec, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Splits into lines, tolerating CRLF endings and a trailing newline.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty() && cur.back() == '\r') cur.pop_back();
  if (!cur.empty()) lines.push_back(std::move(cur));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

[[noreturn]] void fail_at(int row, int col, const std::string& what) {
  throw ParseError("row " + std::to_string(row + 1) + ", column " +
                   std::to_string(col + 1) + ": " + what);
}

double parse_double(const std::string& field, int row, int col) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    fail_at(row, col, "not a number: '" + field + "'");
  }
  return v;
}

long parse_long(const std::string& field, int row, int col) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    fail_at(row, col, "not an integer: '" + field + "'");
  }
  return v;
}

void check_label(const std::string& label) {
  if (label.find(',') != std::string::npos ||
      label.find('\n') != std::string::npos) {
    throw std::invalid_argument("label contains a comma or newline: '" +
                                label + "'");
  }
}

// Shared layout of joint and encoder grids: column labels on the first row
// (leading corner cell empty), one labeled row of doubles per input symbol.
std::string grid_to_csv(const Mat& m, const std::vector<std::string>& rows,
                        const std::vector<std::string>& cols) {
  std::string out;
  for (const auto& label : cols) {
    check_label(label);
    out += ',';
    out += label;
  }
  out += '\n';
  for (int r = 0; r < m.rows; ++r) {
    check_label(rows[r]);
    out += rows[r];
    for (int c = 0; c < m.cols; ++c) {
      out += ',';
      out += format_exact(m(r, c));
    }
    out += '\n';
  }
  return out;
}

struct Grid {
  Mat m;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

Grid grid_from_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.size() < 2) throw ParseError("grid needs a header and a row");
  const auto header = split_fields(lines[0]);
  if (header.size() < 2) fail_at(0, 0, "header needs at least one column");
  if (!header[0].empty()) {
    fail_at(0, 0, "header must start with an empty corner cell");
  }
  Grid g;
  g.col_labels.assign(header.begin() + 1, header.end());
  const int cols = static_cast<int>(g.col_labels.size());
  const int rows = static_cast<int>(lines.size()) - 1;
  g.m = Mat(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const auto fields = split_fields(lines[r + 1]);
    if (static_cast<int>(fields.size()) != cols + 1) {
      fail_at(r + 1, 0,
              "expected " + std::to_string(cols + 1) + " fields, got " +
                  std::to_string(fields.size()));
    }
    g.row_labels.push_back(fields[0]);
    for (int c = 0; c < cols; ++c) {
      g.m(r, c) = parse_double(fields[c + 1], r + 1, c + 1);
    }
  }
  return g;
}

json labels_to_json(const std::vector<std::string>& labels) {
  json arr = json::array();
  for (const auto& l : labels) arr.push_back(l);
  return arr;
}

std::vector<std::string> labels_from_json(const json& arr, const char* name) {
  if (!arr.is_array()) {
    throw ParseError(std::string(name) + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) {
      throw ParseError(std::string(name) + " must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

json mat_to_json(const Mat& m) {
  json arr = json::array();
  for (double v : m.a) arr.push_back(v);
  return arr;
}

std::string sanitize_note(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

constexpr const char* kScanHeader =
    "beta,i_xt,i_yt,h_t,objective,iterations,converged,restart_index";

Table table_from_pairs(std::vector<std::string> columns,
                       const std::vector<std::pair<double, double>>& rows) {
  Table t;
  t.columns = std::move(columns);
  t.rows = static_cast<int>(rows.size());
  for (const auto& [a, b] : rows) {
    t.data.push_back(a);
    t.data.push_back(b);
  }
  return t;
}

}  // namespace

std::string format_sig12(double v) { return fmt("%.12g", v); }
std::string format_exact(double v) { return fmt("%.17g", v); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string joint_to_csv(const JointXY& joint) {
  return grid_to_csv(joint.p, joint.x_labels, joint.y_labels);
}

JointXY joint_from_csv(const std::string& text) {
  Grid g = grid_from_csv(text);
  return make_joint(std::move(g.m), std::move(g.row_labels),
                    std::move(g.col_labels));
}

std::string joint_to_json(const JointXY& joint) {
  json doc;
  doc["x_labels"] = labels_to_json(joint.x_labels);
  doc["y_labels"] = labels_to_json(joint.y_labels);
  doc["p"] = mat_to_json(joint.p);
  return doc.dump(2) + "\n";
}

JointXY joint_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object() || !doc.contains("x_labels") ||
      !doc.contains("y_labels") || !doc.contains("p")) {
    throw ParseError("joint JSON needs x_labels, y_labels, and p");
  }
  auto x_labels = labels_from_json(doc["x_labels"], "x_labels");
  auto y_labels = labels_from_json(doc["y_labels"], "y_labels");
  const auto& p = doc["p"];
  if (!p.is_array()) throw ParseError("p must be a flat row-major array");
  const std::size_t need = x_labels.size() * y_labels.size();
  if (p.size() != need) {
    throw ParseError("p has " + std::to_string(p.size()) +
                     " entries, expected " + std::to_string(need));
  }
  Mat m(static_cast<int>(x_labels.size()), static_cast<int>(y_labels.size()));
  for (std::size_t i = 0; i < need; ++i) {
    if (!p[i].is_number()) throw ParseError("p entries must be numbers");
    m.a[i] = p[i].get<double>();
  }
  return make_joint(std::move(m), std::move(x_labels), std::move(y_labels));
}

namespace {
bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

JointXY load_joint(const std::string& path) {
  const std::string text = read_text_file(path);
  return has_suffix(path, ".json") ? joint_from_json(text)
                                   : joint_from_csv(text);
}

void save_joint(const JointXY& joint, const std::string& path) {
  write_text_file(path, has_suffix(path, ".json") ? joint_to_json(joint)
                                                  : joint_to_csv(joint));
}

std::string encoder_to_csv(const Encoder& encoder,
                           const std::vector<std::string>& in_labels) {
  if (static_cast<int>(in_labels.size()) != encoder.num_in()) {
    throw std::invalid_argument("encoder CSV needs one label per input row");
  }
  return grid_to_csv(encoder.q, in_labels, encoder.t_labels);
}

Encoder encoder_from_csv(const std::string& text,
                         std::vector<std::string>* in_labels) {
  Grid g = grid_from_csv(text);
  if (in_labels) *in_labels = g.row_labels;
  return make_encoder(std::move(g.m), std::move(g.col_labels));
}

std::string scan_to_csv(const ScanResult& scan) {
  std::string out = kScanHeader;
  out += '\n';
  for (const auto& point : scan.points) {
    out += format_sig12(point.beta);
    if (point.ok) {
      const auto& r = point.result;
      out += ',' + format_sig12(r.report.i_xt);
      out += ',' + format_sig12(r.report.i_yt);
      out += ',' + format_sig12(r.report.h_t);
      out += ',' + format_sig12(r.objective);
      out += ',' + std::to_string(r.iterations);
      out += point.result.converged ? ",1" : ",0";
      out += ',' + std::to_string(r.restart_index);
    } else {
      out += ",nan,nan,nan,nan,0,0,-1";
    }
    out += '\n';
  }
  return out;
}

std::vector<ScanRow> scan_rows_from_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != kScanHeader) {
    throw ParseError(std::string("expected header '") + kScanHeader + "'");
  }
  std::vector<ScanRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 8) {
      fail_at(static_cast<int>(i), 0,
              "expected 8 fields, got " + std::to_string(fields.size()));
    }
    const int r = static_cast<int>(i);
    ScanRow row;
    row.beta = parse_double(fields[0], r, 0);
    row.i_xt = parse_double(fields[1], r, 1);
    row.i_yt = parse_double(fields[2], r, 2);
    row.h_t = parse_double(fields[3], r, 3);
    row.objective = parse_double(fields[4], r, 4);
    row.iterations = parse_long(fields[5], r, 5);
    row.converged = static_cast<int>(parse_long(fields[6], r, 6));
    row.restart_index = static_cast<int>(parse_long(fields[7], r, 7));
    rows.push_back(row);
  }
  return rows;
}

std::string scan_rows_to_csv(const std::vector<ScanRow>& rows) {
  std::string out = kScanHeader;
  out += '\n';
  for (const auto& row : rows) {
    out += format_sig12(row.beta);
    out += ',' + format_sig12(row.i_xt);
    out += ',' + format_sig12(row.i_yt);
    out += ',' + format_sig12(row.h_t);
    out += ',' + format_sig12(row.objective);
    out += ',' + std::to_string(row.iterations);
    out += ',' + std::to_string(row.converged);
    out += ',' + std::to_string(row.restart_index);
    out += '\n';
  }
  return out;
}

std::string scan_to_json(const ScanResult& scan, bool embed_encoders) {
  json doc;
  doc["objective"] = objective_to_string(scan.objective);
  doc["fingerprint"] = scan.joint_fingerprint;
  json points = json::array();
  for (const auto& point : scan.points) {
    json p;
    p["beta"] = point.beta;
    p["ok"] = point.ok;
    if (point.ok) {
      const auto& r = point.result;
      p["i_xt"] = r.report.i_xt;
      p["i_yt"] = r.report.i_yt;
      p["h_t"] = r.report.h_t;
      p["objective"] = r.objective;
      p["iterations"] = r.iterations;
      p["converged"] = r.converged;
      p["restart_index"] = r.restart_index;
      if (embed_encoders) {
        json enc;
        enc["t_labels"] = labels_to_json(r.encoder.t_labels);
        enc["q"] = mat_to_json(r.encoder.q);
        p["encoder"] = std::move(enc);
      }
    } else {
      p["error"] = point.error;
    }
    points.push_back(std::move(p));
  }
  doc["points"] = std::move(points);
  return doc.dump(2) + "\n";
}

std::string bounds_to_csv(const std::vector<BoundReport>& reports) {
  std::string out =
      "theorem,epsilon_target,epsilon_actual,y_card,measured,bound,margin,"
      "holds,notes\n";
  for (const auto& r : reports) {
    out += sanitize_note(r.theorem);
    out += ',' + format_sig12(r.epsilon_target);
    out += ',' + format_sig12(r.epsilon_actual);
    out += ',' + std::to_string(r.y_card);
    out += ',' + format_sig12(r.measured);
    out += ',' + format_sig12(r.bound);
    out += ',' + format_sig12(r.margin);
    out += r.holds ? ",1" : ",0";
    out += ',' + sanitize_note(r.notes);
    out += '\n';
  }
  return out;
}

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  const int cols = static_cast<int>(table.columns.size());
  for (int r = 0; r < table.rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) out += ',';
      out += format_sig12(table.at(r, c));
    }
    out += '\n';
  }
  return out;
}

Table talpha_table(const JointXY& joint, int n) {
  if (n < 2) throw std::invalid_argument("alpha sweep needs n >= 2");
  Table t;
  t.columns = {"alpha", "i_xt", "i_yt", "h_t"};
  t.rows = n;
  for (int i = 0; i < n; ++i) {
    const double alpha = static_cast<double>(i) / (n - 1);
    const auto report = evaluate(joint, t_alpha_encoder(alpha, joint));
    t.data.insert(t.data.end(),
                  {alpha, report.i_xt, report.i_yt, report.h_t});
  }
  return t;
}

Table dib_envelope_table(const JointXY& joint, int max_classes) {
  return table_from_pairs({"h_t", "i_yt"}, dib_envelope(joint, max_classes));
}

Table hard_front_table(const JointXY& joint, int max_classes) {
  Table t;
  t.columns = {"h_t", "i_xt", "i_yt"};
  for (const auto& row : hard_cluster_front(joint, max_classes)) {
    t.data.insert(t.data.end(), row.begin(), row.end());
    ++t.rows;
  }
  return t;
}

Table brute_force_table(const JointXY& joint, int t_cardinality,
                        int grid_per_row) {
  return table_from_pairs(
      {"i_xt", "i_yt"}, brute_force_front(joint, t_cardinality, grid_per_row));
}

}  // namespace ibcurve
