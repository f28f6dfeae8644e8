#include "core/bottleneck.hpp"

#include <cmath>
#include <stdexcept>

#include "core/infotheory.hpp"

namespace ibcurve {

namespace {

std::vector<std::string> default_labels(const char* prefix, int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

void check_label_text(const std::vector<std::string>& labels,
                      const char* who) {
  for (const auto& l : labels) {
    if (l.find(',') != std::string::npos ||
        l.find('\n') != std::string::npos) {
      throw std::invalid_argument(std::string(who) +
                                  ": labels must not contain ',' or newline");
    }
  }
}

}  // namespace

std::vector<double> JointXY::x_marginal() const {
  std::vector<double> m(num_x(), 0.0);
  for (int x = 0; x < num_x(); ++x) {
    for (int y = 0; y < num_y(); ++y) m[x] += p(x, y);
  }
  return m;
}

std::vector<double> JointXY::y_marginal() const {
  std::vector<double> m(num_y(), 0.0);
  for (int x = 0; x < num_x(); ++x) {
    for (int y = 0; y < num_y(); ++y) m[y] += p(x, y);
  }
  return m;
}

double JointXY::entropy_y() const {
  auto m = y_marginal();
  return info::entropy(m);
}

JointXY make_joint(Mat p, std::vector<std::string> x_labels,
                   std::vector<std::string> y_labels) {
  if (p.rows == 0 || p.cols == 0) {
    throw std::invalid_argument("make_joint: empty matrix");
  }
  double total = 0.0;
  for (double v : p.a) {
    if (v < -kZeroTol || !std::isfinite(v)) {
      throw std::invalid_argument(
          "make_joint: entries must be finite and >= 0");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kMassTol) {
    throw std::invalid_argument(
        "make_joint: total mass differs from 1 beyond tolerance");
  }
  if (x_labels.empty()) x_labels = default_labels("x", p.rows);
  if (y_labels.empty()) y_labels = default_labels("y", p.cols);
  if (static_cast<int>(x_labels.size()) != p.rows ||
      static_cast<int>(y_labels.size()) != p.cols) {
    throw std::invalid_argument("make_joint: label count mismatch");
  }
  check_label_text(x_labels, "make_joint");
  check_label_text(y_labels, "make_joint");

  // Drop zero-mass x rows so downstream conditionals p(y|x) always exist.
  Mat pruned(0, p.cols);
  std::vector<std::string> kept;
  for (int x = 0; x < p.rows; ++x) {
    double row_mass = 0.0;
    for (int y = 0; y < p.cols; ++y) row_mass += p(x, y);
    if (row_mass <= kZeroTol) continue;
    pruned.rows += 1;
    pruned.a.insert(pruned.a.end(), p.row(x).begin(), p.row(x).end());
    kept.push_back(x_labels[x]);
  }
  if (pruned.rows == 0) {
    throw std::invalid_argument("make_joint: every row has zero mass");
  }
  return JointXY{std::move(pruned), std::move(kept), std::move(y_labels)};
}

JointXY joint_from_function(const std::vector<int>& f,
                            std::span<const double> p_x, int num_classes) {
  if (f.size() != p_x.size()) {
    throw std::invalid_argument("joint_from_function: f/p_x length mismatch");
  }
  if (f.empty()) throw std::invalid_argument("joint_from_function: empty f");
  int max_class = 0;
  for (int c : f) {
    if (c < 0) {
      throw std::invalid_argument("joint_from_function: negative class");
    }
    if (c > max_class) max_class = c;
  }
  const int ny = (num_classes > 0) ? num_classes : max_class + 1;
  if (max_class >= ny) {
    throw std::invalid_argument(
        "joint_from_function: class index outside [0, num_classes)");
  }
  Mat p(static_cast<int>(f.size()), ny);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (p_x[x] < -kZeroTol) {
      throw std::invalid_argument("joint_from_function: negative p_x entry");
    }
    p(static_cast<int>(x), f[x]) = p_x[x];
  }
  return make_joint(std::move(p));
}

std::optional<std::vector<int>> is_deterministic(const JointXY& joint) {
  std::vector<int> f(joint.num_x(), -1);
  for (int x = 0; x < joint.num_x(); ++x) {
    double row_mass = 0.0, best = -1.0;
    int arg = -1;
    for (int y = 0; y < joint.num_y(); ++y) {
      row_mass += joint.p(x, y);
      if (joint.p(x, y) > best) {
        best = joint.p(x, y);
        arg = y;
      }
    }
    // All of the row's mass must sit on the argmax cell.
    if (row_mass - best > kMassTol) return std::nullopt;
    f[x] = arg;
  }
  return f;
}

Encoder make_encoder(Mat q, std::vector<std::string> t_labels) {
  if (q.rows == 0 || q.cols == 0) {
    throw std::invalid_argument("make_encoder: empty matrix");
  }
  for (int x = 0; x < q.rows; ++x) {
    double row_mass = 0.0;
    for (int t = 0; t < q.cols; ++t) {
      const double v = q(x, t);
      if (v < -kZeroTol || !std::isfinite(v)) {
        throw std::invalid_argument(
            "make_encoder: entries must be finite and >= 0");
      }
      row_mass += v;
    }
    if (std::abs(row_mass - 1.0) > kMassTol) {
      throw std::invalid_argument("make_encoder: row " + std::to_string(x) +
                                  " is not a distribution");
    }
  }
  if (t_labels.empty()) t_labels = default_labels("t", q.cols);
  if (static_cast<int>(t_labels.size()) != q.cols) {
    throw std::invalid_argument("make_encoder: label count mismatch");
  }
  check_label_text(t_labels, "make_encoder");
  return Encoder{std::move(q), std::move(t_labels)};
}

BottleneckReport evaluate(const JointXY& joint, const Encoder& encoder) {
  if (encoder.num_in() != joint.num_x()) {
    throw std::invalid_argument("evaluate: encoder rows != joint x outcomes");
  }
  const int nx = joint.num_x(), ny = joint.num_y(), nt = encoder.num_t();
  const auto p_x = joint.x_marginal();

  Mat p_xt(nx, nt);
  Mat p_ty(nt, ny);
  for (int x = 0; x < nx; ++x) {
    for (int t = 0; t < nt; ++t) {
      const double q = encoder.q(x, t);
      if (q <= kZeroTol) continue;
      p_xt(x, t) = p_x[x] * q;
      for (int y = 0; y < ny; ++y) p_ty(t, y) += joint.p(x, y) * q;
    }
  }

  std::vector<double> p_t(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    for (int y = 0; y < ny; ++y) p_t[t] += p_ty(t, y);
  }

  BottleneckReport r{};
  r.i_xt = info::mutual_information(p_xt);
  r.i_yt = info::mutual_information(p_ty);
  r.h_t = info::entropy(p_t);
  r.h_y = joint.entropy_y();
  return r;
}

Posterior decoder_posterior(const JointXY& joint, const Encoder& encoder) {
  if (encoder.num_in() != joint.num_x()) {
    throw std::invalid_argument(
        "decoder_posterior: encoder rows != joint x outcomes");
  }
  const int nx = joint.num_x(), ny = joint.num_y(), nt = encoder.num_t();
  Posterior out;
  out.p_y_given_t = Mat(nt, ny);
  out.t_marginal.assign(nt, 0.0);
  out.defined.assign(nt, 0);
  for (int x = 0; x < nx; ++x) {
    for (int t = 0; t < nt; ++t) {
      const double q = encoder.q(x, t);
      if (q <= kZeroTol) continue;
      for (int y = 0; y < ny; ++y) {
        out.p_y_given_t(t, y) += joint.p(x, y) * q;
      }
    }
  }
  for (int t = 0; t < nt; ++t) {
    double m = 0.0;
    for (int y = 0; y < ny; ++y) m += out.p_y_given_t(t, y);
    out.t_marginal[t] = m;
    if (m > kZeroTol) {
      out.defined[t] = 1;
      for (int y = 0; y < ny; ++y) out.p_y_given_t(t, y) /= m;
    }
  }
  return out;
}

Objective objective_from_string(const std::string& tag) {
  if (tag == "ib-lagrangian") return Objective::IbLagrangian;
  if (tag == "squared-ib") return Objective::SquaredIb;
  if (tag == "dib") return Objective::Dib;
  if (tag == "squared-dib") return Objective::SquaredDib;
  throw std::invalid_argument("unknown objective tag: " + tag);
}

std::string objective_to_string(Objective objective) {
  switch (objective) {
    case Objective::IbLagrangian:
      return "ib-lagrangian";
    case Objective::SquaredIb:
      return "squared-ib";
    case Objective::Dib:
      return "dib";
    case Objective::SquaredDib:
      return "squared-dib";
  }
  throw std::invalid_argument("unknown objective enum value");
}

double objective_value(const BottleneckReport& report, Objective objective,
                       double beta) {
  switch (objective) {
    case Objective::IbLagrangian:
      return report.i_yt - beta * report.i_xt;
    case Objective::SquaredIb:
      return report.i_yt - beta * report.i_xt * report.i_xt;
    case Objective::Dib:
      return report.i_yt - beta * report.h_t;
    case Objective::SquaredDib:
      return report.i_yt - beta * report.h_t * report.h_t;
  }
  throw std::invalid_argument("unknown objective enum value");
}

namespace {

// Composes the chain into per-stage maps X -> T_k.  Stage k's row count
// must equal stage k-1's alphabet size.
std::vector<Mat> compose_chain(int num_x, const LayerChain& chain) {
  if (chain.empty()) {
    throw std::invalid_argument("chain: at least one stage required");
  }
  std::vector<Mat> composed;
  composed.reserve(chain.size());
  int in_dim = num_x;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Mat& q = chain[k].q;
    if (q.rows != in_dim) {
      throw std::invalid_argument("chain: stage " + std::to_string(k) +
                                  " expects " + std::to_string(q.rows) +
                                  " inputs, got " + std::to_string(in_dim));
    }
    if (k == 0) {
      composed.push_back(q);
    } else {
      const Mat& prev = composed.back();
      Mat next(num_x, q.cols);
      for (int x = 0; x < num_x; ++x) {
        for (int s = 0; s < prev.cols; ++s) {
          const double w = prev(x, s);
          if (w <= kZeroTol) continue;
          for (int t = 0; t < q.cols; ++t) next(x, t) += w * q(s, t);
        }
      }
      composed.push_back(std::move(next));
    }
    in_dim = q.cols;
  }
  return composed;
}

}  // namespace

std::vector<BottleneckReport> chain_evaluate(const JointXY& joint,
                                             const LayerChain& chain) {
  auto composed = compose_chain(joint.num_x(), chain);
  std::vector<BottleneckReport> reports;
  reports.reserve(composed.size());
  for (auto& m : composed) {
    reports.push_back(evaluate(joint, Encoder{m, {}}));
  }
  // Data-processing: both coordinates shrink along the cascade.
  for (std::size_t k = 1; k < reports.size(); ++k) {
    if (reports[k].i_xt > reports[k - 1].i_xt + 1e-9 ||
        reports[k].i_yt > reports[k - 1].i_yt + 1e-9) {
      throw std::logic_error(
          "chain_evaluate: information increased along the chain");
    }
  }
  return reports;
}

double point_prediction_error(const JointXY& joint, const LayerChain& chain) {
  auto composed = compose_chain(joint.num_x(), chain);
  const Mat& q = composed.back();
  const int nx = joint.num_x(), ny = joint.num_y(), nt = q.cols;

  Mat p_ty(nt, ny);
  for (int x = 0; x < nx; ++x) {
    for (int t = 0; t < nt; ++t) {
      const double w = q(x, t);
      if (w <= kZeroTol) continue;
      for (int y = 0; y < ny; ++y) p_ty(t, y) += joint.p(x, y) * w;
    }
  }
  double correct = 0.0;
  for (int t = 0; t < nt; ++t) {
    double best = -1.0;
    for (int y = 0; y < ny; ++y) {
      if (p_ty(t, y) > best) best = p_ty(t, y);  // ties keep the lowest y
    }
    if (best > 0.0) correct += best;
  }
  double err = 1.0 - correct;
  return (err < 0.0 && err > -1e-12) ? 0.0 : err;
}

}  // namespace ibcurve
