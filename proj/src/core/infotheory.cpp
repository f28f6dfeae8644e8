#include "core/infotheory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ibcurve::info {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_entries(std::span<const double> p, const char* who) {
  for (double v : p) {
    if (v < -kZeroTol || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) +
                                  ": entries must be finite and >= 0");
    }
  }
}

double mass(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

// Small negative results of cancellation are clamped to zero; anything
// larger signals a real bug and is left visible to the tests.
double clamp_tiny_negative(double v) {
  return (v < 0.0 && v > -1e-9) ? 0.0 : v;
}

}  // namespace

double entropy(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("entropy: empty distribution");
  check_entries(p, "entropy");
  double h = 0.0;
  for (double v : p) {
    if (v > kZeroTol) h -= v * std::log(v);
  }
  return clamp_tiny_negative(h);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  }
  double h = 0.0;
  if (x > kZeroTol) h -= x * std::log(x);
  if (1.0 - x > kZeroTol) h -= (1.0 - x) * std::log(1.0 - x);
  return clamp_tiny_negative(h);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("kl_divergence: dimension mismatch");
  }
  if (p.empty()) throw std::invalid_argument("kl_divergence: empty inputs");
  check_entries(p, "kl_divergence");
  check_entries(q, "kl_divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= kZeroTol) continue;
    if (q[i] <= kZeroTol) return kInf;
    d += p[i] * std::log(p[i] / q[i]);
  }
  return clamp_tiny_negative(d);
}

double mutual_information(const Mat& joint) {
  if (joint.rows == 0 || joint.cols == 0) {
    throw std::invalid_argument("mutual_information: empty joint");
  }
  check_entries(joint.a, "mutual_information");
  if (std::abs(mass(joint.a) - 1.0) > kMassTol) {
    throw std::invalid_argument(
        "mutual_information: joint mass differs from 1 beyond tolerance");
  }
  std::vector<double> pr(joint.rows, 0.0), pc(joint.cols, 0.0);
  for (int r = 0; r < joint.rows; ++r) {
    for (int c = 0; c < joint.cols; ++c) {
      pr[r] += joint(r, c);
      pc[c] += joint(r, c);
    }
  }
  double mi = 0.0;
  for (int r = 0; r < joint.rows; ++r) {
    for (int c = 0; c < joint.cols; ++c) {
      const double v = joint(r, c);
      if (v > kZeroTol) mi += v * std::log(v / (pr[r] * pc[c]));
    }
  }
  return clamp_tiny_negative(mi);
}

double conditional_entropy(const Mat& joint) {
  if (joint.rows == 0 || joint.cols == 0) {
    throw std::invalid_argument("conditional_entropy: empty joint");
  }
  check_entries(joint.a, "conditional_entropy");
  if (std::abs(mass(joint.a) - 1.0) > kMassTol) {
    throw std::invalid_argument(
        "conditional_entropy: joint mass differs from 1 beyond tolerance");
  }
  std::vector<double> pr(joint.rows, 0.0);
  for (int r = 0; r < joint.rows; ++r) {
    for (int c = 0; c < joint.cols; ++c) pr[r] += joint(r, c);
  }
  double h_joint = 0.0;
  for (double v : joint.a) {
    if (v > kZeroTol) h_joint -= v * std::log(v);
  }
  double h_rows = 0.0;
  for (double v : pr) {
    if (v > kZeroTol) h_rows -= v * std::log(v);
  }
  return clamp_tiny_negative(h_joint - h_rows);
}

double l1_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("l1_distance: dimension mismatch");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return d;
}

double l1_distance(const Mat& p, const Mat& q) {
  if (!p.same_shape(q)) {
    throw std::invalid_argument("l1_distance: shape mismatch");
  }
  return l1_distance(std::span<const double>(p.a),
                     std::span<const double>(q.a));
}

double fano_bound(double p_err, int classes) {
  if (classes < 2) throw std::invalid_argument("fano_bound: classes < 2");
  if (!(p_err >= 0.0 && p_err <= 1.0)) {
    throw std::invalid_argument("fano_bound: error rate outside [0, 1]");
  }
  return binary_entropy(p_err) +
         p_err * std::log(static_cast<double>(classes - 1));
}

CrossEntropyDecomposition cross_entropy_decomposition(
    const Mat& posterior, const Mat& decoder,
    std::span<const double> t_marginal) {
  if (!posterior.same_shape(decoder)) {
    throw std::invalid_argument(
        "cross_entropy_decomposition: posterior/decoder shape mismatch");
  }
  if (static_cast<int>(t_marginal.size()) != posterior.rows) {
    throw std::invalid_argument(
        "cross_entropy_decomposition: t_marginal length mismatch");
  }
  check_entries(t_marginal, "cross_entropy_decomposition");

  CrossEntropyDecomposition out{0.0, 0.0, 0.0};
  for (int t = 0; t < posterior.rows; ++t) {
    const double w = t_marginal[t];
    if (w <= kZeroTol) continue;
    double ce = 0.0, h = 0.0, kl = 0.0;
    for (int y = 0; y < posterior.cols; ++y) {
      const double p = posterior(t, y);
      if (p <= kZeroTol) continue;
      const double q = decoder(t, y);
      if (q <= kZeroTol) {
        ce = kInf;
        kl = kInf;
        h -= p * std::log(p);
        continue;
      }
      ce -= p * std::log(q);
      h -= p * std::log(p);
      kl += p * std::log(p / q);
    }
    out.ce_loss += w * ce;
    out.cond_entropy += w * h;
    out.kl_term += w * kl;
  }
  out.cond_entropy = clamp_tiny_negative(out.cond_entropy);
  if (std::isfinite(out.kl_term)) {
    out.kl_term = clamp_tiny_negative(out.kl_term);
  }
  return out;
}

}  // namespace ibcurve::info
