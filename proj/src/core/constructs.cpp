#include "core/constructs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ibcurve {

namespace {

std::vector<int> require_deterministic(const JointXY& joint,
                                       const char* who) {
  auto f = is_deterministic(joint);
  if (!f) {
    throw std::invalid_argument(std::string(who) +
                                ": joint is not deterministic");
  }
  return *f;
}

}  // namespace

Encoder t_alpha_encoder(double alpha, const JointXY& joint) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("t_alpha_encoder: alpha outside [0, 1]");
  }
  auto f = require_deterministic(joint, "t_alpha_encoder");
  const int ny = joint.num_y();
  Mat q(joint.num_x(), ny + 1);
  for (int x = 0; x < joint.num_x(); ++x) {
    q(x, f[x]) = alpha;
    q(x, ny) = 1.0 - alpha;
  }
  std::vector<std::string> labels = joint.y_labels;
  labels.push_back("erased");
  return make_encoder(std::move(q), std::move(labels));
}

Encoder t_copy_encoder(const JointXY& joint) {
  auto f = require_deterministic(joint, "t_copy_encoder");
  Mat q(joint.num_x(), joint.num_y());
  for (int x = 0; x < joint.num_x(); ++x) q(x, f[x]) = 1.0;
  return make_encoder(std::move(q), joint.y_labels);
}

double deterministic_curve(double r, double h_y) {
  if (r < 0.0 || h_y < 0.0) {
    throw std::invalid_argument("deterministic_curve: negative argument");
  }
  return std::min(r, h_y);
}

HardClustering normalize_clustering(const HardClustering& g) {
  if (g.empty()) {
    throw std::invalid_argument("normalize_clustering: empty clustering");
  }
  std::vector<int> remap;
  HardClustering out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < 0) {
      throw std::invalid_argument("normalize_clustering: negative cluster id");
    }
    auto it = std::find(remap.begin(), remap.end(), g[i]);
    if (it == remap.end()) {
      remap.push_back(g[i]);
      out[i] = static_cast<int>(remap.size()) - 1;
    } else {
      out[i] = static_cast<int>(it - remap.begin());
    }
  }
  return out;
}

Encoder hard_clustering_encoder(const HardClustering& g,
                                const JointXY& joint) {
  auto f = require_deterministic(joint, "hard_clustering_encoder");
  if (static_cast<int>(g.size()) != joint.num_y()) {
    throw std::invalid_argument(
        "hard_clustering_encoder: clustering length != class count");
  }
  auto canon = normalize_clustering(g);
  const int nt = *std::max_element(canon.begin(), canon.end()) + 1;
  Mat q(joint.num_x(), nt);
  for (int x = 0; x < joint.num_x(); ++x) q(x, canon[f[x]]) = 1.0;
  return make_encoder(std::move(q));
}

void for_each_hard_clustering(
    int num_classes, const std::function<void(const HardClustering&)>& fn,
    int max_classes) {
  if (num_classes < 1) {
    throw std::invalid_argument("for_each_hard_clustering: no classes");
  }
  if (num_classes > max_classes) {
    throw ResourceLimitError(
        "for_each_hard_clustering: " + std::to_string(num_classes) +
        " classes exceeds the enumeration guard of " +
        std::to_string(max_classes));
  }
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  HardClustering a(num_classes, 0);
  std::vector<int> prefix_max(num_classes, 0);
  fn(a);
  if (num_classes == 1) return;
  while (true) {
    // Advance the rightmost position that can still grow.
    int i = num_classes - 1;
    while (i > 0 && a[i] == prefix_max[i] + 1) {
      a[i] = 0;
      --i;
    }
    if (i == 0) break;
    a[i] += 1;
    for (int k = i + 1; k < num_classes; ++k) {
      prefix_max[k] = std::max(prefix_max[k - 1], a[k - 1]);
    }
    fn(a);
  }
}

std::vector<HardClustering> enumerate_hard_clusterings(int num_classes,
                                                       int max_classes) {
  std::vector<HardClustering> out;
  for_each_hard_clustering(
      num_classes, [&out](const HardClustering& g) { out.push_back(g); },
      max_classes);
  return out;
}

std::vector<std::pair<double, double>> dib_envelope(const JointXY& joint,
                                                    int max_classes) {
  auto f = require_deterministic(joint, "dib_envelope");
  const auto p_y = joint.y_marginal();
  const int ny = joint.num_y();

  std::vector<std::pair<double, double>> points;
  for_each_hard_clustering(
      ny,
      [&](const HardClustering& g) {
        // Cluster masses under p_y; h_t and i_yt from the (t, y) joint.
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
        double i_yt = 0.0;
        for (int y = 0; y < ny; ++y) {
          if (p_y[y] > kZeroTol) i_yt -= p_y[y] * std::log(m[g[y]]);
        }
        points.emplace_back(h_t, i_yt);
      },
      max_classes);

  std::sort(points.begin(), points.end());
  std::vector<std::pair<double, double>> levels;
  for (const auto& pt : points) {
    if (levels.empty() || pt.first > levels.back().first + 1e-9) {
      levels.push_back(pt);
    }
  }
  return levels;
}

}  // namespace ibcurve
