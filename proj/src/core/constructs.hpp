// ---------------------------------------------------------------------------
// constructs.hpp
//
// Closed-form encoder families for deterministic joints (those with
// y = f(x)).  For such joints the optimal trade-off curve is the piecewise
// linear min{r, H(Y)}, and the families below realize it exactly:
//
//   t_alpha_encoder    erasure channel on the class label: t = f(x) with
//                      probability alpha, a dedicated erasure symbol
//                      otherwise; I(X;T) = I(Y;T) = alpha * H(Y)
//   t_copy_encoder     t = f(x); lands on the curve corner (H(Y), H(Y))
//   hard clusterings   t = g(f(x)) for deterministic g; these satisfy
//                      I(X;T) = I(Y;T) = H(T) and populate the step-shaped
//                      envelope traced by dib_envelope
// ---------------------------------------------------------------------------
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "core/bottleneck.hpp"

namespace ibcurve {

// Default cap on the class count for exhaustive partition enumeration; the
// partition count grows as the Bell numbers (4,213,597 at 12 classes).
inline constexpr int kMaxEnumClasses = 12;

// Requires a deterministic joint and alpha in [0, 1].  The encoder has
// |Y| + 1 symbols: one per class plus an erasure symbol.
Encoder t_alpha_encoder(double alpha, const JointXY& joint);

// Requires a deterministic joint; |T| = |Y| and t = f(x).
Encoder t_copy_encoder(const JointXY& joint);

// The optimal prediction level at compression r: min{r, h_y}.  Both
// arguments must be >= 0.
double deterministic_curve(double r, double h_y);

// A partition of class labels into clusters, stored as cluster index per
// class in restricted-growth form: g[0] = 0 and each entry is at most
// one larger than the maximum before it.
using HardClustering = std::vector<int>;

// Remaps arbitrary non-negative cluster ids into restricted-growth form.
HardClustering normalize_clustering(const HardClustering& g);

// Requires a deterministic joint; t(x) = g(f(x)) as a one-hot encoder with
// |T| = number of clusters in g.
Encoder hard_clustering_encoder(const HardClustering& g, const JointXY& joint);

// Calls fn with every partition of {0, .., num_classes-1} in canonical
// restricted-growth order.  Throws ResourceLimitError beyond max_classes.
void for_each_hard_clustering(int num_classes,
                              const std::function<void(const HardClustering&)>& fn,
                              int max_classes = kMaxEnumClasses);

// Materialized variant; intended for small class counts.
std::vector<HardClustering> enumerate_hard_clusterings(
    int num_classes, int max_classes = kMaxEnumClasses);

// Evaluates every hard clustering of a deterministic joint and returns the
// distinct (h_t, i_yt) levels in increasing h_t order.  Because every
// clustering satisfies i_yt = h_t, no level dominates another and the set
// is exactly the achievable step envelope, ending at (H(Y), H(Y)).
std::vector<std::pair<double, double>> dib_envelope(
    const JointXY& joint, int max_classes = kMaxEnumClasses);

}  // namespace ibcurve
