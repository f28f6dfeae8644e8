// ---------------------------------------------------------------------------
// bottleneck.hpp
//
// Joint distributions p(x, y), stochastic encoders q(t|x), and the
// information-plane quantities (I(X;T), I(Y;T)) that the rest of the
// library trades off against each other.
// ---------------------------------------------------------------------------
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/common.hpp"

namespace ibcurve {

// A validated joint distribution over a finite X x Y grid.  Rows carrying
// zero mass are dropped at construction, so every surviving x outcome has
// positive probability.
struct JointXY {
  Mat p;  // num_x x num_y, entries >= 0, total mass 1 within kMassTol
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;

  int num_x() const { return p.rows; }
  int num_y() const { return p.cols; }
  std::vector<double> x_marginal() const;
  std::vector<double> y_marginal() const;
  double entropy_y() const;
};

// Validates entries and total mass, prunes zero-mass x rows, and fills in
// default labels ("x0", "x1", ... / "y0", ...) where none are given.
JointXY make_joint(Mat p, std::vector<std::string> x_labels = {},
                   std::vector<std::string> y_labels = {});

// Builds the deterministic joint p(x, f(x)) = p_x(x).  When num_classes is
// zero the class count is inferred as max(f) + 1; otherwise every f(x) must
// lie inside [0, num_classes).
JointXY joint_from_function(const std::vector<int>& f,
                            std::span<const double> p_x, int num_classes = 0);

// Returns the class map f when every positive-mass row of the joint puts all
// its mass (up to kMassTol) on a single y, and nothing otherwise.
std::optional<std::vector<int>> is_deterministic(const JointXY& joint);

// A row-stochastic encoder q(t|x); rows are conditional distributions.
struct Encoder {
  Mat q;  // num_in x num_t
  std::vector<std::string> t_labels;

  int num_in() const { return q.rows; }
  int num_t() const { return q.cols; }
};

Encoder make_encoder(Mat q, std::vector<std::string> t_labels = {});

struct BottleneckReport {
  double i_xt;  // I(X;T), nats
  double i_yt;  // I(Y;T), nats
  double h_t;   // H(T), nats
  double h_y;   // H(Y), nats
};

BottleneckReport evaluate(const JointXY& joint, const Encoder& encoder);

// Decoder-side posterior p(y|t) together with the t marginal.  Rows for
// zero-mass t carry no meaning; `defined` marks the usable ones.
struct Posterior {
  Mat p_y_given_t;  // num_t x num_y
  std::vector<double> t_marginal;
  std::vector<char> defined;
};

Posterior decoder_posterior(const JointXY& joint, const Encoder& encoder);

enum class Objective { IbLagrangian, SquaredIb, Dib, SquaredDib };

Objective objective_from_string(const std::string& tag);
std::string objective_to_string(Objective objective);

// Scalar objective value at a given trade-off weight:
//   ib-lagrangian  I(Y;T) - beta * I(X;T)
//   squared-ib     I(Y;T) - beta * I(X;T)^2
//   dib            I(Y;T) - beta * H(T)
//   squared-dib    I(Y;T) - beta * H(T)^2
double objective_value(const BottleneckReport& report, Objective objective,
                       double beta);

// A feed-forward cascade of encoders; stage k maps the alphabet of stage
// k-1.  Stage reports are computed against the composed maps X -> T_k, and
// both information coordinates are checked to be non-increasing along the
// chain (data-processing, asserted to 1e-9).
using LayerChain = std::vector<Encoder>;

std::vector<BottleneckReport> chain_evaluate(const JointXY& joint,
                                             const LayerChain& chain);

// Error probability of the plug-in classifier that reads the final stage
// T_k, decodes y_hat(t) = argmax_y p(y|t) (ties to the lowest y index), and
// is scored against the true y.
double point_prediction_error(const JointXY& joint, const LayerChain& chain);

}  // namespace ibcurve
