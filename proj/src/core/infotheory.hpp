// ---------------------------------------------------------------------------
// infotheory.hpp
//
// Elementary information-theoretic quantities on finite discrete
// distributions.  Everything is measured in nats (natural logarithm).
//
//   entropy                      H(p) = -sum_i p_i ln p_i
//   binary_entropy               H2(x) = -x ln x - (1-x) ln(1-x)
//   kl_divergence                D(p||q), +infinity when p is not
//                                absolutely continuous w.r.t. q
//   mutual_information           I between the row and column variables of
//                                a joint probability matrix
//   conditional_entropy          H(col | row) of a joint matrix
//   l1_distance                  sum of absolute differences
//   fano_bound                   H2(pe) + pe ln(classes - 1)
//   cross_entropy_decomposition  expected cross-entropy loss split into a
//                                conditional entropy and a KL remainder
//
// Conventions: 0 ln 0 = 0; entries below kZeroTol are treated as exact
// zeros before any logarithm; probability vectors and joint matrices must
// carry total mass 1 within kMassTol.  Violations throw
// std::invalid_argument.
// ---------------------------------------------------------------------------
#pragma once

#include <span>
#include <vector>

#include "core/common.hpp"

namespace ibcurve::info {

double entropy(std::span<const double> p);
double binary_entropy(double x);
double kl_divergence(std::span<const double> p, std::span<const double> q);
double mutual_information(const Mat& joint);
double conditional_entropy(const Mat& joint);
double l1_distance(std::span<const double> p, std::span<const double> q);
double l1_distance(const Mat& p, const Mat& q);
double fano_bound(double p_err, int classes);

struct CrossEntropyDecomposition {
  double ce_loss;       // -sum_t w_t sum_y P(y|t) ln Q(y|t)
  double cond_entropy;  // -sum_t w_t sum_y P(y|t) ln P(y|t)
  double kl_term;       // sum_t w_t D(P(.|t) || Q(.|t))
};

// `posterior` and `decoder` are row-stochastic T x Y matrices; `t_marginal`
// weighs the rows.  Rows with weight below kZeroTol are skipped, so decoder
// behaviour on unreachable t is irrelevant.  All three fields are computed
// independently; ce_loss = cond_entropy + kl_term is a property the tests
// assert, not an identity wired into the code.
CrossEntropyDecomposition cross_entropy_decomposition(
    const Mat& posterior, const Mat& decoder,
    std::span<const double> t_marginal);

}  // namespace ibcurve::info
