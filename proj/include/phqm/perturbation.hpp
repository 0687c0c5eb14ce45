#pragma once

#include <map>
#include <utility>

#include "phqm/metric.hpp"

namespace phqm::perturbation {

struct PerturbationProblem {
  Mat H0;  // Hermitian
  Mat H1;  // anti-Hermitian
  double epsilon = 0.0;
  int order = 1;  // largest Q index, odd
};

struct QSeries {
  std::map<int, Mat> terms;  // j -> Q_j, even j stored as zero
};

// Solves [H0, Q] = R in the eigenbasis of H0. Q vanishes on degenerate blocks.
Mat solve_commutator(const Mat& H0, const Mat& R, double tol = linalg::kDefaultTol);

// Coefficient of the k-fold nested commutator in the recursion for R_j.
double recursion_coefficient(int k);

// R_j = sum_{k=2}^{j} q_k Z_kj, Z_kj the sum of [[[H0, Q_s1], Q_s2], ...] over
// compositions s1 + ... + sk = j. Uses Q_1 .. Q_{j-1} from `q`.
Mat r_term_recursive(int j, const Mat& H0, const QSeries& q);

// Explicit right-hand sides for j <= 5 in terms of H1.
Mat r_term_explicit(int j, const Mat& H1, const QSeries& q);

QSeries q_series(const PerturbationProblem& prob, double tol = linalg::kDefaultTol);

// sum_j eps^j Q_j
Mat q_sum(const QSeries& q, double epsilon);

metric::MetricOperator metric_from_q(const QSeries& q, double epsilon);

// H + sum_{l=1}^{order} [H, Q]_l / l!, with [H, Q]_l the l-fold commutator.
Mat bch_sum(const Mat& H, const Mat& Q, int order);

// |e^{-Q} H e^{Q} - H^dagger| on the leading `interior` x `interior` block.
double similarity_residual(const Mat& H, const Mat& Q, Eigen::Index interior);

// Position and momentum in the n_max-dimensional oscillator basis.
std::pair<Mat, Mat> oscillator_basis(int n_max, double mass, double hbar, double omega);

// Relative size of the part of Q (restricted to indices < interior) outside the
// span of {x^{2j}, p^{2k+1}}, j, k = 0..i+1; the ansatz for Q_{2i+1}.
double ansatz_residual(const Mat& Q, const Mat& x, const Mat& p, int i, Eigen::Index interior);

}  // namespace phqm::perturbation
