#include "phqm/perturbation.hpp"

#include <cmath>
#include <vector>

namespace phqm::perturbation {

using linalg::commutator;
using linalg::opnorm;

Mat solve_commutator(const Mat& H0, const Mat& R, double tol) {
  linalg::require_square(H0, "H0");
  if (R.rows() != H0.rows() || R.cols() != H0.cols())
    throw Error(Errc::DimensionMismatch, "R and H0 sizes differ");
  linalg::require_finite(R, "R");
  if (!linalg::is_hermitian(H0, tol)) throw Error(Errc::NotHermitian, "H0 must be Hermitian");

  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H0 + H0.adjoint()));
  const Mat& U = es.eigenvectors();
  const Eigen::VectorXd& E = es.eigenvalues();
  const double gap = tol * std::max(E.cwiseAbs().maxCoeff(), 1.0);
  const double rscale = std::max(R.cwiseAbs().maxCoeff(), 1.0);

  Mat Rt = U.adjoint() * R * U;
  Mat Qt = Mat::Zero(R.rows(), R.cols());
  for (Eigen::Index m = 0; m < Rt.rows(); ++m)
    for (Eigen::Index n = 0; n < Rt.cols(); ++n) {
      double d = E(m) - E(n);
      if (std::abs(d) <= gap) {
        if (std::abs(Rt(m, n)) > std::sqrt(tol) * rscale)
          throw Error(Errc::Unsolvable, "right-hand side does not vanish on a degenerate block of H0");
        continue;
      }
      Qt(m, n) = Rt(m, n) / d;
    }
  return U * Qt * U.adjoint();
}

double recursion_coefficient(int k) {
  long double q = 0;
  for (int m = 1; m <= k; ++m)
    for (int n = 1; n <= m; ++n) {
      long double t = (n % 2 ? -1.0L : 1.0L) * std::pow((long double)n, k);
      t *= std::tgamma((long double)m + 1) /
           (std::tgamma((long double)k + 1) * std::pow(2.0L, m - 1) * std::tgamma((long double)n + 1) *
            std::tgamma((long double)(m - n) + 1));
      q += t;
    }
  return static_cast<double>(q);
}

namespace {

const Mat& term(const QSeries& q, int j, Eigen::Index n, Mat& zero) {
  auto it = q.terms.find(j);
  if (it != q.terms.end()) return it->second;
  zero = Mat::Zero(n, n);
  return zero;
}

}  // namespace

Mat r_term_recursive(int j, const Mat& H0, const QSeries& q) {
  const Eigen::Index n = H0.rows();
  Mat zero;
  std::vector<Mat> Q(j);
  for (int s = 1; s < j; ++s) Q[s] = term(q, s, n, zero);

  // A[t] holds the sum over compositions of t into the current number of parts.
  std::vector<Mat> A(j + 1, Mat::Zero(n, n));
  for (int s = 1; s < j; ++s) A[s] = commutator(H0, Q[s]);
  Mat R = Mat::Zero(n, n);
  for (int k = 2; k <= j; ++k) {
    std::vector<Mat> B(j + 1, Mat::Zero(n, n));
    for (int t = k; t <= j; ++t)
      for (int s = 1; s <= t - (k - 1); ++s) {
        if (s >= j || Q[s].isZero(0.0) || A[t - s].isZero(0.0)) continue;
        B[t] += commutator(A[t - s], Q[s]);
      }
    A = std::move(B);
    double qk = recursion_coefficient(k);
    if (qk != 0.0) R += qk * A[j];
  }
  return R;
}

Mat r_term_explicit(int j, const Mat& H1, const QSeries& q) {
  const Eigen::Index n = H1.rows();
  Mat z1, z2, z3;
  const Mat& Q1 = term(q, 1, n, z1);
  const Mat& Q2 = term(q, 2, n, z2);
  const Mat& Q3 = term(q, 3, n, z3);
  auto c = [](const Mat& a, const Mat& b) { return commutator(a, b); };
  switch (j) {
    case 1: return -2.0 * H1;
    case 2: return Mat::Zero(n, n);
    case 3: return -(1.0 / 6.0) * c(c(H1, Q1), Q1);
    case 4: return -(1.0 / 6.0) * (c(c(H1, Q1), Q2) + c(c(H1, Q2), Q1));
    case 5: {
      Mat h11 = c(H1, Q1);
      Mat h1111 = c(c(c(h11, Q1), Q1), Q1);
      Mat h22 = c(c(H1, Q2), Q2);
      return (1.0 / 360.0) * h1111 - (1.0 / 6.0) * (h22 + c(h11, Q3) + c(c(H1, Q3), Q1));
    }
    default: throw Error(Errc::InvalidArgument, "explicit right-hand sides exist for j <= 5 only");
  }
}

QSeries q_series(const PerturbationProblem& prob, double tol) {
  linalg::require_square(prob.H0, "H0");
  if (prob.H1.rows() != prob.H0.rows() || prob.H1.cols() != prob.H0.cols())
    throw Error(Errc::DimensionMismatch, "H0 and H1 sizes differ");
  if (prob.order < 1 || prob.order % 2 == 0)
    throw Error(Errc::InvalidArgument, "order must be a positive odd integer");
  if (!linalg::is_hermitian(prob.H0, tol)) throw Error(Errc::NotHermitian, "H0 must be Hermitian");
  if (!linalg::is_hermitian(Mat(std::complex<double>(0, 1) * prob.H1), tol))
    throw Error(Errc::InvalidArgument, "H1 must be anti-Hermitian");

  const Eigen::Index n = prob.H0.rows();
  QSeries q;
  for (int j = 1; j <= prob.order; ++j) {
    if (j % 2 == 0) {
      q.terms[j] = Mat::Zero(n, n);
      continue;
    }
    Mat R = j <= 5 ? r_term_explicit(j, prob.H1, q) : r_term_recursive(j, prob.H0, q);
    Mat Q = solve_commutator(prob.H0, R, tol);
    q.terms[j] = 0.5 * (Q + Q.adjoint());
  }
  return q;
}

Mat q_sum(const QSeries& q, double epsilon) {
  if (q.terms.empty()) throw Error(Errc::InvalidArgument, "empty Q series");
  const Eigen::Index n = q.terms.begin()->second.rows();
  Mat S = Mat::Zero(n, n);
  for (const auto& [j, Q] : q.terms) S += std::pow(epsilon, j) * Q;
  return S;
}

metric::MetricOperator metric_from_q(const QSeries& q, double epsilon) {
  Mat S = q_sum(q, epsilon);
  return {linalg::expm_herm(-0.5 * (S + S.adjoint()), 1e-8)};
}

Mat bch_sum(const Mat& H, const Mat& Q, int order) {
  Mat out = H;
  Mat c = H;
  double fact = 1.0;
  for (int l = 1; l <= order; ++l) {
    c = commutator(c, Q);
    fact *= l;
    out += c / fact;
  }
  return out;
}

double similarity_residual(const Mat& H, const Mat& Q, Eigen::Index interior) {
  Mat Qh = 0.5 * (Q + Q.adjoint());
  Mat S = linalg::expm_herm(-Qh, 1e-8) * H * linalg::expm_herm(Qh, 1e-8) - H.adjoint();
  interior = std::min(interior, H.rows());
  return opnorm(S.topLeftCorner(interior, interior));
}

std::pair<Mat, Mat> oscillator_basis(int n_max, double mass, double hbar, double omega) {
  if (n_max < 2) throw Error(Errc::InvalidArgument, "n_max must be at least 2");
  if (mass <= 0 || hbar <= 0 || omega <= 0)
    throw Error(Errc::InvalidArgument, "mass, hbar and omega must be positive");
  Mat a = Mat::Zero(n_max, n_max);
  for (int k = 1; k < n_max; ++k) a(k - 1, k) = std::sqrt(double(k));
  Mat ad = a.adjoint();
  Mat x = std::sqrt(hbar / (2 * mass * omega)) * (a + ad);
  Mat p = std::complex<double>(0, std::sqrt(mass * hbar * omega / 2)) * (ad - a);
  return {x, p};
}

double ansatz_residual(const Mat& Q, const Mat& x, const Mat& p, int i, Eigen::Index interior) {
  const Eigen::Index n = Q.rows();
  interior = std::min(interior, n);
  const int deg = i + 1;
  std::vector<Mat> xp(2 * deg + 1), pp(2 * deg + 2);
  xp[0] = Mat::Identity(n, n);
  pp[0] = Mat::Identity(n, n);
  for (int k = 1; k <= 2 * deg; ++k) xp[k] = xp[k - 1] * x;
  for (int k = 1; k <= 2 * deg + 1; ++k) pp[k] = pp[k - 1] * p;

  const Eigen::Index m = interior * interior;
  const int nb = (deg + 1) * (deg + 1);
  Mat A(m, nb);
  int col = 0;
  for (int jj = 0; jj <= deg; ++jj)
    for (int kk = 0; kk <= deg; ++kk) {
      Mat b = xp[2 * jj] * pp[2 * kk + 1] + pp[2 * kk + 1] * xp[2 * jj];
      A.col(col++) = Eigen::Map<const Vec>(Mat(b.topLeftCorner(interior, interior)).data(), m);
    }
  Vec y = Eigen::Map<const Vec>(Mat(Q.topLeftCorner(interior, interior)).data(), m);
  double yn = y.norm();
  if (yn == 0.0) return 0.0;
  Vec c = A.completeOrthogonalDecomposition().solve(y);
  return (A * c - y).norm() / yn;
}

}  // namespace phqm::perturbation
