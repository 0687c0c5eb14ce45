#include "phqm/metric.hpp"

#include <cmath>
#include <random>

namespace phqm::metric {

using linalg::opnorm;

MetricOperator make_metric(const Mat& eta, double tol) {
  linalg::require_square(eta, "metric");
  double scale = std::max(opnorm(eta), 1e-300);
  if ((eta - eta.adjoint()).norm() > tol * std::max(scale, 1.0))
    throw Error(Errc::NotHermitian, "metric operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (eta + eta.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= 0.0)
    throw Error(Errc::NotPositiveDefinite, "metric operator has a non-positive eigenvalue");
  return {eta};
}

double pseudo_hermiticity_residual(const Mat& A, const Mat& eta) {
  Eigen::PartialPivLU<Mat> lu(eta);
  // eta A eta^{-1} = (eta^{-dagger} A^dagger eta^dagger)^dagger; use a solve
  // instead of an explicit inverse.
  Mat X = lu.solve((eta * A).adjoint()).adjoint();  // = eta A eta^{-1} for Hermitian eta
  double an = opnorm(A);
  return opnorm(X - A.adjoint()) / (an > 0 ? an : 1.0);
}

MetricOperator normalized(const MetricOperator& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m.eta, Eigen::EigenvaluesOnly);
  return {m.eta / es.eigenvalues().maxCoeff()};
}

MetricOperator metric_from_spectrum(const biortho::BiorthonormalSystem& bs, bool normalize) {
  if (!bs.all_real())
    throw Error(Errc::ComplexSpectrum, "no positive-definite metric exists for a nonreal spectrum");
  MetricOperator m{bs.phis * bs.phis.adjoint()};
  return normalize ? normalized(m) : m;
}

Mat metric_inverse_from_spectrum(const biortho::BiorthonormalSystem& bs) {
  if (!bs.all_real())
    throw Error(Errc::ComplexSpectrum, "no positive-definite metric exists for a nonreal spectrum");
  return bs.psis * bs.psis.adjoint();
}

PseudoMetric pseudo_metric_family(const biortho::BiorthonormalSystem& bs, const SignSequence& sigma) {
  auto reals = bs.real_indices();
  if (sigma.sigma.size() != reals.size())
    throw Error(Errc::LengthMismatch, "sign sequence needs one entry per real eigenvalue (" +
                                          std::to_string(reals.size()) + ")");
  for (int s : sigma.sigma)
    if (s != 1 && s != -1) throw Error(Errc::InvalidArgument, "sign entries must be +1 or -1");
  if (!bs.all_paired())
    throw Error(Errc::UnpairedComplexEigenvalue, "a nonreal eigenvalue has no conjugate partner");

  const Eigen::Index n = bs.size();
  Mat eta = Mat::Zero(n, n);
  for (std::size_t k = 0; k < reals.size(); ++k) {
    auto phi = bs.phis.col(reals[k]);
    eta += double(sigma.sigma[k]) * phi * phi.adjoint();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (bs.is_real[i] || bs.values(i).imag() <= 0) continue;
    auto pp = bs.phis.col(i);
    auto pm = bs.phis.col(bs.partner[i]);
    eta += pp * pm.adjoint() + pm * pp.adjoint();
  }
  return {eta, sigma};
}

Mat charge_operator(const biortho::BiorthonormalSystem& bs, const SignSequence& sigma) {
  if (!bs.all_real()) throw Error(Errc::ComplexSpectrum, "C_sigma needs a real spectrum");
  if (sigma.sigma.size() != static_cast<std::size_t>(bs.size()))
    throw Error(Errc::LengthMismatch, "sign sequence length must equal the dimension");
  Eigen::VectorXcd s(bs.size());
  for (Eigen::Index i = 0; i < bs.size(); ++i) s(i) = double(sigma.sigma[i]);
  return bs.psis * s.asDiagonal() * bs.phis.adjoint();
}

AntilinearSymmetry antilinear_symmetry(const biortho::BiorthonormalSystem& bs,
                                       const std::vector<double>* phases) {
  if (!bs.all_real()) throw Error(Errc::ComplexSpectrum, "exact antilinear symmetry needs a real spectrum");
  Mat psis = bs.psis;
  Mat phis = bs.phis;
  if (phases) {
    if (phases->size() != static_cast<std::size_t>(bs.size()))
      throw Error(Errc::LengthMismatch, "one phase per eigenvector required");
    for (Eigen::Index i = 0; i < bs.size(); ++i) {
      cplx u = std::polar(1.0, (*phases)[i]);
      psis.col(i) *= u;
      phis.col(i) *= u;  // phi -> phi / conj(u) = u phi for |u| = 1
    }
  }
  return {psis * phis.transpose()};
}

QuasiHermitianSystem build_system(const Mat& H, const MetricOperator& eta, double tol) {
  linalg::require_square(H, "Hamiltonian");
  if (H.rows() != eta.eta.rows()) throw Error(Errc::DimensionMismatch, "H and eta sizes differ");
  make_metric(eta.eta, std::max(tol, linalg::kDefaultTol));
  double res = pseudo_hermiticity_residual(H, eta.eta);
  if (res > tol)
    throw Error(Errc::NotPseudoHermitian, "residual " + std::to_string(res) + " above tolerance");
  QuasiHermitianSystem sys;
  sys.H = H;
  sys.eta_plus = eta;
  sys.rho = linalg::sqrtm_pd(eta.eta, std::max(tol, linalg::kDefaultTol));
  Mat rho_inv = linalg::inv_sqrtm_pd(eta.eta, std::max(tol, linalg::kDefaultTol));
  sys.h = sys.rho * H * rho_inv;
  return sys;
}

QuasiHermitianSystem system_from_rho(const Mat& rho, const Mat& h) {
  QuasiHermitianSystem sys;
  sys.rho = rho;
  sys.h = h;
  sys.eta_plus = {rho * rho};
  Eigen::PartialPivLU<Mat> lu(rho);
  sys.H = lu.solve(h * rho);
  return sys;
}

Mat observable_map(const Mat& o, const QuasiHermitianSystem& sys, double tol) {
  if (!linalg::is_hermitian(o, tol)) throw Error(Errc::NotHermitian, "observable must be Hermitian");
  Eigen::PartialPivLU<Mat> lu(sys.rho);
  return lu.solve(o * sys.rho);
}

Mat pseudo_adjoint(const Mat& L, const Mat& eta) {
  Eigen::FullPivLU<Mat> lu(eta);
  if (!lu.isInvertible()) throw Error(Errc::Singular, "pseudo-metric is singular");
  return lu.solve(L.adjoint() * eta);
}

double expectation_imag_max(const Mat& H, const Mat& eta, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const Eigen::Index n = H.rows();
  const double scale = opnorm(H) * opnorm(eta);
  Mat etaH = eta * H;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vec psi(n);
    for (Eigen::Index i = 0; i < n; ++i) psi(i) = cplx(g(rng), g(rng));
    cplx e = psi.dot(etaH * psi);
    worst = std::max(worst, std::abs(e.imag()) / (scale * psi.squaredNorm()));
  }
  return worst;
}

cplx eta_trace(const Mat& K, const Mat& eta, const Mat& basis) {
  // Gram-Schmidt in <.|eta .> via the Cholesky factor of the Gram matrix.
  Mat G = basis.adjoint() * eta * basis;
  Eigen::LLT<Mat> llt(0.5 * (G + G.adjoint()));
  if (llt.info() != Eigen::Success) throw Error(Errc::NotPositiveDefinite, "eta Gram matrix not positive");
  Mat E = llt.matrixU().solve<Eigen::OnTheRight>(basis);
  cplx tr = 0;
  for (Eigen::Index i = 0; i < E.cols(); ++i) tr += E.col(i).dot(eta * K * E.col(i));
  return tr;
}

}  // namespace phqm::metric
