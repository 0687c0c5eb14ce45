#include <cmath>

#include "phqm/models.hpp"

namespace phqm::models {

namespace {

using namespace std::complex_literals;

void check_reality(const SwansonParams& p) {
  if (!(p.hbar > 0) || !(p.omega > 0)) throw Error(Errc::InvalidArgument, "hbar and omega must be positive");
  if (!(p.hbar * p.hbar * p.omega * p.omega > 4 * p.alpha * p.beta))
    throw Error(Errc::RealityViolated, "hbar^2 omega^2 > 4 alpha beta fails");
}

Mat eta_2x2(cplx z, double r) {
  Mat e(2, 2);
  const double er = std::exp(r), emr = std::exp(-r);
  e << er - emr * std::norm(z), 1i * emr * z, 1i * emr * std::conj(z), emr;
  return e;
}

// exp(c X) for nilpotent X, summed until the terms vanish.
Mat exp_nilpotent(const Mat& X, cplx c) {
  const Eigen::Index n = X.rows();
  Mat out = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    term = (c / double(k)) * (term * X);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    out += term;
  }
  return out;
}

}  // namespace

SwansonMetric swanson_metric(const SwansonParams& p, double r, int branch) {
  check_reality(p);
  if (branch != 1 && branch != -1) throw Error(Errc::InvalidArgument, "branch must be +1 or -1");
  const double at = p.alpha_t(), bt = p.beta_t();
  const double s = std::exp(r);
  const double disc = 4 * at * at * s * s + 1 - 4 * at * bt;
  if (disc < 0) throw Error(Errc::RealityViolated, "negative discriminant");

  SwansonMetric m;
  m.r = r;
  if (at == 0.0) {
    if (branch == -1) throw Error(Errc::InvalidArgument, "the - branch diverges at alpha = 0");
    m.w = -bt / s;
  } else if (branch == 1) {
    // Rationalized form of (-1 + sqrt(disc)) / (2 at s); stable as at -> 0.
    m.w = (4 * at * at * s * s - 4 * at * bt) / (2 * at * s * (1 + std::sqrt(disc)));
  } else {
    m.w = (-1 - std::sqrt(disc)) / (2 * at * s);
  }
  m.z = s * m.w;
  const double hw = p.hbar * p.omega;
  m.eta2 = eta_2x2(m.z, r);
  m.H2.resize(2, 2);
  m.H2 << 1, 2i * at, 2i * bt, -1;
  m.H2 *= hw;
  m.H2sharp.resize(2, 2);
  m.H2sharp << 1, 2i * bt, 2i * at, -1;
  m.H2sharp *= hw;
  Mat lhs = m.eta2 * m.H2 * m.eta2.inverse();
  m.residual = linalg::opnorm(lhs - m.H2sharp) / hw;
  return m;
}

SuOneOne su11_fock(int n_max) {
  if (n_max < 2) throw Error(Errc::InvalidArgument, "n_max must be at least 2");
  Mat a = Mat::Zero(n_max, n_max);
  for (int k = 1; k < n_max; ++k) a(k - 1, k) = std::sqrt(double(k));
  Mat ad = a.adjoint();
  SuOneOne g;
  g.Kp = 0.5 * ad * ad;
  g.Km = 0.5 * a * a;
  g.K3 = 0.5 * (ad * a + 0.5 * Mat::Identity(n_max, n_max));  // a^dagger a is exact on the truncation
  g.K1 = 0.5 * (g.Kp + g.Km);
  g.K2 = -0.5i * (g.Kp - g.Km);
  return g;
}

Mat lie_metric(cplx z, double r, int n_max) {
  SuOneOne g = su11_fock(n_max);
  Vec d(n_max);
  for (int k = 0; k < n_max; ++k) d(k) = std::exp(2 * r * g.K3(k, k).real());
  return exp_nilpotent(g.Kp, z) * d.asDiagonal() * exp_nilpotent(g.Km, std::conj(z));
}

SwansonTruncation swanson_truncated(const SwansonParams& p, double r, int n_max, int branch) {
  if (n_max < 16) throw Error(Errc::InvalidArgument, "n_max must be at least 16");
  SwansonMetric m = swanson_metric(p, r, branch);
  SuOneOne g = su11_fock(n_max);
  const double hw = p.hbar * p.omega;

  SwansonTruncation t;
  t.H = 2.0 * (p.alpha * g.Kp + p.beta * g.Km + hw * g.K3);
  t.eta = lie_metric(m.z, r, n_max);
  Mat R = t.eta * t.H - t.H.adjoint() * t.eta;
  const Eigen::Index b = n_max - 2;
  t.interior_residual = R.topLeftCorner(b, b).cwiseAbs().maxCoeff() / t.eta.cwiseAbs().maxCoeff() / hw;

  // rho = sqrt(eta) on the 2x2 image: for a positive 2x2 matrix
  // sqrt(X) = (X + sqrt(det X) I) / sqrt(tr X + 2 sqrt(det X)), and det eta2 = 1.
  Mat rho2 = (m.eta2 + Mat::Identity(2, 2)) / std::sqrt(m.eta2.trace().real() + 2);
  const double r_rho = -std::log(rho2(1, 1).real());
  const cplx z_rho = -1i * rho2(0, 1) / rho2(1, 1);
  Mat h2 = rho2 * m.H2 * rho2.inverse();

  // h2 = sum eps_b K_b in the 2x2 representation.
  Mat k1(2, 2), k2(2, 2), k3(2, 2);
  k1 << 0, 0.5i, 0.5i, 0;
  k2 << 0, 0.5, -0.5, 0;
  k3 << 0.5, 0, 0, -0.5;
  Mat A(4, 3);
  A.col(0) = Eigen::Map<Vec>(k1.data(), 4);
  A.col(1) = Eigen::Map<Vec>(k2.data(), 4);
  A.col(2) = Eigen::Map<Vec>(k3.data(), 4);
  Vec e = A.colPivHouseholderQr().solve(Eigen::Map<Vec>(h2.data(), 4));
  for (int b2 = 0; b2 < 3; ++b2) t.eps[b2] = e(b2).real();
  t.h = t.eps[0] * g.K1 + t.eps[1] * g.K2 + t.eps[2] * g.K3;

  Mat rho = lie_metric(z_rho, r_rho, n_max);
  t.system = metric::system_from_rho(rho, t.h);
  return t;
}

}  // namespace phqm::models
