#include "phqm/statespace.hpp"

#include <algorithm>
#include <cmath>

namespace phqm::statespace {

namespace {

using namespace std::complex_literals;
constexpr double kPi = 3.14159265358979323846;

Mat metric_or_identity(const std::optional<Mat>& eta, Eigen::Index n) {
  if (!eta) return Mat::Identity(n, n);
  if (eta->rows() != n || eta->cols() != n) throw Error(Errc::DimensionMismatch, "eta and state sizes differ");
  return *eta;
}

void require_nonzero(const Vec& psi) {
  if (psi.size() == 0 || psi.norm() == 0.0) throw Error(Errc::ZeroVector, "state vector is zero");
}

double eta_norm2(const Vec& psi, const Mat& eta) { return psi.dot(eta * psi).real(); }

}  // namespace

ProjectiveState projector(const Vec& psi, const std::optional<Mat>& eta) {
  require_nonzero(psi);
  Mat e = metric_or_identity(eta, psi.size());
  if (eta) metric::make_metric(e);
  return {psi * (e * psi).adjoint() / eta_norm2(psi, e), psi};
}

Mat fs_metric(const Vec& psi, const std::optional<Mat>& eta) {
  require_nonzero(psi);
  Mat e = metric_or_identity(eta, psi.size());
  const double N = eta_norm2(psi, e);
  Vec ep = e * psi;
  return (N * e - ep * ep.adjoint()) / (N * N);
}

TwoLevelLineElement two_level_geometry(const Mat& eta) {
  if (eta.rows() != 2 || eta.cols() != 2) throw Error(Errc::DimensionMismatch, "two-level geometry needs a 2x2 metric");
  if (!linalg::is_hermitian(eta)) throw Error(Errc::NotHermitian, "metric must be Hermitian");
  TwoLevelLineElement g;
  g.a = eta(0, 0).real();
  g.c = eta(1, 1).real();
  g.b1 = eta(1, 0).real();
  g.b2 = eta(1, 0).imag();
  const double tr = g.a + g.c;
  const double det = g.a * g.c - (g.b1 * g.b1 + g.b2 * g.b2);
  if (!(tr > 0) || !(det > 0)) throw Error(Errc::NotPositiveDefinite, "metric must have positive trace and determinant");
  g.k1 = det / (tr * tr);
  g.k2 = (g.a - g.c) / tr;
  g.k3 = 2 * std::hypot(g.b1, g.b2) / tr;
  g.beta = std::atan2(g.b2, g.b1);
  return g;
}

double line_element(const TwoLevelLineElement& g, double theta, double phi, double dtheta, double dphi) {
  const double st = std::sin(theta);
  const double den = 1 + g.k2 * std::cos(theta) + g.k3 * std::cos(phi - g.beta) * st;
  return g.k1 * (dtheta * dtheta + st * st * dphi * dphi) / (den * den);
}

double line_element_chart(const TwoLevelLineElement& g, double x, double y, double dx, double dy) {
  const double det = g.a * g.c - (g.b1 * g.b1 + g.b2 * g.b2);
  const double den = g.a + 2 * (g.b1 * x + g.b2 * y) + g.c * (x * x + y * y);
  return det * (dx * dx + dy * dy) / (den * den);
}

std::vector<LineSample> sample_line_element(const TwoLevelLineElement& g, int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw Error(Errc::InvalidArgument, "sample counts must be positive");
  std::vector<LineSample> out;
  out.reserve(std::size_t(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i)
    for (int j = 0; j < n_phi; ++j) {
      double th = kPi * (i + 0.5) / n_theta, ph = 2 * kPi * j / n_phi;
      out.push_back({th, ph, line_element(g, th, ph, 1.0, 0.0)});
    }
  return out;
}

double projective_fidelity(const Vec& a, const Vec& b, const std::optional<Mat>& eta) {
  require_nonzero(a);
  require_nonzero(b);
  Mat e = metric_or_identity(eta, a.size());
  if (b.size() != a.size()) throw Error(Errc::DimensionMismatch, "state sizes differ");
  return std::norm(a.dot(e * b)) / (eta_norm2(a, e) * eta_norm2(b, e));
}

double geodesic_distance(const Vec& psi_i, const Vec& psi_f, const std::optional<Mat>& eta) {
  double c2 = std::clamp(projective_fidelity(psi_i, psi_f, eta), 0.0, 1.0);
  return std::acos(std::sqrt(c2));
}

OptimalHamiltonian optimal_hamiltonian(const BrachistochroneProblem& prob) {
  require_nonzero(prob.psi_i);
  require_nonzero(prob.psi_f);
  if (prob.psi_i.size() != prob.psi_f.size()) throw Error(Errc::DimensionMismatch, "state sizes differ");
  if (!(prob.E > 0) || !(prob.hbar > 0)) throw Error(Errc::InvalidArgument, "E and hbar must be positive");
  const Mat eta = metric_or_identity(prob.eta, prob.psi_i.size());
  if (prob.eta) metric::make_metric(eta);

  OptimalHamiltonian out;
  out.s = geodesic_distance(prob.psi_i, prob.psi_f, eta);
  if (out.s < 1e-8) throw Error(Errc::IdenticalStates, "initial and final states coincide");

  Vec ui = prob.psi_i / std::sqrt(eta_norm2(prob.psi_i, eta));
  Vec uf = prob.psi_f / std::sqrt(eta_norm2(prob.psi_f, eta));
  cplx ov = ui.dot(eta * uf);
  if (std::abs(ov) < 1e-12)
    uf *= std::polar(1.0, prob.antipodal_phase);
  else
    uf *= std::conj(ov) / std::abs(ov);  // <ui|eta uf> = cos s > 0

  Mat X = uf * (eta * ui).adjoint() - ui * (eta * uf).adjoint();
  out.H_star = (1i * prob.E / std::sin(out.s)) * X;
  out.tau_min = prob.hbar * out.s / prob.E;
  return out;
}

Vec evolve(const Mat& H, const Vec& psi0, double t, double hbar) {
  if (H.rows() != psi0.size()) throw Error(Errc::DimensionMismatch, "H and state sizes differ");
  if (!(hbar > 0)) throw Error(Errc::InvalidArgument, "hbar must be positive");
  if (H.isZero(0.0)) return psi0;
  auto eig = linalg::eig_nonhermitian(H);
  return linalg::matrix_function(eig, [&](cplx e) { return std::exp(-1i * e * t / hbar); }) * psi0;
}

double energy_uncertainty(const Mat& H, const Vec& psi, const std::optional<Mat>& eta) {
  require_nonzero(psi);
  Mat e = metric_or_identity(eta, psi.size());
  const double N = eta_norm2(psi, e);
  Vec Hp = H * psi;
  cplx e2 = psi.dot(e * (H * Hp)) / N;
  cplx e1 = psi.dot(e * Hp) / N;
  return std::sqrt(std::max(0.0, e2.real() - std::norm(e1)));
}

Mat eta_for_k1(double k1) {
  if (!(k1 > 0) || k1 > 0.25) throw Error(Errc::OutOfRange, "k1 must lie in (0, 1/4]");
  const double a = ((1 - 2 * k1) + std::sqrt(1 - 4 * k1)) / (2 * k1);
  Mat e = Mat::Identity(2, 2);
  e(0, 0) = a;
  return e;
}

}  // namespace phqm::statespace
