#include <algorithm>
#include <cmath>
#include <numeric>

#include "phqm/models.hpp"

namespace phqm::models {

namespace {
using namespace std::complex_literals;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void periodic_grid(int n, double L, Eigen::VectorXd& x, Eigen::VectorXd& q) {
  const double dx = 2 * L / n;
  x.resize(n);
  q.resize(n);
  for (int j = 0; j < n; ++j) {
    x(j) = -L + dx * j;
    int f = j < (n + 1) / 2 ? j : j - n;  // fftfreq ordering
    q(j) = 2 * kPi * f / (n * dx);
  }
}

Mat fourier_multiplier(const Eigen::VectorXd& fq) {
  const Eigen::Index n = fq.size();
  // F_{kj} = exp(-2 pi i k j / n); F^{-1} = F^dagger / n.
  Mat F(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index j = 0; j < n; ++j) F(k, j) = std::polar(1.0, -2 * kPi * double((k * j) % n) / n);
  return F.adjoint() * fq.cast<cplx>().asDiagonal() * F / double(n);
}

double quartic_g(double k, double lambda, double omega) {
  return k * k * k / (96 * lambda) - (1 + omega * omega / (8 * lambda)) * k;
}

double quartic_g_prime(double k, double lambda, double omega) {
  return k * k / (32 * lambda) - (1 + omega * omega / (8 * lambda));
}

double quartic_h_potential(double k, double lambda, double omega) {
  double u = k * k - 4 * omega * omega;
  return u * u / (64 * lambda) - k / 2;
}

double linear_quartic_potential(double x, double gamma, double omega) {
  double u = x * x - 4 * omega * omega;
  return gamma / 4 * (gamma * u * u - 2 * x);
}

QuarticPair quartic_pair(const QuarticParams& p, int n_eigs) {
  if (!(p.lambda > 0)) throw Error(Errc::InvalidArgument, "lambda must be positive");
  if (p.omega < 0) throw Error(Errc::InvalidArgument, "omega must be non-negative");
  if (p.n < 64) throw Error(Errc::GridTooSmall, "at least 64 grid points are required");
  if (!(p.L > 0)) throw Error(Errc::InvalidArgument, "L must be positive");
  const int n = p.n;
  QuarticPair out;

  Eigen::VectorXd q;
  periodic_grid(n, p.L, out.s, q);
  Mat K1 = fourier_multiplier(q);
  Mat K2 = fourier_multiplier(q.cwiseProduct(q));
  Vec S = (1.0 + 1i * out.s.cast<cplx>().array()).matrix();
  out.H = S.asDiagonal() * K2 + 0.5 * K1;
  for (int j = 0; j < n; ++j) out.H(j, j) += -16 * p.lambda * S(j) * S(j) - 4 * p.omega * p.omega * S(j);

  // h acts on wavefunctions of the K variable; its natural range is narrower.
  Eigen::VectorXd qk;
  periodic_grid(n, 0.3 * p.L, out.k, qk);
  Mat D2 = fourier_multiplier(-qk.cwiseProduct(qk));
  out.h = -16 * p.lambda * D2;
  out.g.resize(n);
  for (int j = 0; j < n; ++j) {
    out.h(j, j) += quartic_h_potential(out.k(j), p.lambda, p.omega);
    out.g(j) = quartic_g(out.k(j), p.lambda, p.omega);
  }
  out.h = 0.5 * (out.h + out.h.adjoint());

  Eigen::ComplexEigenSolver<Mat> ces(out.H, false);
  out.spec_H = ces.eigenvalues();
  std::sort(out.spec_H.data(), out.spec_H.data() + n,
            [](const cplx& a, const cplx& b) { return a.real() < b.real(); });

  Eigen::SelfAdjointEigenSolver<Mat> es(out.h);
  out.spec_h = es.eigenvalues();
  const int edge = std::max(1, n / 20);
  for (int e = 0; e < std::min(n_eigs, n); ++e) {
    auto v = es.eigenvectors().col(e);
    double top = v.cwiseAbs().maxCoeff();
    double b = std::max(v.head(edge).cwiseAbs().maxCoeff(), v.tail(edge).cwiseAbs().maxCoeff());
    out.tail = std::max(out.tail, b / top);
  }
  if (out.tail > 1e-8)
    throw Error(Errc::GridTooSmall, "eigenfunction tails reach the grid boundary (" + std::to_string(out.tail) + ")");
  return out;
}

}  // namespace phqm::models
