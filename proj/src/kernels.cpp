#include <cmath>
#include <vector>

#include "phqm/models.hpp"

namespace phqm::models {

namespace {

using namespace std::complex_literals;

double sgn(double t) { return std::abs(t) < 1e-12 ? 0.0 : (t > 0 ? 1.0 : -1.0); }
double theta(double t) { return 0.5 * (1 + sgn(t)); }

void validate(const KernelPotentialSpec& s, const KernelGrid& g) {
  if (!(s.mass > 0) || !(s.hbar > 0)) throw Error(Errc::InvalidArgument, "mass and hbar must be positive");
  if (!(s.L > 0)) throw Error(Errc::InvalidArgument, "L must be positive");
  if (s.kind == KernelKind::Delta && !(s.kappa > 0))
    throw Error(Errc::InvalidArgument, "kappa must be positive (spectral singularities are not handled)");
  if (g.n < 16) throw Error(Errc::GridTooSmall, "kernel grid needs at least 16 points");
  if (!(g.x_max > g.x_min)) throw Error(Errc::InvalidArgument, "x_max must exceed x_min");
  const double tol = 1e-9 * (g.x_max - g.x_min);
  if (s.kind == KernelKind::SquareWell &&
      (std::abs(g.x_min + s.L / 2) > tol || std::abs(g.x_max - s.L / 2) > tol))
    throw Error(Errc::InvalidArgument, "square-well grid must span [-L/2, L/2]");
  if (s.kind == KernelKind::Barrier && (g.x_min > -s.L / 2 || g.x_max < s.L / 2))
    throw Error(Errc::InvalidArgument, "grid must cover the barrier support");
  if (s.kind == KernelKind::Delta && (g.n % 2 != 0 || std::abs(g.x_min + g.x_max) > tol))
    throw Error(Errc::InvalidArgument, "delta kernel needs an even, symmetric grid");
}

Eigen::VectorXd midpoints(const KernelGrid& g, double& dx) {
  dx = (g.x_max - g.x_min) / g.n;
  Eigen::VectorXd x(g.n);
  for (int i = 0; i < g.n; ++i) x(i) = g.x_min + (i + 0.5) * dx;
  return x;
}

Mat hamiltonian(const KernelPotentialSpec& s, const Eigen::VectorXd& x, double dx) {
  const Eigen::Index n = x.size();
  const double c = s.hbar * s.hbar / (2 * s.mass * dx * dx);
  Mat H = Mat::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    H(i, i) = 2 * c + kernel_potential(s, x(i));
    if (i > 0) H(i, i - 1) = -c;
    if (i + 1 < n) H(i, i + 1) = -c;
  }
  if (s.kind == KernelKind::Delta) {
    // Four-node weights around x = 0, which lies between nodes n/2 - 1 and n/2.
    const cplx zz = s.kappa * s.hbar * s.hbar / s.mass + 1i * s.zeta;
    const Eigen::Index i0 = n / 2;
    const double w[4] = {-0.25, 0.75, 0.75, -0.25};
    for (int k = 0; k < 4; ++k) H(i0 - 2 + k, i0 - 2 + k) += zz * w[k] / dx;
  }
  return H;
}

struct Probe {
  std::vector<double> centers;
  double sigma;
};

Probe probes(const KernelPotentialSpec& s) {
  switch (s.kind) {
    case KernelKind::SquareWell: return {{-0.15 * s.L, -0.05 * s.L, 0.05 * s.L, 0.15 * s.L}, 0.04 * s.L};
    case KernelKind::Barrier: return {{-0.5 * s.L, -0.15 * s.L, 0.05 * s.L, 0.4 * s.L}, 0.2 * s.L};
    case KernelKind::Delta: {
      double l = 1.0 / s.kappa;
      return {{-0.5 * l, -0.15 * l, 0.05 * l, 0.4 * l}, 0.2 * l};
    }
  }
  return {};
}

Mat kernel_matrix(const KernelPotentialSpec& s, const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Mat K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = kernel_value(s, x(i), x(j));
  return K;
}

double weak_residual(const Mat& R, const Eigen::VectorXd& x, double dx, const Probe& pr) {
  std::vector<Vec> fs;
  for (double c : pr.centers) {
    Vec f(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      f(i) = std::exp(-(x(i) - c) * (x(i) - c) / (2 * pr.sigma * pr.sigma));
    fs.push_back(f);
  }
  double worst = 0;
  for (const auto& f : fs) {
    Vec Rf = R.transpose() * f;
    for (const auto& g : fs) worst = std::max(worst, std::abs(Rf.dot(g)) * dx);
  }
  return worst;
}

}  // namespace

KernelKind parse_kernel_kind(const std::string& s) {
  if (s == "square_well") return KernelKind::SquareWell;
  if (s == "barrier") return KernelKind::Barrier;
  if (s == "delta") return KernelKind::Delta;
  throw Error(Errc::UnsupportedKind, "unknown kernel kind '" + s + "'");
}

const char* kernel_kind_name(KernelKind k) {
  switch (k) {
    case KernelKind::SquareWell: return "square_well";
    case KernelKind::Barrier: return "barrier";
    case KernelKind::Delta: return "delta";
  }
  return "?";
}

cplx kernel_value(const KernelPotentialSpec& s, double x, double y) {
  const double mh = s.mass / (s.hbar * s.hbar);
  switch (s.kind) {
    case KernelKind::SquareWell:
      return 1i * (s.zeta * mh / 2) * std::abs(x + y) * sgn(x - y);
    case KernelKind::Barrier: {
      // The prefactor is fixed by the first-order field equation; see the README.
      double u = x + y, L = s.L;
      return 1i * (s.zeta * mh / 4) * (2 * L + 2 * std::abs(u) - std::abs(u + L) - std::abs(u - L)) * sgn(x - y);
    }
    case KernelKind::Delta:
      return 1i * (s.zeta * mh / 2) *
             (theta(x * y) * std::exp(-s.kappa * std::abs(x - y)) +
              theta(-x * y) * std::exp(-s.kappa * std::abs(x + y))) *
             sgn(std::abs(y) - std::abs(x));
  }
  throw Error(Errc::UnsupportedKind, "unknown kernel kind");
}

cplx kernel_potential(const KernelPotentialSpec& s, double x) {
  if (s.kind == KernelKind::Delta) return 0.0;
  return std::abs(x) < s.L / 2 ? cplx(0, -s.zeta * sgn(x)) : cplx(0);
}

double kernel_residual(const KernelPotentialSpec& spec, const KernelGrid& grid) {
  validate(spec, grid);
  double dx;
  Eigen::VectorXd x = midpoints(grid, dx);
  Mat H = hamiltonian(spec, x, dx);
  Mat E = Mat::Identity(grid.n, grid.n) + dx * kernel_matrix(spec, x);
  Mat R = E * H - H.adjoint() * E;
  return weak_residual(R, x, dx, probes(spec));
}

KernelMetric kernel_metric(const KernelPotentialSpec& spec, const KernelGrid& grid) {
  validate(spec, grid);
  KernelMetric out;
  out.x = midpoints(grid, out.dx);
  out.K = kernel_matrix(spec, out.x);
  out.eta = Mat::Identity(grid.n, grid.n) + out.dx * out.K;
  out.H = hamiltonian(spec, out.x, out.dx);

  Probe pr = probes(spec);
  Mat R = out.eta * out.H - out.H.adjoint() * out.eta;
  out.report.residual_zeta = weak_residual(R, out.x, out.dx, pr);
  KernelPotentialSpec half = spec;
  half.zeta = spec.zeta / 2;
  out.report.residual_half = kernel_residual(half, grid);
  if (out.report.residual_zeta > 0 && out.report.residual_half > 0)
    out.report.order = std::log2(out.report.residual_zeta / out.report.residual_half);
  Mat KH = out.dx * (out.K * out.H - out.H.adjoint() * out.K);
  double first = weak_residual(KH, out.x, out.dx, pr);
  out.report.first_order_regime = out.report.residual_zeta <= 0.1 * first;
  return out;
}

KleinGordonReport klein_gordon_residual(const KernelPotentialSpec& spec, const KernelGrid& grid) {
  validate(spec, grid);
  double h;
  Eigen::VectorXd x = midpoints(grid, h);
  const int n = grid.n;
  Mat K = kernel_matrix(spec, x);
  const double c2 = 2 * spec.mass / (spec.hbar * spec.hbar);

  auto near = [&](double d) { return std::abs(d) < 2.5 * h; };
  KleinGordonReport rep;
  double kmax = K.cwiseAbs().maxCoeff();
  rep.bound = 4 * (spec.mass / (spec.hbar * spec.hbar)) * std::abs(spec.zeta) * kmax;
  for (int i = 1; i < n - 1; ++i)
    for (int j = 1; j < n - 1; ++j) {
      double xi = x(i), yj = x(j);
      if (near(xi - yj) || near(xi + yj) || near(xi) || near(yj)) continue;
      if (spec.kind == KernelKind::Barrier &&
          (near(xi + yj - spec.L) || near(xi + yj + spec.L) || near(std::abs(xi) - spec.L / 2) ||
           near(std::abs(yj) - spec.L / 2)))
        continue;
      cplx dxx = (K(i + 1, j) - 2.0 * K(i, j) + K(i - 1, j)) / (h * h);
      cplx dyy = (K(i, j + 1) - 2.0 * K(i, j) + K(i, j - 1)) / (h * h);
      cplx mu2 = c2 * (kernel_potential(spec, yj) - std::conj(kernel_potential(spec, xi)));
      rep.residual = std::max(rep.residual, std::abs(dxx - dyy + mu2 * K(i, j)));
      ++rep.points;
    }
  return rep;
}

CubicOscillator pt_cubic(int n_max, double mass, double mu, double epsilon, int order, double hbar) {
  if (!(mass > 0) || !(mu > 0)) throw Error(Errc::InvalidArgument, "mass and mu must be positive");
  const double omega = mu / std::sqrt(mass);
  CubicOscillator c;
  std::tie(c.x, c.p) = perturbation::oscillator_basis(n_max, mass, hbar, omega);
  Mat H0 = Mat::Zero(n_max, n_max);
  for (int k = 0; k < n_max; ++k) H0(k, k) = hbar * omega * (k + 0.5);
  c.problem.H0 = H0;
  c.problem.H1 = 1i * c.x * c.x * c.x;
  c.problem.epsilon = epsilon;
  c.problem.order = order;
  return c;
}

}  // namespace phqm::models
