#include "phqm/em.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace phqm::em {

namespace {

double clamp_z(const MediumProfile& m, double z) {
  if (z >= m.z_min && z <= m.z_max) return z;
  if (m.strict) throw Error(Errc::OutOfDomain, "z = " + std::to_string(z) + " outside the profile domain");
  return std::clamp(z, m.z_min, m.z_max);
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, 1e-13);
}

}  // namespace

MediumProfile vacuum(double z_min, double z_max) { return constant_medium(1.0, 1.0, z_min, z_max); }

MediumProfile constant_medium(double eps, double mu, double z_min, double z_max) {
  if (!(eps > 0) || !(mu > 0)) throw Error(Errc::InvalidArgument, "eps and mu must be positive");
  return {[eps](double) { return eps; }, [mu](double) { return mu; }, z_min, z_max, false};
}

MediumProfile tanh_medium(double eps0, double delta, double scale, double z_min, double z_max) {
  if (!(eps0 > 0) || !(std::abs(delta) < 1) || !(scale > 0))
    throw Error(Errc::InvalidArgument, "need eps0 > 0, |delta| < 1, scale > 0");
  return {[=](double z) { return eps0 * (1 + delta * std::tanh(z / scale)); }, [](double) { return 1.0; }, z_min,
          z_max, false};
}

MediumProfile sampled_medium(std::vector<double> z, std::vector<double> eps, std::vector<double> mu) {
  if (z.size() < 2 || eps.size() != z.size() || mu.size() != z.size())
    throw Error(Errc::LengthMismatch, "sampled profile needs matching arrays of at least two points");
  for (std::size_t i = 1; i < z.size(); ++i)
    if (!(z[i] > z[i - 1])) throw Error(Errc::InvalidArgument, "profile nodes must increase");
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(eps[i] > 0) || !(mu[i] > 0)) throw Error(Errc::InvalidArgument, "eps and mu must be positive");
  auto interp = [z](const std::vector<double>& v) {
    return [z, v](double x) {
      auto it = std::upper_bound(z.begin(), z.end(), x);
      if (it == z.begin()) return v.front();
      if (it == z.end()) return v.back();
      std::size_t i = it - z.begin();
      double f = (x - z[i - 1]) / (z[i] - z[i - 1]);
      return (1 - f) * v[i - 1] + f * v[i];
    };
  };
  return {interp(eps), interp(mu), z.front(), z.back(), false};
}

InitialFields gaussian_pulse(double center, double sigma, double amplitude) {
  if (!(sigma > 0)) throw Error(Errc::InvalidArgument, "pulse width must be positive");
  return {[=](double z) { return amplitude * std::exp(-(z - center) * (z - center) / (2 * sigma * sigma)); },
          [](double) { return 0.0; }};
}

double eps_at(const MediumProfile& m, double z) { return m.eps(clamp_z(m, z)); }
double mu_at(const MediumProfile& m, double z) { return m.mu(clamp_z(m, z)); }

double optical_path(const MediumProfile& m, double z) {
  if (m.strict) clamp_z(m, z);
  auto f = [&](double x) { return std::sqrt(eps_at(m, x) * mu_at(m, x)); };
  // Split at the domain edges so the integrand is smooth on each piece.
  double lo = std::min(0.0, z), hi = std::max(0.0, z);
  double acc = 0;
  std::vector<double> cuts{lo};
  for (double c : {m.z_min, m.z_max})
    if (c > lo && c < hi) cuts.push_back(c);
  cuts.push_back(hi);
  for (std::size_t i = 1; i < cuts.size(); ++i) acc += integrate(f, cuts[i - 1], cuts[i]);
  return z >= 0 ? acc : -acc;
}

double invert_u(const MediumProfile& m, double s) {
  double lo, hi;
  if (m.strict) {
    double ulo = optical_path(m, m.z_min), uhi = optical_path(m, m.z_max);
    if (s < ulo - 1e-12 || s > uhi + 1e-12) throw Error(Errc::OutOfRange, "optical path outside the domain range");
    lo = m.z_min;
    hi = m.z_max;
  } else {
    // u is increasing with slope at least min sqrt(eps mu) > 0; widen a bracket around 0.
    lo = -1.0;
    hi = 1.0;
    while (optical_path(m, lo) > s) lo *= 2;
    while (optical_path(m, hi) < s) hi *= 2;
  }
  auto g = [&](double z) { return optical_path(m, z) - s; };
  double glo = g(lo), ghi = g(hi);
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                             [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); },
                                             iters);
  return 0.5 * (r.first + r.second);
}

double propagate(const MediumProfile& m, const InitialFields& init, double z, double t) {
  const double uz = optical_path(m, z);
  const double wm = invert_u(m, uz - t), wp = invert_u(m, uz + t);
  auto imp = [&](double w) { return std::pow(eps_at(m, w) / mu_at(m, w), 0.25); };
  double sum = imp(wm) * init.E0(wm) + imp(wp) * init.E0(wp);
  if (init.E0_dot) {
    auto f = [&](double w) { return std::pow(mu_at(m, w), 0.25) * std::pow(eps_at(m, w), 0.75) * init.E0_dot(w); };
    sum += integrate(f, wm, wp);
  }
  return 0.5 * std::pow(mu_at(m, z) / eps_at(m, z), 0.25) * sum;
}

double slowly_varying_diagnostic(const MediumProfile& m, double width, int samples) {
  double worst = 0;
  const double h = 1e-5 * (m.z_max - m.z_min);
  for (int i = 0; i < samples; ++i) {
    double z = m.z_min + h + (m.z_max - m.z_min - 2 * h) * i / std::max(1, samples - 1);
    double de = (m.eps(z + h) - m.eps(z - h)) / (2 * h) / m.eps(z);
    double dm = (m.mu(z + h) - m.mu(z - h)) / (2 * h) / m.mu(z);
    worst = std::max(worst, std::abs(de) + std::abs(dm));
  }
  return worst * width;
}

namespace {

struct Stencil {
  Eigen::VectorXd z, eps, mu_half;
  double dz;
};

Stencil stencil(const MediumProfile& m, const FdtdGrid& g) {
  if (g.n < 3) throw Error(Errc::GridTooSmall, "grid needs at least 3 nodes");
  if (!(g.z_max > g.z_min)) throw Error(Errc::InvalidArgument, "z_max must exceed z_min");
  Stencil s;
  s.dz = (g.z_max - g.z_min) / (g.n - 1);
  s.z = Eigen::VectorXd::LinSpaced(g.n, g.z_min, g.z_max);
  s.eps.resize(g.n);
  s.mu_half.resize(g.n - 1);
  for (int i = 0; i < g.n; ++i) s.eps(i) = eps_at(m, s.z(i));
  for (int i = 0; i + 1 < g.n; ++i) s.mu_half(i) = mu_at(m, s.z(i) + 0.5 * s.dz);
  return s;
}

}  // namespace

FieldSnapshot fdtd_oracle(const MediumProfile& m, const InitialFields& init, double t_end, const FdtdGrid& g) {
  Stencil s = stencil(m, g);
  // Local wave speed 1/sqrt(eps mu); the scheme is stable for c dt <= dz.
  double cmax = 0;
  for (int i = 0; i + 1 < g.n; ++i)
    cmax = std::max(cmax, 1.0 / std::sqrt(std::min(s.eps(i), s.eps(i + 1)) * s.mu_half(i)));
  if (!(g.cfl > 0) || g.cfl * cmax > 1.0) throw Error(Errc::CFLViolation, "time step violates the CFL bound");
  if (t_end < 0) throw Error(Errc::InvalidArgument, "t_end must be non-negative");

  const long steps = std::max<long>(1, std::lround(std::ceil(t_end / (g.cfl * s.dz))));
  const double dt = t_end / steps;
  const int n = g.n;
  auto omega2 = [&](const Eigen::VectorXd& E) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int i = 1; i + 1 < n; ++i) {
      double fr = (E(i + 1) - E(i)) / s.mu_half(i), fl = (E(i) - E(i - 1)) / s.mu_half(i - 1);
      r(i) = -(fr - fl) / (s.dz * s.dz * s.eps(i));
    }
    return r;
  };
  Eigen::VectorXd Ep(n), Ed(n);
  for (int i = 0; i < n; ++i) {
    Ep(i) = init.E0(s.z(i));
    Ed(i) = init.E0_dot ? init.E0_dot(s.z(i)) : 0.0;
  }
  FieldSnapshot out;
  out.z = s.z;
  out.t = t_end;
  if (t_end == 0) {
    out.E = Ep;
    return out;
  }
  Eigen::VectorXd E = Ep + dt * Ed - 0.5 * dt * dt * omega2(Ep);
  for (long k = 1; k < steps; ++k) {
    Eigen::VectorXd En = 2 * E - Ep - dt * dt * omega2(E);
    Ep = std::move(E);
    E = std::move(En);
  }
  out.E = E;
  return out;
}

Omega2 omega2_matrix(const MediumProfile& m, const FdtdGrid& g) {
  Stencil s = stencil(m, g);
  const int n = g.n - 2;
  Omega2 o;
  o.Op = Eigen::MatrixXd::Zero(n, n);
  o.eps = s.eps.segment(1, n);
  o.z = s.z.segment(1, n);
  for (int k = 0; k < n; ++k) {
    int i = k + 1;
    double cl = 1.0 / s.mu_half(i - 1), cr = 1.0 / s.mu_half(i);
    double f = 1.0 / (s.dz * s.dz * s.eps(i));
    o.Op(k, k) = f * (cl + cr);
    if (k > 0) o.Op(k, k - 1) = -f * cl;
    if (k + 1 < n) o.Op(k, k + 1) = -f * cr;
  }
  return o;
}

double omega2_pseudo_hermiticity(const Omega2& o) {
  Eigen::MatrixXd lhs = o.eps.asDiagonal() * o.Op * o.eps.cwiseInverse().asDiagonal();
  double nrm = o.Op.cwiseAbs().maxCoeff();
  return (lhs - o.Op.transpose()).cwiseAbs().maxCoeff() / nrm;
}

double l2_distance(const FieldSnapshot& a, const Eigen::VectorXd& b) {
  if (b.size() != a.E.size()) throw Error(Errc::LengthMismatch, "field sizes differ");
  double dz = a.z.size() > 1 ? a.z(1) - a.z(0) : 1.0;
  return std::sqrt(dz * (a.E - b).squaredNorm());
}

}  // namespace phqm::em
