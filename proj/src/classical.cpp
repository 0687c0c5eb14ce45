#include "phqm/classical.hpp"

#include <cmath>

namespace phqm::classical {

namespace {

using namespace std::complex_literals;
const double kSqrt2 = std::sqrt(2.0);

void check_finite(const ComplexPhasePoint& s) {
  auto bad = [](cplx c) { return !std::isfinite(c.real()) || !std::isfinite(c.imag()) || std::abs(c) > 1e12; };
  if (bad(s.z) || bad(s.p)) throw Error(Errc::StepOverflow, "trajectory diverged");
}

Eigen::Vector4d darboux_vec(const DarbouxPoint& d) { return {d.x1, d.p1, d.x2, d.p2}; }
DarbouxPoint darboux_pt(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }

}  // namespace

Trajectory flow(const CFun& V_prime, double m, ComplexPhasePoint s0, double t_end, double dt, int sample_every) {
  if (!(dt > 0)) throw Error(Errc::InvalidArgument, "dt must be positive");
  if (!(m > 0)) throw Error(Errc::InvalidArgument, "mass must be positive");
  if (t_end < 0) throw Error(Errc::InvalidArgument, "t_end must be non-negative");
  if (sample_every < 1) throw Error(Errc::InvalidArgument, "sample_every must be positive");
  const long steps = std::lround(t_end / dt);
  auto rhs = [&](const ComplexPhasePoint& s) { return ComplexPhasePoint{s.p / m, -V_prime(s.z)}; };

  Trajectory tr;
  tr.t.push_back(0.0);
  tr.pts.push_back(s0);
  ComplexPhasePoint s = s0;
  for (long k = 1; k <= steps; ++k) {
    auto k1 = rhs(s);
    auto k2 = rhs({s.z + 0.5 * dt * k1.z, s.p + 0.5 * dt * k1.p});
    auto k3 = rhs({s.z + 0.5 * dt * k2.z, s.p + 0.5 * dt * k2.p});
    auto k4 = rhs({s.z + dt * k3.z, s.p + dt * k3.p});
    s.z += dt / 6 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z);
    s.p += dt / 6 * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
    check_finite(s);
    if (k % sample_every == 0 || k == steps) {
      tr.t.push_back(k * dt);
      tr.pts.push_back(s);
    }
  }
  return tr;
}

Eigen::Matrix4d symplectic_matrix(const SymplecticParams& q) {
  if (std::abs(q.c * q.c + q.d * q.d - q.a * q.b - 1.0) < 1e-12)
    throw Error(Errc::DegenerateStructure, "c^2 + d^2 - ab = 1 gives a degenerate structure");
  Eigen::Matrix4d J;
  J << 0, 1 + q.c, -q.a, -q.d,
       -(1 + q.c), 0, -q.d, -q.b,
       q.a, q.d, 0, -1 + q.c,
       q.d, q.b, 1 - q.c, 0;
  return 0.5 * J;
}

Eigen::Matrix4d standard_matrix() {
  Eigen::Matrix4d J;
  J << 0, 1, 0, 0,
       -1, 0, 0, 0,
       0, 0, 0, 1,
       0, 0, -1, 0;
  return J;
}

namespace {

Eigen::Vector4cd gradient(const WFun& f, const W& pt, double h) {
  Eigen::Vector4cd g;
  for (int j = 0; j < 4; ++j) {
    W a = pt, b = pt;
    a(j) += h;
    b(j) -= h;
    g(j) = (f(a) - f(b)) / (2 * h);
  }
  return g;
}

}  // namespace

cplx bracket_with(const Eigen::Matrix4d& J, const WFun& A, const WFun& B, const W& pt, double step) {
  Eigen::Vector4cd ga = gradient(A, pt, step), gb = gradient(B, pt, step);
  return (ga.transpose() * J.cast<cplx>() * gb)(0, 0);
}

cplx bracket(const SymplecticParams& prm, const WFun& A, const WFun& B, const W& pt, double step) {
  return bracket_with(symplectic_matrix(prm), A, B, pt, step);
}

W to_w(const ComplexPhasePoint& s) { return {s.z.real(), s.p.real(), s.z.imag(), s.p.imag()}; }
ComplexPhasePoint from_w(const W& w) { return {cplx(w(0), w(2)), cplx(w(1), w(3))}; }

DarbouxPoint darboux(const W& w) { return {kSqrt2 * w(0), kSqrt2 * w(1), kSqrt2 * w(3), kSqrt2 * w(2)}; }
W from_darboux(const DarbouxPoint& d) { return {d.x1 / kSqrt2, d.p1 / kSqrt2, d.p2 / kSqrt2, d.x2 / kSqrt2}; }
DarbouxPoint darboux(const ComplexPhasePoint& s) { return darboux(to_w(s)); }

cplx complex_hamiltonian(const CFun& V, double m, const ComplexPhasePoint& s) {
  return s.p * s.p / (2 * m) + V(s.z);
}

double cauchy_riemann_defect(const CFun& V, cplx z, double h) {
  cplx dx = (V(z + h) - V(z - h)) / (2 * h);
  cplx dy = (V(z + 1i * h) - V(z - 1i * h)) / (2 * h);
  // d_x V_r = d_y V_i and d_y V_r = -d_x V_i, i.e. dy = i dx.
  double scale = std::max({std::abs(dx), std::abs(dy), 1.0});
  return std::abs(dy - 1i * dx) / scale;
}

RealHamiltonians real_hamiltonians(const CFun& V, const DarbouxPoint& pt, double m) {
  if (!(m > 0)) throw Error(Errc::InvalidArgument, "mass must be positive");
  const cplx z(pt.x1 / kSqrt2, pt.p2 / kSqrt2);
  if (cauchy_riemann_defect(V, z) > 1e-6)
    throw Error(Errc::InvalidArgument, "potential is not analytic at the sampled point");
  const cplx v = V(z);
  return {(pt.p1 * pt.p1 - pt.x2 * pt.x2) / (2 * m) + 2 * v.real(), pt.x2 * pt.p1 / (2 * m) + v.imag()};
}

DarbouxPoint symmetry_flow(const CFun& V_prime, const DarbouxPoint& pt, double xi, double m) {
  const cplx vp = V_prime(cplx(pt.x1 / kSqrt2, pt.p2 / kSqrt2));
  const double dVr_dx1 = vp.real() / kSqrt2;   // d_x V_r = Re V'
  const double dVr_dp2 = -vp.imag() / kSqrt2;  // d_y V_r = -Im V'
  DarbouxPoint out = pt;
  out.x1 += xi * pt.x2 / (2 * m);
  out.x2 += xi * dVr_dx1;
  out.p1 += xi * dVr_dp2;
  out.p2 -= xi * pt.p1 / (2 * m);
  return out;
}

double darboux_bracket(const std::function<double(const DarbouxPoint&)>& A,
                       const std::function<double(const DarbouxPoint&)>& B, const DarbouxPoint& pt, double step) {
  auto grad = [&](const std::function<double(const DarbouxPoint&)>& f) {
    Eigen::Vector4d g, v = darboux_vec(pt);
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector4d a = v, b = v;
      a(j) += step;
      b(j) -= step;
      g(j) = (f(darboux_pt(a)) - f(darboux_pt(b))) / (2 * step);
    }
    return g;
  };
  // Ordering (x1, p1, x2, p2): {A, B} = sum_i dA/dx_i dB/dp_i - dA/dp_i dB/dx_i.
  Eigen::Vector4d ga = grad(A), gb = grad(B);
  return ga(0) * gb(1) - ga(1) * gb(0) + ga(2) * gb(3) - ga(3) * gb(2);
}

double independence_measure(const CFun& V, const DarbouxPoint& pt, double m, double step) {
  Eigen::Matrix<double, 2, 4> Jac;
  Eigen::Vector4d v = darboux_vec(pt);
  for (int j = 0; j < 4; ++j) {
    Eigen::Vector4d a = v, b = v;
    a(j) += step;
    b(j) -= step;
    auto ra = real_hamiltonians(V, darboux_pt(a), m), rb = real_hamiltonians(V, darboux_pt(b), m);
    Jac(0, j) = (ra.K - rb.K) / (2 * step);
    Jac(1, j) = (ra.Hi - rb.Hi) / (2 * step);
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd(Jac);
  auto s = svd.singularValues();
  return s(0) > 0 ? s(1) / s(0) : 0.0;
}

}  // namespace phqm::classical
