#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "phqm/error.hpp"

namespace phqm::classical {

using cplx = std::complex<double>;
using CFun = std::function<cplx(cplx)>;
using W = Eigen::Vector4d;  // (x, p, y, q) with z = x + i y, p_c = p + i q
using WFun = std::function<cplx(const W&)>;

struct ComplexPhasePoint {
  cplx z;
  cplx p;
};

struct SymplecticParams {
  double a = 0, b = 0, c = 0, d = 0;
};

struct DarbouxPoint {
  double x1 = 0, p1 = 0, x2 = 0, p2 = 0;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<ComplexPhasePoint> pts;
};

// m z' = p, p' = -V'(z) with classical RK4; samples every `sample_every` steps.
Trajectory flow(const CFun& V_prime, double m, ComplexPhasePoint s0, double t_end, double dt,
                int sample_every = 1);

Eigen::Matrix4d symplectic_matrix(const SymplecticParams& prm);
Eigen::Matrix4d standard_matrix();

// sum_jk dA/dw_j J_jk dB/dw_k with central differences.
cplx bracket_with(const Eigen::Matrix4d& J, const WFun& A, const WFun& B, const W& pt, double step = 1e-5);
cplx bracket(const SymplecticParams& prm, const WFun& A, const WFun& B, const W& pt, double step = 1e-5);

W to_w(const ComplexPhasePoint& s);
ComplexPhasePoint from_w(const W& w);
DarbouxPoint darboux(const W& w);
W from_darboux(const DarbouxPoint& d);
DarbouxPoint darboux(const ComplexPhasePoint& s);

// Complex Hamiltonian p^2 / 2m + V(z).
cplx complex_hamiltonian(const CFun& V, double m, const ComplexPhasePoint& s);

struct RealHamiltonians {
  double K = 0;   // 2 Re h
  double Hi = 0;  // Im h
};

// Throws InvalidArgument if V fails the Cauchy-Riemann check at the point.
RealHamiltonians real_hamiltonians(const CFun& V, const DarbouxPoint& pt, double m);

// Largest Cauchy-Riemann violation of V at z (central differences).
double cauchy_riemann_defect(const CFun& V, cplx z, double step = 1e-5);

// One Euler step of the flow generated by H_i under the standard Darboux bracket.
DarbouxPoint symmetry_flow(const CFun& V_prime, const DarbouxPoint& pt, double xi, double m);

// {A, B} in Darboux coordinates with the standard bracket.
double darboux_bracket(const std::function<double(const DarbouxPoint&)>& A,
                       const std::function<double(const DarbouxPoint&)>& B, const DarbouxPoint& pt,
                       double step = 1e-5);

// Smallest singular value of the 2x4 Jacobian of (K, H_i), relative to the largest.
double independence_measure(const CFun& V, const DarbouxPoint& pt, double m, double step = 1e-5);

}  // namespace phqm::classical
