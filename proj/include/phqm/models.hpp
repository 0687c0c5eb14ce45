#pragma once

#include <array>
#include <string>
#include <vector>

#include "phqm/metric.hpp"
#include "phqm/perturbation.hpp"

namespace phqm::models {

// ---- two-level toy model ----

struct TwoLevelParams {
  double D = 4.0;
  double r = 1.0;  // general metric family: r > 0
  double s = 0.0;  // s in (-1, 1)
};

struct TwoLevelModel {
  Mat A;
  Mat eta_plus;     // exp(theta sigma_1), theta = ln(D) / 2
  Mat eta_general;  // r [eta_plus-part + s Sigma_3-part]
  Mat h;            // sqrt(D) sigma_3
  Mat C;
  Mat S;            // antilinear symmetry matrix (plain conjugation)
  Mat psis;         // columns psi_1, psi_2
  double theta = 0;
};

Mat two_level_A(double D);
TwoLevelModel two_level(const TwoLevelParams& p);

// L with eta_general(r, s) = L^dagger eta_plus L, where r = 2(r1 + r2)/sqrt(D)
// and s = (r1 - r2)/(r1 + r2).
Mat two_level_L(double D, double r1, double r2, double phi1, double phi2);

// ---- Swanson oscillator ----

struct SwansonParams {
  double hbar = 1.0;
  double omega = 1.0;
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_t() const { return alpha / (hbar * omega); }
  double beta_t() const { return beta / (hbar * omega); }
};

struct SwansonMetric {
  double r = 0;
  double w = 0;
  cplx z;
  Mat eta2;     // 2x2 image of the metric
  Mat H2;       // 2x2 image of H
  Mat H2sharp;  // 2x2 image of H^dagger
  double residual = 0;
};

// branch = +1 (default) or -1 selects the root of the quadratic for w.
SwansonMetric swanson_metric(const SwansonParams& p, double r, int branch = 1);

// Fock-space K_+, K_-, K_3 and K_1, K_2 truncated to n_max levels.
struct SuOneOne {
  Mat Kp, Km, K1, K2, K3;
};
SuOneOne su11_fock(int n_max);

// exp(z K_+) exp(2 r K_3) exp(conj(z) K_-) on the truncation.
Mat lie_metric(cplx z, double r, int n_max);

struct SwansonTruncation {
  Mat H;        // truncated Swanson Hamiltonian
  Mat eta;      // truncated Lie-form metric
  Mat h;        // Hermitian, from the 2x2 similarity mapped back to the algebra
  std::array<double, 3> eps{};  // h = sum eps_b K_b
  double interior_residual = 0; // |eta H - H^dagger eta| on indices < n_max - 2, relative to |eta|
  metric::QuasiHermitianSystem system;  // exactly quasi-Hermitian companion built from rho and h
};

SwansonTruncation swanson_truncated(const SwansonParams& p, double r, int n_max, int branch = 1);

// ---- wrong-sign quartic ----

struct QuarticParams {
  double lambda = 1.0 / 16;
  double omega = 0.0;
  int n = 256;
  double L = 30.0;
};

struct QuarticPair {
  Eigen::VectorXd s;  // grid for H
  Mat H;
  Eigen::VectorXd k;  // grid for h
  Mat h;
  Eigen::VectorXd g;  // g(k) on the h grid; eta_+ = exp(2 g)
  Vec spec_H;         // sorted by real part
  Eigen::VectorXd spec_h;
  double tail = 0;    // largest boundary amplitude of the lowest h eigenvectors
};

// Periodic grid x_j = -L + j dx, dx = 2L/n and the angular wavenumbers.
void periodic_grid(int n, double L, Eigen::VectorXd& x, Eigen::VectorXd& q);
// F^{-1} diag(f(q)) F on the periodic grid.
Mat fourier_multiplier(const Eigen::VectorXd& fq);

double quartic_g(double k, double lambda, double omega);
double quartic_g_prime(double k, double lambda, double omega);
double quartic_h_potential(double k, double lambda, double omega);
// gamma/4 [gamma (x^2 - 4 omega^2)^2 - 2x]
double linear_quartic_potential(double x, double gamma, double omega);

QuarticPair quartic_pair(const QuarticParams& p, int n_eigs = 5);

// ---- first-order kernel metrics ----

enum class KernelKind { SquareWell, Barrier, Delta };

struct KernelPotentialSpec {
  KernelKind kind = KernelKind::Barrier;
  double zeta = 0.01;
  double L = 1.0;
  double kappa = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
};

struct KernelGrid {
  int n = 400;
  double x_min = -2.0;
  double x_max = 2.0;
};

struct ResidualReport {
  double residual_zeta = 0;
  double residual_half = 0;
  double order = 0;
  bool first_order_regime = true;  // predicted O(zeta^2) below 10% of the O(zeta) term
};

struct KernelMetric {
  Eigen::VectorXd x;
  double dx = 0;
  Mat K;    // kernel values eta(x, y) - delta(x - y)
  Mat eta;  // I + dx K
  Mat H;
  ResidualReport report;
};

KernelKind parse_kernel_kind(const std::string& s);
const char* kernel_kind_name(KernelKind k);

cplx kernel_value(const KernelPotentialSpec& spec, double x, double y);
cplx kernel_potential(const KernelPotentialSpec& spec, double x);  // smooth part (0 for delta)

// Weak-form residual max_{f,g} |f^T (eta H - H^dagger eta) g| dx over Gaussian probes.
double kernel_residual(const KernelPotentialSpec& spec, const KernelGrid& grid);

KernelMetric kernel_metric(const KernelPotentialSpec& spec, const KernelGrid& grid);

struct KleinGordonReport {
  double residual = 0;  // max over smooth points
  double bound = 0;     // 4 (m / hbar^2) zeta^2 max|K / zeta|
  int points = 0;
};
KleinGordonReport klein_gordon_residual(const KernelPotentialSpec& spec, const KernelGrid& grid);

// ---- PT-symmetric cubic oscillator p^2/2m + mu^2 x^2/2 + i eps x^3 ----

struct CubicOscillator {
  Mat x, p;
  perturbation::PerturbationProblem problem;  // H1 = i x^3
};
CubicOscillator pt_cubic(int n_max, double mass, double mu, double epsilon, int order, double hbar = 1.0);

}  // namespace phqm::models
