#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "phqm/biortho.hpp"

namespace phqm::metric {

inline constexpr double kPseudoHermTol = 1e-8;

// Positive-definite Hermitian eta_+ defining <.|eta_+ .>.
struct MetricOperator {
  Mat eta;
};

struct SignSequence {
  std::vector<int> sigma;  // entries +1 / -1, one per real eigenvalue
};

struct PseudoMetric {
  Mat eta;
  SignSequence sigma;
};

struct QuasiHermitianSystem {
  Mat H;
  MetricOperator eta_plus;
  Mat rho;  // sqrt(eta_plus)
  Mat h;    // rho H rho^{-1}
};

// Antilinear operator acting as z -> M conj(z).
struct AntilinearSymmetry {
  Mat M;
  Vec apply(const Vec& z) const { return M * z.conjugate(); }
};

// Validates Hermiticity and positivity.
MetricOperator make_metric(const Mat& eta, double tol = linalg::kDefaultTol);

// |eta A eta^{-1} - A^dagger| / |A|
double pseudo_hermiticity_residual(const Mat& A, const Mat& eta);

// Rescales so that the largest eigenvalue of eta is 1.
MetricOperator normalized(const MetricOperator& m);

MetricOperator metric_from_spectrum(const biortho::BiorthonormalSystem& bs, bool normalize = false);
Mat metric_inverse_from_spectrum(const biortho::BiorthonormalSystem& bs);

PseudoMetric pseudo_metric_family(const biortho::BiorthonormalSystem& bs, const SignSequence& sigma);

Mat charge_operator(const biortho::BiorthonormalSystem& bs, const SignSequence& sigma);

// M = sum_n psi_n phi_n^T. `phases`, if given, first multiplies psi_n by
// exp(i phases[n]) (and phi_n accordingly); M changes by exp(2i phases[n]).
AntilinearSymmetry antilinear_symmetry(const biortho::BiorthonormalSystem& bs,
                                       const std::vector<double>* phases = nullptr);

QuasiHermitianSystem build_system(const Mat& H, const MetricOperator& eta,
                                  double tol = kPseudoHermTol);

// Assembles a system from a known rho and Hermitian h without re-deriving them.
QuasiHermitianSystem system_from_rho(const Mat& rho, const Mat& h);

Mat observable_map(const Mat& o, const QuasiHermitianSystem& sys,
                   double tol = linalg::kDefaultTol);

Mat pseudo_adjoint(const Mat& L, const Mat& eta);

// Max over random psi of |Im <psi|eta H psi>| / (|H| |eta| |psi|^2).
double expectation_imag_max(const Mat& H, const Mat& eta, int samples, std::uint64_t seed);

// sum_n <e_n|eta K e_n> over an eta-orthonormal basis built from `basis`.
cplx eta_trace(const Mat& K, const Mat& eta, const Mat& basis);

}  // namespace phqm::metric
