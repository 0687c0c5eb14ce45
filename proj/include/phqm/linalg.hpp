#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "phqm/error.hpp"

namespace phqm {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace linalg {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kDefectiveCond = 1e12;

struct EigenDecomposition {
  Vec values;           // sorted by (real, imag)
  Mat vectors;          // column n is psi_n, unit norm, phase-fixed
  bool diagonalizable = true;
  double cond = 1.0;    // 2-norm condition number of `vectors`
  double max_residual = 0.0;  // max_n |A psi_n - a_n psi_n| / |A|
};

struct EigOptions {
  double cond_threshold = kDefectiveCond;
  bool throw_if_defective = true;
  // Orthonormalize right vectors inside numerically degenerate blocks.
  bool orthonormalize_degenerate = true;
};

void require_square(const Mat& A, const char* what);
void require_finite(const Mat& A, const char* what);

// Largest singular value.
double opnorm(const Mat& A);
double cond2(const Mat& A);
bool is_hermitian(const Mat& A, double tol = kDefaultTol);

// Rotates v so that its largest-magnitude entry is real and positive.
void fix_phase(Eigen::Ref<Vec> v);

EigenDecomposition eig_nonhermitian(const Mat& A, double tol = kDefaultTol,
                                    const EigOptions& opt = {});

// f(H) through the eigendecomposition of a Hermitian H.
Mat hermitian_function(const Mat& H, const std::function<double(double)>& f,
                       double tol = kDefaultTol);
Mat hermitian_function_c(const Mat& H, const std::function<cplx(double)>& f,
                         double tol = kDefaultTol);

Mat sqrtm_pd(const Mat& H, double tol = kDefaultTol);
Mat inv_sqrtm_pd(const Mat& H, double tol = kDefaultTol);
Mat logm_pd(const Mat& H, double tol = kDefaultTol);
Mat expm_herm(const Mat& H, double tol = kDefaultTol);

// Psi f(Lambda) Psi^{-1} for a diagonalizable matrix.
Mat matrix_function(const EigenDecomposition& eig, const std::function<cplx(cplx)>& f);

Mat commutator(const Mat& A, const Mat& B);

Mat pauli(int k);  // k = 0 gives the identity

}  // namespace linalg
}  // namespace phqm
