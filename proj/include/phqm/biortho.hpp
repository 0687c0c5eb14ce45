#pragma once

#include <vector>

#include "phqm/linalg.hpp"

namespace phqm::biortho {

// Right eigenvectors psi_n and their dual family phi_n with <phi_m|psi_n> = delta_mn.
struct BiorthonormalSystem {
  Vec values;
  Mat psis;
  Mat phis;
  std::vector<bool> is_real;
  // Index of the complex-conjugate partner of a nonreal eigenvalue, -1 otherwise
  // (always -1 for real eigenvalues; -1 on a nonreal one means unpaired).
  std::vector<int> partner;

  Eigen::Index size() const { return values.size(); }
  bool all_real() const;
  bool all_paired() const;
  std::vector<int> real_indices() const;

  Mat overlaps() const { return phis.adjoint() * psis; }
  Mat completeness() const { return psis * phis.adjoint(); }
  Mat dual_completeness() const { return phis * psis.adjoint(); }
  Mat reconstruct() const { return psis * values.asDiagonal() * phis.adjoint(); }

  // psi_n -> c psi_n and phi_n -> phi_n / conj(c).
  void rescale(Eigen::Index n, cplx c);
};

struct Invariants {
  double biortho = 0;      // max |<phi_m|psi_n> - delta_mn|
  double completeness = 0; // |sum |psi><phi| - I|
  double spectral = 0;     // |A - sum a |psi><phi|| / |A|
};

BiorthonormalSystem biorthonormal_extension(const linalg::EigenDecomposition& eig,
                                            double tol = linalg::kDefaultTol);

// Builds the dual family for explicitly normalized right eigenvectors.
BiorthonormalSystem from_right_vectors(const Vec& values, const Mat& psis,
                                       double tol = linalg::kDefaultTol);

Invariants check(const BiorthonormalSystem& bs, const Mat& A);

}  // namespace phqm::biortho
