#include "phqm/biortho.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace phqm::biortho {

bool BiorthonormalSystem::all_real() const {
  return std::all_of(is_real.begin(), is_real.end(), [](bool b) { return b; });
}

bool BiorthonormalSystem::all_paired() const {
  for (std::size_t i = 0; i < is_real.size(); ++i)
    if (!is_real[i] && partner[i] < 0) return false;
  return true;
}

std::vector<int> BiorthonormalSystem::real_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < is_real.size(); ++i)
    if (is_real[i]) out.push_back(static_cast<int>(i));
  return out;
}

void BiorthonormalSystem::rescale(Eigen::Index n, cplx c) {
  if (c == cplx(0)) throw Error(Errc::InvalidArgument, "rescale factor must be nonzero");
  psis.col(n) *= c;
  phis.col(n) /= std::conj(c);
}

namespace {

void classify(BiorthonormalSystem& bs, double tol) {
  const Eigen::Index n = bs.values.size();
  double scale = n ? bs.values.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) scale = 1.0;
  const double real_tol = std::sqrt(tol) * scale;
  bs.is_real.assign(n, false);
  bs.partner.assign(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) bs.is_real[i] = std::abs(bs.values(i).imag()) <= real_tol;

  // Greedy nearest-conjugate matching; ties go to the lower index.
  std::vector<bool> used(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (bs.is_real[i] || used[i]) continue;
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || bs.is_real[j] || used[j]) continue;
      double d = std::abs(bs.values(j) - std::conj(bs.values(i)));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    if (best >= 0 && best_d <= real_tol) {
      used[i] = used[best] = true;
      bs.partner[i] = best;
      bs.partner[best] = static_cast<int>(i);
    }
  }
}

}  // namespace

BiorthonormalSystem from_right_vectors(const Vec& values, const Mat& psis, double tol) {
  if (psis.rows() != psis.cols() || psis.cols() != values.size())
    throw Error(Errc::DimensionMismatch, "need one right vector per eigenvalue");
  Eigen::FullPivLU<Mat> lu(psis);
  if (!lu.isInvertible()) throw Error(Errc::Defective, "right eigenvectors are linearly dependent");
  BiorthonormalSystem bs;
  bs.values = values;
  bs.psis = psis;
  bs.phis = lu.inverse().adjoint();
  classify(bs, tol);
  return bs;
}

BiorthonormalSystem biorthonormal_extension(const linalg::EigenDecomposition& eig, double tol) {
  if (!eig.diagonalizable)
    throw Error(Errc::Defective, "biorthonormal extension needs a diagonalizable input");
  return from_right_vectors(eig.values, eig.vectors, tol);
}

Invariants check(const BiorthonormalSystem& bs, const Mat& A) {
  const Eigen::Index n = bs.size();
  Invariants inv;
  inv.biortho = (bs.overlaps() - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  inv.completeness = linalg::opnorm(bs.completeness() - Mat::Identity(n, n));
  double an = linalg::opnorm(A);
  inv.spectral = linalg::opnorm(A - bs.reconstruct()) / (an > 0 ? an : 1.0);
  return inv;
}

}  // namespace phqm::biortho
