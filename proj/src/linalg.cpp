#include "phqm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace phqm {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::Defective: return "Defective";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::SpectrumOutOfDomain: return "SpectrumOutOfDomain";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnpairedComplexEigenvalue: return "UnpairedComplexEigenvalue";
    case Errc::ComplexSpectrum: return "ComplexSpectrum";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotPseudoHermitian: return "NotPseudoHermitian";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::Singular: return "Singular";
    case Errc::Unsolvable: return "Unsolvable";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonPositiveD: return "NonPositiveD";
    case Errc::RealityViolated: return "RealityViolated";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::UnsupportedKind: return "UnsupportedKind";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::IdenticalStates: return "IdenticalStates";
    case Errc::StepOverflow: return "StepOverflow";
    case Errc::DegenerateStructure: return "DegenerateStructure";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::CFLViolation: return "CFLViolation";
    case Errc::SchemaError: return "SchemaError";
    case Errc::NothingToPlot: return "NothingToPlot";
  }
  return "Unknown";
}

namespace linalg {

void require_square(const Mat& A, const char* what) {
  if (A.rows() != A.cols() || A.rows() == 0)
    throw Error(Errc::DimensionMismatch, std::string(what) + " must be square and nonempty");
}

void require_finite(const Mat& A, const char* what) {
  if (!A.allFinite()) throw Error(Errc::InvalidArgument, std::string(what) + " has non-finite entries");
}

double opnorm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<Mat> svd(A);
  return svd.singularValues()(0);
}

double cond2(const Mat& A) {
  Eigen::BDCSVD<Mat> svd(A);
  const auto& s = svd.singularValues();
  double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

bool is_hermitian(const Mat& A, double tol) {
  if (A.rows() != A.cols()) return false;
  double scale = std::max(opnorm(A), 1e-300);
  return (A - A.adjoint()).norm() <= tol * std::max(scale, 1.0);
}

void fix_phase(Eigen::Ref<Vec> v) {
  Eigen::Index imax = 0;
  double vmax = -1.0;
  // First index within a relative 1e-12 of the max, so ties resolve by index.
  double top = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a >= top * (1.0 - 1e-12)) {
      imax = i;
      vmax = a;
      break;
    }
  }
  if (vmax <= 0.0) return;
  v *= std::conj(v(imax)) / vmax;
  v(imax) = vmax;
}

namespace {

// Orders eigenpairs by (real, imag). Real parts closer than `gap` count as
// equal, so conjugate pairs come out with the negative imaginary part first.
std::vector<Eigen::Index> sorted_order(const Vec& vals, double gap) {
  std::vector<Eigen::Index> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return vals(a).real() < vals(b).real(); });
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() && vals(idx[end]).real() - vals(idx[end - 1]).real() <= gap) ++end;
    std::stable_sort(idx.begin() + start, idx.begin() + end,
                     [&](Eigen::Index a, Eigen::Index b) { return vals(a).imag() < vals(b).imag(); });
    start = end;
  }
  return idx;
}

}  // namespace

EigenDecomposition eig_nonhermitian(const Mat& A, double tol, const EigOptions& opt) {
  require_square(A, "eig_nonhermitian input");
  require_finite(A, "eig_nonhermitian input");
  const Eigen::Index n = A.rows();
  const double anorm = opnorm(A);
  const double scale = anorm > 0 ? anorm : 1.0;

  Eigen::ComplexEigenSolver<Mat> ces(A, true);
  if (ces.info() != Eigen::Success) throw Error(Errc::Defective, "eigensolver failed to converge");

  auto order = sorted_order(ces.eigenvalues(), tol * scale);
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = ces.eigenvalues()(order[k]);
    out.vectors.col(k) = ces.eigenvectors().col(order[k]).normalized();
  }

  if (opt.orthonormalize_degenerate) {
    Eigen::Index start = 0;
    while (start < n) {
      Eigen::Index end = start + 1;
      while (end < n && std::abs(out.values(end) - out.values(start)) <= 100 * tol * scale) ++end;
      if (end - start > 1) {
        Mat block = out.vectors.middleCols(start, end - start);
        // A rank-deficient block is a Jordan structure; keep it visible to cond2.
        if (cond2(block) >= opt.cond_threshold) {
          start = end;
          continue;
        }
        Eigen::HouseholderQR<Mat> qr(block);
        Mat q = qr.householderQ() * Mat::Identity(n, end - start);
        out.vectors.middleCols(start, end - start) = q;
      }
      start = end;
    }
  }
  for (Eigen::Index k = 0; k < n; ++k) fix_phase(out.vectors.col(k));

  out.cond = cond2(out.vectors);
  out.diagonalizable = out.cond < opt.cond_threshold;
  double res = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    res = std::max(res, (A * out.vectors.col(k) - out.values(k) * out.vectors.col(k)).norm() / scale);
  out.max_residual = res;

  if (!out.diagonalizable && opt.throw_if_defective)
    throw Error(Errc::Defective, "eigenvector matrix condition " + std::to_string(out.cond) +
                                     " exceeds threshold (exceptional point?)");
  return out;
}

namespace {

Eigen::SelfAdjointEigenSolver<Mat> herm_eig(const Mat& H, double tol) {
  require_square(H, "hermitian_function input");
  require_finite(H, "hermitian_function input");
  double scale = std::max(opnorm(H), 1.0);
  if ((H - H.adjoint()).norm() > tol * scale)
    throw Error(Errc::NotHermitian, "matrix is not Hermitian within tolerance");
  Mat Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
  if (es.info() != Eigen::Success) throw Error(Errc::NotHermitian, "Hermitian eigensolver failed");
  return es;
}

}  // namespace

Mat hermitian_function(const Mat& H, const std::function<double(double)>& f, double tol) {
  auto es = herm_eig(H, tol);
  Eigen::VectorXd fv(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) {
    fv(i) = f(es.eigenvalues()(i));
    if (!std::isfinite(fv(i)))
      throw Error(Errc::SpectrumOutOfDomain,
                  "function undefined at eigenvalue " + std::to_string(es.eigenvalues()(i)));
  }
  const Mat& U = es.eigenvectors();
  return U * fv.cast<cplx>().asDiagonal() * U.adjoint();
}

Mat hermitian_function_c(const Mat& H, const std::function<cplx(double)>& f, double tol) {
  auto es = herm_eig(H, tol);
  Vec fv(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) {
    fv(i) = f(es.eigenvalues()(i));
    if (!std::isfinite(fv(i).real()) || !std::isfinite(fv(i).imag()))
      throw Error(Errc::SpectrumOutOfDomain,
                  "function undefined at eigenvalue " + std::to_string(es.eigenvalues()(i)));
  }
  const Mat& U = es.eigenvectors();
  return U * fv.asDiagonal() * U.adjoint();
}

namespace {

double positive_or_nan(double x) { return x > 0 ? x : std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

Mat sqrtm_pd(const Mat& H, double tol) {
  return hermitian_function(H, [](double x) { return std::sqrt(positive_or_nan(x)); }, tol);
}

Mat inv_sqrtm_pd(const Mat& H, double tol) {
  return hermitian_function(H, [](double x) { return 1.0 / std::sqrt(positive_or_nan(x)); }, tol);
}

Mat logm_pd(const Mat& H, double tol) {
  return hermitian_function(H, [](double x) { return std::log(positive_or_nan(x)); }, tol);
}

Mat expm_herm(const Mat& H, double tol) {
  return hermitian_function(H, [](double x) { return std::exp(x); }, tol);
}

Mat matrix_function(const EigenDecomposition& eig, const std::function<cplx(cplx)>& f) {
  Vec fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  Eigen::PartialPivLU<Mat> lu(eig.vectors);
  return eig.vectors * fv.asDiagonal() * lu.inverse();
}

Mat commutator(const Mat& A, const Mat& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw Error(Errc::DimensionMismatch, "commutator operands must be square of equal size");
  return A * B - B * A;
}

Mat pauli(int k) {
  using namespace std::complex_literals;
  Mat s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -1i, 1i, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw Error(Errc::InvalidArgument, "pauli index must be 0..3");
  }
  return s;
}

}  // namespace linalg
}  // namespace phqm
