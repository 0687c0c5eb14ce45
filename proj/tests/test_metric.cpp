#include <gtest/gtest.h>

#include "common.hpp"
#include "phqm/metric.hpp"

using namespace phqm;
using namespace std::complex_literals;

namespace {

biortho::BiorthonormalSystem system_of(const Mat& A) {
  return biortho::biorthonormal_extension(linalg::eig_nonhermitian(A));
}

Mat real_spectrum_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  Vec lam(n);
  for (int i = 0; i < n; ++i) lam(i) = u(rng);
  return testutil::similar_to(lam, rng);
}

}  // namespace

TEST(Metric, MakeMetricValidates) {
  EXPECT_ERRC(metric::make_metric(linalg::pauli(2) * 1.0i), Errc::NotHermitian);
  EXPECT_ERRC(metric::make_metric(linalg::pauli(3)), Errc::NotPositiveDefinite);
  EXPECT_NO_THROW(metric::make_metric(Mat::Identity(3, 3)));
}

TEST(Metric, SpectralMetricIsPositiveAndPseudoHermitian) {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 8; ++n) {
    Mat A = real_spectrum_matrix(n, rng);
    auto bs = system_of(A);
    auto m = metric::metric_from_spectrum(bs, true);
    EXPECT_NO_THROW(metric::make_metric(m.eta, 1e-9));
    EXPECT_LT(metric::pseudo_hermiticity_residual(A, m.eta), 1e-9);
    Eigen::SelfAdjointEigenSolver<Mat> es(m.eta, Eigen::EigenvaluesOnly);
    EXPECT_NEAR(es.eigenvalues().maxCoeff(), 1.0, 1e-12);
    Mat inv = metric::metric_inverse_from_spectrum(bs);
    EXPECT_LT((inv * metric::metric_from_spectrum(bs).eta - Mat::Identity(n, n)).norm(), 1e-9);
  }
}

TEST(Metric, EigenvectorRescalingGivesAnotherMetric) {
  std::mt19937_64 rng(22);
  Mat A = real_spectrum_matrix(4, rng);
  auto bs = system_of(A);
  Mat eta1 = metric::metric_from_spectrum(bs).eta;
  bs.rescale(1, 2.5);
  Mat eta2 = metric::metric_from_spectrum(bs).eta;
  EXPECT_GT((eta1 - eta2).norm(), 1e-3);
  EXPECT_LT(metric::pseudo_hermiticity_residual(A, eta2), 1e-9);
}

TEST(Metric, ComplexSpectrumHasNoPositiveMetric) {
  Mat A(2, 2);
  A << 2.0i, 1, 1, -2.0i;
  auto bs = system_of(A);
  EXPECT_ERRC(metric::metric_from_spectrum(bs), Errc::ComplexSpectrum);
  auto pm = metric::pseudo_metric_family(bs, {});
  EXPECT_LT(metric::pseudo_hermiticity_residual(A, pm.eta), 1e-10);
}

TEST(Metric, SignSequenceValidation) {
  std::mt19937_64 rng(23);
  auto bs = system_of(real_spectrum_matrix(3, rng));
  EXPECT_ERRC(metric::pseudo_metric_family(bs, {{1, 1}}), Errc::LengthMismatch);
  EXPECT_ERRC(metric::pseudo_metric_family(bs, {{1, 2, 1}}), Errc::InvalidArgument);
  Mat U = Mat::Zero(2, 2);
  U(0, 0) = 1.0i;
  U(1, 1) = 1.0;
  EXPECT_ERRC(metric::pseudo_metric_family(system_of(U), {{1}}), Errc::UnpairedComplexEigenvalue);
}

TEST(Metric, ChargeOperatorProperties) {
  std::mt19937_64 rng(24);
  Mat A = real_spectrum_matrix(4, rng);
  auto bs = system_of(A);
  metric::SignSequence sg{{1, -1, -1, 1}};
  Mat C = metric::charge_operator(bs, sg);
  EXPECT_LT((C * C - Mat::Identity(4, 4)).norm(), 1e-9);
  EXPECT_LT((C * A - A * C).norm(), 1e-9);
  // eta_sigma C_sigma is the positive metric.
  Mat eta = metric::pseudo_metric_family(bs, sg).eta * C;
  EXPECT_LT((eta - metric::metric_from_spectrum(bs).eta).norm(), 1e-9);
}

TEST(Metric, AntilinearSymmetryCommutesWithA) {
  std::mt19937_64 rng(25);
  Mat A = real_spectrum_matrix(5, rng);
  auto bs = system_of(A);
  auto S = metric::antilinear_symmetry(bs);
  Vec v = testutil::random_vector(5, rng);
  EXPECT_LT((S.apply(A * v) - A * S.apply(v)).norm(), 1e-9);
  EXPECT_LT((S.apply(S.apply(v)) - v).norm(), 1e-9);
  std::vector<double> ph{0.1, 0.2, 0.3, 0.4, 0.5};
  auto S2 = metric::antilinear_symmetry(bs, &ph);
  EXPECT_LT((S2.apply(A * v) - A * S2.apply(v)).norm(), 1e-9);
}

TEST(Metric, BuildSystemGivesHermitianIsospectralH) {
  std::mt19937_64 rng(26);
  Mat A = real_spectrum_matrix(5, rng);
  auto bs = system_of(A);
  auto sys = metric::build_system(A, metric::metric_from_spectrum(bs));
  EXPECT_LT((sys.h - sys.h.adjoint()).norm(), 1e-9);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (sys.h + sys.h.adjoint()), Eigen::EigenvaluesOnly);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(es.eigenvalues()(i), bs.values(i).real(), 1e-9);
  EXPECT_ERRC(metric::build_system(A, {Mat::Identity(5, 5)}), Errc::NotPseudoHermitian);
  EXPECT_ERRC(metric::build_system(A, {Mat::Identity(4, 4)}), Errc::DimensionMismatch);
}

TEST(Metric, ObservablesArePseudoHermitian) {
  std::mt19937_64 rng(27);
  Mat A = real_spectrum_matrix(3, rng);
  auto sys = metric::build_system(A, metric::metric_from_spectrum(system_of(A)));
  Mat o = testutil::random_hermitian(3, rng);
  Mat O = metric::observable_map(o, sys);
  EXPECT_LT(metric::pseudo_hermiticity_residual(O, sys.eta_plus.eta), 1e-9);
  EXPECT_LT((metric::pseudo_adjoint(O, sys.eta_plus.eta) - O).norm(), 1e-9);
  EXPECT_ERRC(metric::observable_map(1.0i * o, sys), Errc::NotHermitian);
}

TEST(Metric, SystemFromRho) {
  std::mt19937_64 rng(28);
  Mat rho = linalg::sqrtm_pd(testutil::random_metric(3, rng));
  Mat h = testutil::random_hermitian(3, rng);
  auto sys = metric::system_from_rho(rho, h);
  EXPECT_LT((rho * sys.H - h * rho).norm(), 1e-10);
  EXPECT_LT(metric::pseudo_hermiticity_residual(sys.H, sys.eta_plus.eta), 1e-10);
}

TEST(Metric, EtaTraceEqualsOrdinaryTrace) {
  std::mt19937_64 rng(29);
  Mat eta = testutil::random_metric(4, rng);
  Mat K = testutil::random_matrix(4, rng);
  cplx tr = metric::eta_trace(K, eta, testutil::random_matrix(4, rng));
  EXPECT_NEAR(std::abs(tr - K.trace()), 0.0, 1e-10);
}

TEST(Metric, ExpectationRealityDetectsViolation) {
  std::mt19937_64 rng(30);
  Mat A = real_spectrum_matrix(4, rng);
  Mat eta = metric::metric_from_spectrum(system_of(A)).eta;
  EXPECT_LT(metric::expectation_imag_max(A, eta, 200, 1), 1e-10);
  EXPECT_GT(metric::expectation_imag_max(A, Mat::Identity(4, 4), 200, 1), 1e-3);
}
