#include <gtest/gtest.h>

#include "common.hpp"
#include "phqm/models.hpp"

using namespace phqm;
using namespace std::complex_literals;

TEST(TwoLevel, ClosedFormsAcrossD) {
  for (double D : {0.25, 1.0, 4.0, 9.0}) {
    auto t = models::two_level({D, 1.0, 0.0});
    EXPECT_LT(metric::pseudo_hermiticity_residual(t.A, t.eta_plus), 1e-12);
    auto sys = metric::build_system(t.A, {t.eta_plus});
    EXPECT_LT((sys.h - t.h).norm(), 1e-12);
    EXPECT_LT((t.C * t.C - Mat::Identity(2, 2)).norm(), 1e-12);
    EXPECT_LT((t.A * t.psis - t.psis * t.h).norm(), 1e-12);
    EXPECT_NEAR(t.theta, 0.5 * std::log(D), 1e-15);
  }
}

TEST(TwoLevel, GeneralMetricFamily) {
  for (double s : {-0.9, 0.0, 0.5}) {
    auto t = models::two_level({4.0, 0.7, s});
    EXPECT_NO_THROW(metric::make_metric(t.eta_general));
    EXPECT_LT(metric::pseudo_hermiticity_residual(t.A, t.eta_general), 1e-12);
  }
  EXPECT_ERRC(models::two_level({0.0, 1.0, 0.0}), Errc::NonPositiveD);
  EXPECT_ERRC(models::two_level({-3.0, 1.0, 0.0}), Errc::NonPositiveD);
  EXPECT_ERRC(models::two_level({4.0, 1.0, 1.0}), Errc::InvalidArgument);
}

TEST(TwoLevel, LFactorization) {
  const double D = 4.0, r1 = 0.8, r2 = 1.3;
  Mat L = models::two_level_L(D, r1, r2, 0.4, -1.1);
  auto t = models::two_level({D, 2 * (r1 + r2) / std::sqrt(D), (r1 - r2) / (r1 + r2)});
  EXPECT_LT((L.adjoint() * t.eta_plus * L - t.eta_general).norm(), 1e-12);
  EXPECT_LT((L * t.A - t.A * L).norm(), 1e-12);
}

TEST(Swanson, TwoByTwoIdentityAndReality) {
  models::SwansonParams p{1.0, 1.0, 0.2, -0.1};
  for (int branch : {1, -1}) {
    auto m = models::swanson_metric(p, 0.3, branch);
    EXPECT_LT(m.residual, 1e-12);
  }
  EXPECT_ERRC(models::swanson_metric({1.0, 1.0, 0.6, 0.6}, 0.0), Errc::RealityViolated);
  EXPECT_ERRC(models::swanson_metric(p, 0.0, 2), Errc::InvalidArgument);
}

TEST(Swanson, SuOneOneCommutators) {
  auto k = models::su11_fock(20);
  const int in = 18;
  auto blk = [&](const Mat& M) { return M.topLeftCorner(in, in); };
  EXPECT_LT(blk(linalg::commutator(k.K3, k.Kp) - k.Kp).norm(), 1e-12);
  EXPECT_LT(blk(linalg::commutator(k.K3, k.Km) + k.Km).norm(), 1e-12);
  EXPECT_LT(blk(linalg::commutator(k.Kp, k.Km) + 2.0 * k.K3).norm(), 1e-12);
}

TEST(Swanson, TruncationSpectrum) {
  models::SwansonParams p{1.0, 1.0, 0.2, -0.1};
  auto t = models::swanson_truncated(p, 0.1, 60);
  EXPECT_LT((t.h - t.h.adjoint()).norm() / t.h.norm(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(t.h, Eigen::EigenvaluesOnly);
  const double spacing = std::sqrt(1 - 4 * p.alpha_t() * p.beta_t());
  EXPECT_NEAR(es.eigenvalues()(1) - es.eigenvalues()(0), spacing, 1e-8);
  EXPECT_LT(t.interior_residual, 1e-8);
  EXPECT_ERRC(models::swanson_truncated(p, 0.1, 8), Errc::InvalidArgument);
}

TEST(Quartic, GDerivativeMatchesFiniteDifference) {
  for (double om : {0.0, 1.0})
    for (double k : {-2.0, -0.3, 0.7, 1.9}) {
      const double h = 1e-5;
      double fd = (models::quartic_g(k + h, 0.0625, om) - models::quartic_g(k - h, 0.0625, om)) / (2 * h);
      EXPECT_NEAR(models::quartic_g_prime(k, 0.0625, om), fd, 1e-7);
    }
}

TEST(Quartic, GridChecks) {
  models::QuarticParams p;
  p.n = 32;
  EXPECT_ERRC(models::quartic_pair(p), Errc::GridTooSmall);
  p.n = 128;
  p.L = 3;
  EXPECT_ERRC(models::quartic_pair(p), Errc::GridTooSmall);
  p.lambda = -1;
  EXPECT_ERRC(models::quartic_pair(p), Errc::InvalidArgument);
}

TEST(Quartic, FourierMultiplierDifferentiates) {
  Eigen::VectorXd x, q;
  models::periodic_grid(64, 3.14159265358979323846, x, q);
  Vec f = x.array().sin().cast<cplx>();
  Eigen::VectorXd fq = q.array().square();
  Vec d2 = models::fourier_multiplier(fq) * f;
  EXPECT_LT((d2 - f).norm(), 1e-10);  // -(d/dx)^2 sin = sin
}

TEST(Kernel, NamesRoundTrip) {
  for (auto k : {models::KernelKind::SquareWell, models::KernelKind::Barrier, models::KernelKind::Delta})
    EXPECT_EQ(models::parse_kernel_kind(models::kernel_kind_name(k)), k);
  EXPECT_ERRC(models::parse_kernel_kind("step"), Errc::UnsupportedKind);
}

TEST(Kernel, HermitianAndSecondOrder) {
  models::KernelPotentialSpec s{models::KernelKind::Barrier, 0.01, 1.0, 1.0, 1.0, 1.0};
  auto km = models::kernel_metric(s, {});
  EXPECT_EQ((km.K - km.K.adjoint()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(km.report.order, 2.0, 0.3);
  EXPECT_TRUE(km.report.first_order_regime);
  for (double x : {-0.7, 0.2})
    for (double y : {-0.1, 0.9}) EXPECT_NEAR(std::abs(models::kernel_value(s, x, y) - std::conj(models::kernel_value(s, y, x))), 0.0, 1e-15);
}

TEST(Kernel, SquareWellOrderAtModerateZeta) {
  models::KernelPotentialSpec s{models::KernelKind::SquareWell, 0.1, 1.0, 1.0, 1.0, 1.0};
  auto km = models::kernel_metric(s, {400, -0.5, 0.5});
  EXPECT_NEAR(km.report.order, 2.0, 0.3);
}

TEST(Kernel, KleinGordonResidualWithinBound) {
  models::KernelPotentialSpec s{models::KernelKind::Barrier, 0.01, 1.0, 1.0, 1.0, 1.0};
  auto kg = models::klein_gordon_residual(s, {});
  EXPECT_GT(kg.points, 0);
  EXPECT_LE(kg.residual, 1.01 * kg.bound);
}

TEST(Kernel, GridValidation) {
  models::KernelPotentialSpec well{models::KernelKind::SquareWell, 0.1, 1.0, 1.0, 1.0, 1.0};
  EXPECT_ERRC(models::kernel_metric(well, {400, -2, 2}), Errc::InvalidArgument);
  models::KernelPotentialSpec delta{models::KernelKind::Delta, 0.05, 1.0, 0.0, 1.0, 1.0};
  EXPECT_ERRC(models::kernel_metric(delta, {}), Errc::InvalidArgument);
  delta.kappa = 1;
  EXPECT_ERRC(models::kernel_metric(delta, {401, -2, 2}), Errc::InvalidArgument);
  EXPECT_ERRC(models::kernel_metric(delta, {8, -2, 2}), Errc::GridTooSmall);
}

TEST(PtCubic, FirstTermFitsAnsatz) {
  auto osc = models::pt_cubic(40, 1.0, 1.0, 0.01, 3);
  auto q = perturbation::q_series(osc.problem);
  EXPECT_LT(perturbation::ansatz_residual(q.terms.at(1), osc.x, osc.p, 0, 32), 1e-8);
  EXPECT_LT(perturbation::ansatz_residual(q.terms.at(3), osc.x, osc.p, 1, 28), 1e-6);
  EXPECT_ERRC(models::pt_cubic(40, -1.0, 1.0, 0.01, 1), Errc::InvalidArgument);
}
