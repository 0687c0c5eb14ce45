#include <gtest/gtest.h>

#include "common.hpp"
#include "phqm/em.hpp"

using namespace phqm;
using namespace phqm::em;

TEST(Em, OpticalPathInConstantMedium) {
  auto m = constant_medium(4.0, 1.0);
  for (double z : {-3.0, 0.5, 2.0}) {
    EXPECT_NEAR(optical_path(m, z), 2.0 * z, 1e-12);
    EXPECT_NEAR(invert_u(m, optical_path(m, z)), z, 1e-10);
  }
}

TEST(Em, OpticalPathInverseInTanhMedium) {
  auto m = tanh_medium(1.0, 0.3, 0.8);
  for (double z : {-4.0, -0.2, 1.7}) EXPECT_NEAR(invert_u(m, optical_path(m, z)), z, 1e-10);
}

TEST(Em, VacuumIsDalembert) {
  auto v = vacuum();
  auto p = gaussian_pulse(0.5, 0.3);
  for (double z : {-1.0, 0.0, 0.8})
    for (double t : {0.0, 0.4, 1.2})
      EXPECT_NEAR(propagate(v, p, z, t), 0.5 * (p.E0(z - t) + p.E0(z + t)), 1e-12);
}

TEST(Em, BoundaryPolicy) {
  auto m = tanh_medium(1.0, 0.1, 1.0, -2, 2);
  EXPECT_NEAR(eps_at(m, 5.0), eps_at(m, 2.0), 0.0);
  m.strict = true;
  EXPECT_ERRC(eps_at(m, 5.0), Errc::OutOfDomain);
}

TEST(Em, ProfileValidation) {
  EXPECT_ERRC(constant_medium(-1.0, 1.0), Errc::InvalidArgument);
  EXPECT_ERRC(tanh_medium(1.0, 1.5, 1.0), Errc::InvalidArgument);
  EXPECT_ERRC(sampled_medium({0.0}, {1.0}, {1.0}), Errc::LengthMismatch);
  EXPECT_ERRC(sampled_medium({0.0, -1.0}, {1.0, 1.0}, {1.0, 1.0}), Errc::InvalidArgument);
  EXPECT_ERRC(gaussian_pulse(0.0, 0.0), Errc::InvalidArgument);
}

TEST(Em, SampledMediumInterpolates) {
  auto m = sampled_medium({-1.0, 1.0}, {1.0, 3.0}, {1.0, 1.0});
  EXPECT_NEAR(eps_at(m, 0.0), 2.0, 1e-15);
  EXPECT_NEAR(mu_at(m, 0.5), 1.0, 1e-15);
}

TEST(Em, FdtdMatchesVacuumSolution) {
  auto v = vacuum();
  auto p = gaussian_pulse(0.0, 0.4);
  FdtdGrid g{1601, -8, 8, 0.4};
  auto snap = fdtd_oracle(v, p, 2.0, g);
  Eigen::VectorXd exact(g.n);
  for (int i = 0; i < g.n; ++i) exact(i) = 0.5 * (p.E0(snap.z(i) - 2.0) + p.E0(snap.z(i) + 2.0));
  EXPECT_LT(l2_distance(snap, exact), 1e-3);
  g.cfl = 1.2;
  EXPECT_ERRC(fdtd_oracle(v, p, 1.0, g), Errc::CFLViolation);
}

TEST(Em, Omega2IsEpsPseudoHermitian) {
  auto m = tanh_medium(1.5, 0.2, 0.7);
  auto om = omega2_matrix(m, {201, -5, 5, 0.4});
  EXPECT_LT(omega2_pseudo_hermiticity(om), 1e-12);
  Eigen::EigenSolver<Eigen::MatrixXd> es(om.Op, false);
  EXPECT_LT(es.eigenvalues().imag().cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_GT(es.eigenvalues().real().minCoeff(), 0.0);
}

TEST(Em, DiagnosticGrowsWithGradient) {
  auto p = gaussian_pulse(0.0, 0.3);
  (void)p;
  EXPECT_LT(slowly_varying_diagnostic(tanh_medium(1.0, 0.1, 1.0), 0.3),
            slowly_varying_diagnostic(tanh_medium(1.0, 0.1, 0.1), 0.3));
  EXPECT_EQ(slowly_varying_diagnostic(vacuum(), 0.3), 0.0);
}
