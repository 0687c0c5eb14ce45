#include <gtest/gtest.h>

#include "common.hpp"
#include "phqm/classical.hpp"

using namespace phqm::classical;
using namespace std::complex_literals;
using phqm::Errc;

TEST(Classical, HarmonicFlowMatchesExactSolution) {
  const double w = 2.0, m = 1.5;
  auto Vp = [&](cplx z) { return m * w * w * z; };
  ComplexPhasePoint s0{cplx(0.3, 0.2), cplx(0.1, -0.4)};
  auto tr = flow(Vp, m, s0, 3.0, 1e-3, 1000);
  const double t = tr.t.back();
  cplx z = s0.z * std::cos(w * t) + s0.p / (m * w) * std::sin(w * t);
  EXPECT_NEAR(t, 3.0, 1e-12);
  EXPECT_LT(std::abs(tr.pts.back().z - z), 1e-10);
}

TEST(Classical, FlowValidation) {
  auto Vp = [](cplx z) { return z; };
  EXPECT_ERRC(flow(Vp, 1.0, {}, 1.0, 0.0), Errc::InvalidArgument);
  EXPECT_ERRC(flow(Vp, -1.0, {}, 1.0, 0.1), Errc::InvalidArgument);
  auto blow = [](cplx z) { return -z * z * z * z * z; };
  EXPECT_ERRC(flow(blow, 1.0, {cplx(3.0), cplx(3.0)}, 50.0, 0.1), Errc::StepOverflow);
}

TEST(Classical, SymplecticMatrixIsAntisymmetric) {
  SymplecticParams prm{0.3, -0.2, 0.4, 0.1};
  auto J = symplectic_matrix(prm);
  EXPECT_LT((J + J.transpose()).norm(), 1e-15);
  EXPECT_GT(std::abs(J.determinant()), 1e-6);
  EXPECT_ERRC(symplectic_matrix({0.0, 0.0, 1.0, 0.0}), Errc::DegenerateStructure);
  EXPECT_LT((standard_matrix() + standard_matrix().transpose()).norm(), 1e-15);
}

TEST(Classical, CoordinateRoundTrips) {
  ComplexPhasePoint s{cplx(0.3, -1.2), cplx(2.0, 0.5)};
  auto back = from_w(to_w(s));
  EXPECT_EQ(back.z, s.z);
  EXPECT_EQ(back.p, s.p);
  W w = to_w(s);
  EXPECT_LT((from_darboux(darboux(w)) - w).norm(), 1e-14);
}

TEST(Classical, CauchyRiemann) {
  auto analytic = [](cplx z) { return std::exp(z) + 1i * z * z * z; };
  auto nonanalytic = [](cplx z) { return std::conj(z) * z; };
  EXPECT_LT(cauchy_riemann_defect(analytic, cplx(0.3, 0.4)), 1e-8);
  EXPECT_GT(cauchy_riemann_defect(nonanalytic, cplx(0.3, 0.4)), 0.1);
  EXPECT_ERRC(real_hamiltonians(nonanalytic, darboux(ComplexPhasePoint{cplx(0.3, 0.4), 1.0}), 1.0),
              Errc::InvalidArgument);
}

TEST(Classical, RealHamiltoniansCommute) {
  auto V = [](cplx z) { return 1i * z * z * z; };
  const double m = 1.0;
  auto K = [&](const DarbouxPoint& d) { return real_hamiltonians(V, d, m).K; };
  auto Hi = [&](const DarbouxPoint& d) { return real_hamiltonians(V, d, m).Hi; };
  DarbouxPoint pt = darboux(ComplexPhasePoint{cplx(0.4, -0.2), cplx(0.9, 0.3)});
  EXPECT_LT(std::abs(darboux_bracket(K, Hi, pt)), 1e-7);
  EXPECT_GT(independence_measure(V, pt, m), 1e-3);
}

TEST(Classical, SymmetryFlowPreservesK) {
  auto V = [](cplx z) { return 1i * z * z * z; };
  auto Vp = [](cplx z) { return 3i * z * z; };
  DarbouxPoint pt = darboux(ComplexPhasePoint{cplx(0.4, -0.2), cplx(0.9, 0.3)});
  const double K0 = real_hamiltonians(V, pt, 1.0).K;
  DarbouxPoint q = symmetry_flow(Vp, pt, 1e-4, 1.0);
  // One Euler step: the change in K is second order in xi.
  EXPECT_LT(std::abs(real_hamiltonians(V, q, 1.0).K - K0), 1e-6);
}

TEST(Classical, BracketAgainstStandardStructure) {
  auto V = [](cplx z) { return 0.5 * z * z; };
  const double m = 2.0;
  auto hf = [&](const W& w) { return complex_hamiltonian(V, m, from_w(w)); };
  auto zf = [](const W& w) { return from_w(w).z; };
  W w(0.2, -0.3, 0.7, 0.1);
  EXPECT_LT(std::abs(bracket(SymplecticParams{}, zf, hf, w) - from_w(w).p / m), 1e-8);
  EXPECT_LT(std::abs(bracket_with(standard_matrix(), zf, hf, w)), 1e-8);
}
