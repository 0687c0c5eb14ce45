#include <cmath>

#include "phqm/models.hpp"

namespace phqm::models {

Mat two_level_A(double D) {
  Mat A(2, 2);
  A << D + 1, D - 1, -D + 1, -D - 1;
  return 0.5 * A;
}

TwoLevelModel two_level(const TwoLevelParams& p) {
  if (!(p.D > 0)) throw Error(Errc::NonPositiveD, "D must be positive (D <= 0 has no metric)");
  if (!(p.r > 0)) throw Error(Errc::InvalidArgument, "r must be positive");
  if (!(p.s > -1 && p.s < 1)) throw Error(Errc::InvalidArgument, "s must lie in (-1, 1)");

  TwoLevelModel m;
  m.theta = 0.5 * std::log(p.D);
  const double ch = std::cosh(m.theta), sh = std::sinh(m.theta);
  const double sd = std::sqrt(p.D);
  m.A = two_level_A(p.D);
  m.eta_plus.resize(2, 2);
  m.eta_plus << ch, sh, sh, ch;
  m.eta_general.resize(2, 2);
  m.eta_general << ch + p.s, sh, sh, ch - p.s;
  m.eta_general *= p.r;
  m.h = sd * linalg::pauli(3);
  m.C.resize(2, 2);
  m.C << ch, sh, -sh, -ch;
  m.S = Mat::Identity(2, 2);
  const double c = std::pow(p.D, -0.25) / 2;
  m.psis.resize(2, 2);
  m.psis << c * (1 + sd), c * (1 - sd), c * (1 - sd), c * (1 + sd);
  return m;
}

Mat two_level_L(double D, double r1, double r2, double phi1, double phi2) {
  if (!(D > 0)) throw Error(Errc::NonPositiveD, "D must be positive");
  if (!(r1 > 0) || !(r2 > 0)) throw Error(Errc::InvalidArgument, "r1 and r2 must be positive");
  const double theta = 0.5 * std::log(D);
  const double ch = std::cosh(theta), sh = std::sinh(theta);
  const double q = std::pow(D, -0.25);
  cplx a = std::sqrt(r1) * std::polar(1.0, phi1), b = std::sqrt(r2) * std::polar(1.0, phi2);
  cplx lp = q * (a + b), lm = q * (a - b);
  Mat L(2, 2);
  L << lm * ch + lp, lm * sh, -lm * sh, -lm * ch + lp;
  return L;
}

}  // namespace phqm::models
