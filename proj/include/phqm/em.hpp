#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phqm/error.hpp"

namespace phqm::em {

using RFun = std::function<double(double)>;

struct MediumProfile {
  RFun eps;
  RFun mu;
  double z_min = -10;
  double z_max = 10;
  bool strict = false;  // raise OutOfDomain instead of extending the profile constantly
};

struct InitialFields {
  RFun E0;
  RFun E0_dot;
};

MediumProfile vacuum(double z_min = -10, double z_max = 10);
MediumProfile constant_medium(double eps, double mu, double z_min = -10, double z_max = 10);
// eps = eps0 (1 + delta tanh(z / scale)), mu = 1
MediumProfile tanh_medium(double eps0, double delta, double scale, double z_min = -10, double z_max = 10);
// Linear interpolation of sampled values on increasing nodes.
MediumProfile sampled_medium(std::vector<double> z, std::vector<double> eps, std::vector<double> mu);

InitialFields gaussian_pulse(double center, double sigma, double amplitude = 1.0);

// Profile values with the boundary policy applied.
double eps_at(const MediumProfile& m, double z);
double mu_at(const MediumProfile& m, double z);

// u(z) = int_0^z sqrt(eps mu)
double optical_path(const MediumProfile& m, double z);
double invert_u(const MediumProfile& m, double s);

double propagate(const MediumProfile& m, const InitialFields& init, double z, double t);

// max(|eps'/eps| + |mu'/mu|) over the domain times the pulse width.
double slowly_varying_diagnostic(const MediumProfile& m, double width, int samples = 2001);

struct FdtdGrid {
  int n = 3201;
  double z_min = -8;
  double z_max = 8;
  double cfl = 0.4;  // dt = cfl dz
};

struct FieldSnapshot {
  Eigen::VectorXd z;
  Eigen::VectorXd E;
  double t = 0;
};

FieldSnapshot fdtd_oracle(const MediumProfile& m, const InitialFields& init, double t_end, const FdtdGrid& grid);

// Omega^2 = -eps^{-1} d/dz mu^{-1} d/dz on the interior nodes (Dirichlet ends).
struct Omega2 {
  Eigen::MatrixXd Op;
  Eigen::VectorXd eps;  // diagonal of the metric
  Eigen::VectorXd z;
};
Omega2 omega2_matrix(const MediumProfile& m, const FdtdGrid& grid);
// |eps Op eps^{-1} - Op^T| / |Op|
double omega2_pseudo_hermiticity(const Omega2& o);

// sqrt(dz sum (a - b)^2)
double l2_distance(const FieldSnapshot& a, const Eigen::VectorXd& b);

}  // namespace phqm::em
