#pragma once

#include <optional>
#include <vector>

#include "phqm/metric.hpp"

namespace phqm::statespace {

struct ProjectiveState {
  Mat Lambda;
  Vec representative;
};

// |psi><psi| eta / <psi|eta psi>; eta = I when omitted.
ProjectiveState projector(const Vec& psi, const std::optional<Mat>& eta = std::nullopt);

// G with ds^2 = dpsi^dagger G dpsi, G = (N eta - eta psi psi^dagger eta) / N^2, N = <psi|eta psi>.
Mat fs_metric(const Vec& psi, const std::optional<Mat>& eta = std::nullopt);

struct TwoLevelLineElement {
  double k1 = 0.25, k2 = 0, k3 = 0, beta = 0;
  double a = 1, b1 = 0, b2 = 0, c = 1;
};

TwoLevelLineElement two_level_geometry(const Mat& eta);

// ds^2 in spherical coordinates (theta from the e_1 pole).
double line_element(const TwoLevelLineElement& g, double theta, double phi, double dtheta, double dphi);
// ds^2 in the chart x + i y = psi_2 / psi_1.
double line_element_chart(const TwoLevelLineElement& g, double x, double y, double dx, double dy);

struct LineSample {
  double theta, phi, factor;  // ds^2 = factor (dtheta^2 + sin^2 theta dphi^2)
};
std::vector<LineSample> sample_line_element(const TwoLevelLineElement& g, int n_theta, int n_phi);

double geodesic_distance(const Vec& psi_i, const Vec& psi_f, const std::optional<Mat>& eta = std::nullopt);

struct BrachistochroneProblem {
  Vec psi_i;
  Vec psi_f;
  double E = 1.0;
  std::optional<Mat> eta;
  double hbar = 1.0;
  // Relative phase of the final representative when the states are eta-orthogonal.
  double antipodal_phase = 0.0;
};

struct OptimalHamiltonian {
  Mat H_star;
  double tau_min = 0;
  double s = 0;
};

OptimalHamiltonian optimal_hamiltonian(const BrachistochroneProblem& prob);

// exp(-i t H / hbar) psi0 through the eigendecomposition of H.
Vec evolve(const Mat& H, const Vec& psi0, double t, double hbar = 1.0);

double energy_uncertainty(const Mat& H, const Vec& psi, const std::optional<Mat>& eta = std::nullopt);

// |<a|eta b>|^2 / (<a|eta a><b|eta b>)
double projective_fidelity(const Vec& a, const Vec& b, const std::optional<Mat>& eta = std::nullopt);

// eta = diag(a, 1) with det/tr^2 = k1, 0 < k1 <= 1/4.
Mat eta_for_k1(double k1);

}  // namespace phqm::statespace
