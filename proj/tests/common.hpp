#pragma once

#include <random>

#include "phqm/linalg.hpp"

namespace phqm::testutil {

inline Mat random_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
  return A;
}

inline Vec random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(g(rng), g(rng));
  return v;
}

inline Mat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  Mat A = random_matrix(n, rng);
  return 0.5 * (A + A.adjoint());
}

// A random positive-definite matrix with eigenvalues in [lo, hi].
inline Mat random_metric(Eigen::Index n, std::mt19937_64& rng, double lo = 0.2, double hi = 5.0) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(n, rng));
  Mat U = qr.householderQ();
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = u(rng);
  return U * d.cast<cplx>().asDiagonal() * U.adjoint();
}

// B diag(values) B^{-1} with a moderately conditioned random B.
inline Mat similar_to(const Vec& values, std::mt19937_64& rng) {
  const Eigen::Index n = values.size();
  Mat B = Mat::Identity(n, n) + 0.5 * random_matrix(n, rng) / std::sqrt(double(n));
  return B * values.asDiagonal() * B.inverse();
}

}  // namespace phqm::testutil

// Asserts that `stmt` throws phqm::Error with the given code.
#define EXPECT_ERRC(stmt, errc)                                          \
  do {                                                                   \
    try {                                                                \
      stmt;                                                              \
      ADD_FAILURE() << "expected " #errc;                                \
    } catch (const ::phqm::Error& e_) {                                  \
      EXPECT_EQ(e_.code(), errc) << e_.what();                           \
    }                                                                    \
  } while (0)
