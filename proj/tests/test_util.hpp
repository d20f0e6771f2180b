// SPDX-License-Identifier: Apache-2.0
//
// Random instance generators shared by the test binaries.

#pragma once

#include <cmath>
#include <random>

#include "gmat/channel.hpp"
#include "gmat/numerics.hpp"
#include "gmat/protocol.hpp"

namespace gmat::testing {

inline CVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cd(g(rng), g(rng));
  return v;
}

inline CVector random_unit(Eigen::Index n, std::mt19937_64& rng) {
  CVector v = random_vector(n, rng);
  return v / v.norm();
}

inline CMatrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  CMatrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j) m.col(j) = random_vector(r, rng);
  return m;
}

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix a = random_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

inline CMatrix random_hpd(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix a = random_matrix(n, n, rng);
  return a * a.adjoint() + 0.1 * CMatrix::Identity(n, n);
}

inline ChannelEpisode random_episode(const Schedule& s, std::mt19937_64& rng) {
  FadingConfig cfg{s.users, 0.0, 0.0, 0};
  return sample_episode(cfg, s, rng);
}

inline PrecoderSet random_precoders(const Schedule& s, std::mt19937_64& rng) {
  PrecoderSet p(s);
  for (int l = 0; l < s.branches; ++l) {
    for (int j = 0; j < s.users; ++j) {
      for (int i = 0; i < s.users; ++i) {
        if (i != j) p.set_w(j, i, l, random_vector(s.users, rng));
      }
    }
  }
  return p;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/// Singular values, descending.
inline Eigen::VectorXd singular_values(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m).singularValues();
}

}  // namespace gmat::testing
