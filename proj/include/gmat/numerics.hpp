// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear-algebra kernels shared by the precoder designs and
// the receiver metrics. Everything here is a pure function of its inputs.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gmat {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Raised when an input violates a mathematical precondition.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Square complex matrix that is Hermitian by construction.
///
/// The constructor accepts matrices that are Hermitian up to rounding
/// (elementwise deviation at most 1e-12 times max(1, largest magnitude))
/// and stores the exactly symmetrized average.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& m);

  static HermitianMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

/// Scaled basis of the orthogonal complement of a nonzero vector h:
///   h h^H + complement complement^H = ||h||^2 I,   h^H complement = 0.
/// For K = 2 the complement is a single column.
struct OrthogonalComplement {
  CVector source;
  CMatrix complement;
};

OrthogonalComplement orth_complement(const CVector& h);

enum class Extreme { kMax, kMin };

struct GeneralizedEigResult {
  CVector vector;    // unit norm, first nonzero entry real positive
  double value = 0;  // Rayleigh quotient (v^H A v) / (v^H B v)
  bool degenerate = false;
};

/// Extreme generalized eigenvector of the Hermitian pencil (A, B), B > 0.
/// Solved through B = L L^H and the standard problem on L^-1 A L^-H.
/// When the extreme eigenvalue is (nearly) repeated the result is the
/// normalized projection of the first canonical basis vector that has a
/// nonzero component in the eigenspace.
GeneralizedEigResult generalized_eig_extreme(const HermitianMatrix& a,
                                             const HermitianMatrix& b,
                                             Extreme which);

/// Principal square root S (Hermitian PSD) with S S^H = R.
CMatrix hermitian_sqrt(const HermitianMatrix& r);

/// Natural-log determinant of a Hermitian positive definite matrix.
double logdet_hpd(const HermitianMatrix& m);

/// det(I + rho M) = 1 + rho Tr(M) + rho^2 det(M) for 2x2 Hermitian M.
double char_poly_det2(const HermitianMatrix& m, double rho);

/// (v^H A v) / (v^H B v), real part.
double rayleigh_quotient(const CMatrix& a, const CMatrix& b, const CVector& v);

/// Rotates v so its first entry with magnitude above tol is real positive.
void fix_phase(CVector& v, double tol = 1e-12);

/// Angle in radians between the complex lines spanned by u and v.
double subspace_angle(const CVector& u, const CVector& v);

}  // namespace gmat
