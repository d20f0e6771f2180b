// SPDX-License-Identifier: Apache-2.0

#include "gmat/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace gmat {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kDefiniteTol = 1e-12;
constexpr double kDegeneracyGap = 1e-10;
constexpr double kSqrtNegativeTol = 1e-10;

}  // namespace

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DomainError("HermitianMatrix: matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= kHermitianTol * scale)) {
    throw DomainError("HermitianMatrix: input is not Hermitian");
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

void fix_phase(CVector& v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > tol) {
      v *= std::conj(v(i)) / mag;
      v(i) = cd(mag, 0.0);
      return;
    }
  }
}

OrthogonalComplement orth_complement(const CVector& h) {
  const Eigen::Index k = h.size();
  const double norm = h.norm();
  if (k < 2) throw DomainError("orth_complement: need at least two entries");
  if (!(norm > 0.0)) throw DomainError("orth_complement: zero vector");

  OrthogonalComplement out{h, CMatrix(k, k - 1)};
  if (k == 2) {
    out.complement(0, 0) = -std::conj(h(1));
    out.complement(1, 0) = std::conj(h(0));
  } else {
    // Columns 2..K of the Householder Q are an orthonormal basis of h's
    // complement; scaling by ||h|| makes the projector identity exact.
    Eigen::HouseholderQR<CMatrix> qr{CMatrix(h)};
    const CMatrix q = qr.householderQ() * CMatrix::Identity(k, k);
    out.complement = norm * q.rightCols(k - 1);
  }
  for (Eigen::Index c = 0; c < out.complement.cols(); ++c) {
    CVector col = out.complement.col(c);
    fix_phase(col, 1e-12 * norm);
    out.complement.col(c) = col;
  }
  return out;
}

double rayleigh_quotient(const CMatrix& a, const CMatrix& b, const CVector& v) {
  const cd num = v.dot(a * v);
  const cd den = v.dot(b * v);
  return num.real() / den.real();
}

GeneralizedEigResult generalized_eig_extreme(const HermitianMatrix& a,
                                             const HermitianMatrix& b,
                                             Extreme which) {
  const Eigen::Index n = a.dim();
  if (b.dim() != n) throw DomainError("generalized_eig_extreme: dimension mismatch");

  Eigen::SelfAdjointEigenSolver<CMatrix> bspec(b.matrix(), Eigen::EigenvaluesOnly);
  const RVector& bvals = bspec.eigenvalues();
  const double bmax = bvals.cwiseAbs().maxCoeff();
  if (!(bvals(0) > kDefiniteTol * bmax) || !(bmax > 0.0)) {
    throw DomainError("generalized_eig_extreme: B is not positive definite");
  }

  Eigen::LLT<CMatrix> llt(b.matrix());
  if (llt.info() != Eigen::Success) {
    throw DomainError("generalized_eig_extreme: Cholesky factorization failed");
  }
  const auto lower = llt.matrixL();
  // C = L^-1 A L^-H
  CMatrix tmp = lower.solve(a.matrix());
  CMatrix c = lower.solve(tmp.adjoint()).adjoint();
  c = 0.5 * (c + c.adjoint());

  Eigen::SelfAdjointEigenSolver<CMatrix> es(c);
  const RVector& vals = es.eigenvalues();  // ascending
  const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  const double extreme = which == Extreme::kMax ? vals(n - 1) : vals(0);

  std::vector<Eigen::Index> members;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(vals(i) - extreme) < kDegeneracyGap * scale) members.push_back(i);
  }

  GeneralizedEigResult out;
  out.degenerate = members.size() > 1;
  const auto upper = llt.matrixU();  // L^H
  if (!out.degenerate) {
    const Eigen::Index idx = which == Extreme::kMax ? n - 1 : 0;
    out.vector = upper.solve(CVector(es.eigenvectors().col(idx)));
  } else {
    CMatrix y(n, static_cast<Eigen::Index>(members.size()));
    for (std::size_t m = 0; m < members.size(); ++m) {
      y.col(static_cast<Eigen::Index>(m)) = es.eigenvectors().col(members[m]);
    }
    const CMatrix basis = upper.solve(y);
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(basis);
    for (Eigen::Index k = 0; k < n; ++k) {
      const CVector e = CVector::Unit(n, k);
      const CVector p = basis * cod.solve(e);
      if (p.norm() > 1e-8) {
        out.vector = p;
        break;
      }
    }
  }
  out.vector.normalize();
  fix_phase(out.vector, 1e-12);
  out.value = rayleigh_quotient(a.matrix(), b.matrix(), out.vector);
  return out;
}

CMatrix hermitian_sqrt(const HermitianMatrix& r) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r.matrix());
  RVector vals = es.eigenvalues();
  const double trace = std::abs(r.matrix().trace().real());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < 0.0) {
      if (vals(i) < -kSqrtNegativeTol * trace) {
        throw DomainError("hermitian_sqrt: matrix is not positive semi-definite");
      }
      vals(i) = 0.0;
    }
  }
  const CMatrix& u = es.eigenvectors();
  CMatrix s = u * vals.cwiseSqrt().cast<cd>().asDiagonal() * u.adjoint();
  return 0.5 * (s + s.adjoint());
}

double logdet_hpd(const HermitianMatrix& m) {
  Eigen::LLT<CMatrix> llt(m.matrix());
  if (llt.info() != Eigen::Success) {
    throw DomainError("logdet_hpd: matrix is not positive definite");
  }
  const CMatrix& l = llt.matrixLLT();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double d = l(i, i).real();
    if (!(d > 0.0)) throw DomainError("logdet_hpd: matrix is not positive definite");
    acc += std::log(d);
  }
  return 2.0 * acc;
}

double char_poly_det2(const HermitianMatrix& m, double rho) {
  if (m.dim() != 2) throw DomainError("char_poly_det2: matrix must be 2x2");
  const CMatrix& a = m.matrix();
  const double tr = a.trace().real();
  const double det = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
  return 1.0 + rho * tr + rho * rho * det;
}

double subspace_angle(const CVector& u, const CVector& v) {
  const double c = std::abs(u.dot(v)) / (u.norm() * v.norm());
  return std::acos(std::clamp(c, 0.0, 1.0));
}

}  // namespace gmat
