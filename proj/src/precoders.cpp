// SPDX-License-Identifier: Apache-2.0

#include "gmat/precoders.hpp"

namespace gmat {

namespace {

void require_phase2_view(const CsitView& csit, const Schedule& schedule) {
  if (csit.users() != schedule.users) throw DomainError("precoder: K mismatch");
  if (csit.now() < schedule.start(2)) {
    throw DomainError("precoder: CSIT view does not cover phase 1");
  }
}

CMatrix outer_sum(const CMatrix& basis) { return basis * basis.adjoint(); }

}  // namespace

PrecoderSet mat_precoder(const CsitView& csit, const Schedule& schedule) {
  require_phase2_view(csit, schedule);
  PrecoderSet p(schedule);
  for (int l = 0; l < schedule.branches; ++l) {
    for (int j = 0; j < schedule.users; ++j) {
      const int slot = schedule.phase1_slot(j, l);
      for (int i = 0; i < schedule.users; ++i) {
        if (i != j) p.set_w(j, i, l, csit.h(i, slot));
      }
    }
  }
  return p;
}

DualSinrProblem make_dual_sinr_problem(const CsitView& csit, const Schedule& schedule,
                                       int j, int i, int l, double rho, double w_norm_sq) {
  require_phase2_view(csit, schedule);
  if (!(rho > 0.0)) throw DomainError("dual SINR: rho must be positive");
  if (i == j) throw DomainError("dual SINR: i and j must differ");
  const int users = schedule.users;
  const int slot = schedule.phase1_slot(j, l);
  const CMatrix eye = CMatrix::Identity(users, users);

  CMatrix num = eye;
  for (int k = 0; k < users; ++k) {
    if (k == i) continue;
    num += rho * outer_sum(orth_complement(csit.h(k, slot)).complement);
  }
  const CVector hi = csit.h(i, slot);
  const double gamma = w_norm_sq + hi.squaredNorm() + 1.0 / rho;
  CMatrix den = gamma * eye + rho * outer_sum(orth_complement(hi).complement);
  return DualSinrProblem{HermitianMatrix(num), HermitianMatrix(den), gamma};
}

DsinrDesign gmat_dsinr_precoder(const CsitView& csit, const Schedule& schedule, double rho) {
  DsinrDesign out{PrecoderSet(schedule), 0};
  for (int l = 0; l < schedule.branches; ++l) {
    for (int j = 0; j < schedule.users; ++j) {
      for (int i = 0; i < schedule.users; ++i) {
        if (i == j) continue;
        const auto problem = make_dual_sinr_problem(csit, schedule, j, i, l, rho);
        const auto eig =
            generalized_eig_extreme(problem.numerator, problem.denominator, Extreme::kMax);
        if (eig.degenerate) ++out.degenerate_solves;
        out.precoders.set_w(j, i, l, eig.vector);
      }
    }
  }
  return out;
}

}  // namespace gmat
