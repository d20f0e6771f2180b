// SPDX-License-Identifier: Apache-2.0

#include "gmat/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gmat {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Schedule make_schedule(int users, int max_users) {
  if (users < 2) throw DomainError("make_schedule: K must be >= 2");
  if (users > max_users) {
    throw DomainError("make_schedule: K = " + std::to_string(users) + " exceeds bound " +
                      std::to_string(max_users));
  }
  Schedule s;
  s.users = users;
  s.branches = 1;
  for (int i = 2; i < users; ++i) s.branches *= i;

  const auto n = static_cast<std::size_t>(users + 1);
  s.slots_in_phase.assign(n, 0);
  s.messages_in_phase.assign(n, 0);
  s.blocks_in_phase.assign(n, 0);
  s.phase_start.assign(n, 0);
  int cursor = 0;
  for (int k = 1; k <= users; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    s.slots_in_phase[idx] = s.branches * users / k;
    s.messages_in_phase[idx] = static_cast<int>(binomial(users, k));
    s.blocks_in_phase[idx] = s.slots_in_phase[idx] / s.messages_in_phase[idx];
    s.phase_start[idx] = cursor;
    cursor += s.slots_in_phase[idx];
  }
  s.total_slots = cursor;
  const std::int64_t num = static_cast<std::int64_t>(users) * users * s.branches;
  const std::int64_t g = std::gcd(num, static_cast<std::int64_t>(cursor));
  s.dof = Rational{num / g, cursor / g};
  return s;
}

int Schedule::block_offset(int k, int branch) const {
  const int lk = blocks_in_phase.at(static_cast<std::size_t>(k));
  const int numer = (branch + 1) * lk;
  const int ceil_div = (numer + branches - 1) / branches;
  return (ceil_div - 1) * q(k);
}

// ---------------------------------------------------------------------------

int GenMatrixTemplate::row_of(const std::vector<int>& subset) const {
  auto sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  const auto it = std::find(rows.begin(), rows.end(), sorted);
  if (it == rows.end()) throw DomainError("GenMatrixTemplate: subset not present");
  return static_cast<int>(it - rows.begin());
}

bool GenMatrixTemplate::contains(int row, int user) const {
  const auto& r = rows.at(static_cast<std::size_t>(row));
  return std::binary_search(r.begin(), r.end(), user);
}

GenMatrixTemplate gen_matrix_template(int users, int order) {
  if (order < 1 || order > users) {
    throw DomainError("gen_matrix_template: order out of range");
  }
  GenMatrixTemplate t{users, order, {}};
  std::vector<int> subset(static_cast<std::size_t>(order));
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    t.rows.push_back(subset);
    int pos = order - 1;
    while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == users - order + pos) --pos;
    if (pos < 0) break;
    ++subset[static_cast<std::size_t>(pos)];
    for (int p = pos + 1; p < order; ++p) {
      subset[static_cast<std::size_t>(p)] = subset[static_cast<std::size_t>(p - 1)] + 1;
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

PrecoderSet::PrecoderSet(const Schedule& schedule)
    : users_(schedule.users),
      branches_(schedule.branches),
      pairs_(gen_matrix_template(schedule.users, 2)) {
  blocks_.assign(static_cast<std::size_t>(users_ * branches_),
                 CMatrix::Zero(schedule.q(2), users_));
}

CVector PrecoderSet::w(int j, int i, int l) const {
  if (i == j) throw DomainError("PrecoderSet: w_jj is not defined");
  return block(j, l).row(pairs_.row_of({i, j})).transpose();
}

void PrecoderSet::set_w(int j, int i, int l, const CVector& v) {
  if (i == j) throw DomainError("PrecoderSet: w_jj is not defined");
  if (v.size() != users_) throw DomainError("PrecoderSet: vector length must be K");
  block(j, l).row(pairs_.row_of({i, j})) = v.transpose();
}

double PrecoderSet::power() const {
  double p = 0.0;
  for (const auto& b : blocks_) p += b.squaredNorm();
  return p;
}

void PrecoderSet::scale(double factor) {
  for (auto& b : blocks_) b *= factor;
}

double power_budget(const Schedule& schedule) {
  return static_cast<double>(schedule.users) * schedule.t(2);
}

void normalize_to_budget(PrecoderSet& precoders, const Schedule& schedule) {
  const double p = precoders.power();
  if (p > 0.0) precoders.scale(std::sqrt(power_budget(schedule) / p));
}

void project_to_budget(PrecoderSet& precoders, const Schedule& schedule) {
  const double p = precoders.power();
  const double budget = power_budget(schedule);
  if (p > budget) precoders.scale(std::sqrt(budget / p));
}

// ---------------------------------------------------------------------------

CMatrix combiner_matrix(const Schedule& schedule, int k) {
  const int users = schedule.users;
  if (k < 2 || k > users - 1) throw DomainError("combiner_matrix: k out of range");
  const auto from = gen_matrix_template(users, k);
  const bool last = k == users - 1;
  const int rows = last ? schedule.t(users) : schedule.q(k + 1);
  const auto to = gen_matrix_template(users, k + 1);
  CMatrix c = CMatrix::Zero(rows, schedule.q(k));
  for (int r = 0; r < rows; ++r) {
    for (int col = 0; col < schedule.q(k); ++col) {
      bool keep = true;
      if (!last) {
        const auto& big = to.rows[static_cast<std::size_t>(r)];
        const auto& small = from.rows[static_cast<std::size_t>(col)];
        keep = std::includes(big.begin(), big.end(), small.begin(), small.end());
      }
      if (keep) c(r, col) = std::pow(static_cast<double>(r + 1), col);
    }
  }
  return c;
}

int phase_antenna(const Schedule& schedule, int k, int l) {
  const int users = schedule.users;
  if (k == users) return 0;
  if (users <= 3) return l;
  const int lk = schedule.blocks_in_phase.at(static_cast<std::size_t>(k));
  const int s = (((l + 1) * lk) % schedule.branches) % k;
  return s == 0 ? 0 : s - 1;
}

int phase_slot(const Schedule& schedule, int k, int l, int r) {
  if (k == schedule.users) return schedule.start(k) + r;
  return schedule.start(k) + schedule.block_offset(k, l) + r;
}

namespace {

LiftingConstants combiners_only(const Schedule& schedule) {
  LiftingConstants c;
  c.combiners.resize(static_cast<std::size_t>(schedule.users));
  c.scalings.resize(static_cast<std::size_t>(schedule.users));
  for (int k = 2; k <= schedule.users - 1; ++k) {
    c.combiners[static_cast<std::size_t>(k)] = combiner_matrix(schedule, k);
  }
  return c;
}

}  // namespace

LiftingConstants make_lifting_constants(const Schedule& schedule,
                                        const ChannelEpisode& episode) {
  if (episode.slots() != schedule.total_slots || episode.users() != schedule.users) {
    throw DomainError("make_lifting_constants: episode does not match schedule");
  }
  LiftingConstants c = combiners_only(schedule);
  for (int k = 2; k <= schedule.users - 1; ++k) {
    const auto tmpl = gen_matrix_template(schedule.users, k);
    auto& per_branch = c.scalings[static_cast<std::size_t>(k)];
    for (int l = 0; l < schedule.branches; ++l) {
      const int antenna = phase_antenna(schedule, k, l);
      CVector diag(schedule.q(k));
      for (int r = 0; r < schedule.q(k); ++r) {
        // Channel of the first user outside this row's subset; it overheard
        // the message and its observation is what gets forwarded.
        int outsider = 0;
        while (tmpl.contains(r, outsider)) ++outsider;
        diag(r) = episode.coeff(outsider, antenna, phase_slot(schedule, k, l, r));
      }
      per_branch.push_back(diag);
    }
  }
  return c;
}

LiftingConstants make_virtual_lifting_constants(const Schedule& schedule) {
  LiftingConstants c = combiners_only(schedule);
  for (int k = 2; k <= schedule.users - 1; ++k) {
    c.scalings[static_cast<std::size_t>(k)].assign(
        static_cast<std::size_t>(schedule.branches), CVector::Ones(schedule.q(k)));
  }
  return c;
}

CMatrix lift_generation_matrix(const CMatrix& w_k, const CMatrix& combiner,
                               const CVector& scaling) {
  if (combiner.cols() != scaling.size() || scaling.size() != w_k.rows()) {
    throw DomainError("lift_generation_matrix: shape mismatch");
  }
  return combiner * scaling.asDiagonal() * w_k;
}

// ---------------------------------------------------------------------------

namespace {

// Rows of H_ij^l as (slot, D coefficient, generation-matrix row) triples are
// filled phase by phase; `present` gives the D entry for a slot and antenna.
template <typename Present>
CMatrix assemble(int j, int l, const Schedule& schedule, const PrecoderSet& precoders,
                 const LiftingConstants& constants, const CVector& phase1_row,
                 Present present) {
  const int users = schedule.users;
  CMatrix h = CMatrix::Zero(schedule.total_slots, users);
  h.row(schedule.phase1_slot(j, l)) = phase1_row.transpose();

  CMatrix w = precoders.block(j, l);
  for (int k = 2; k <= users; ++k) {
    if (k > 2) {
      w = lift_generation_matrix(w, constants.combiner(k - 1), constants.scaling(k - 1, l));
    }
    const int antenna = phase_antenna(schedule, k, l);
    for (int r = 0; r < w.rows(); ++r) {
      const int slot = phase_slot(schedule, k, l, r);
      h.row(slot) = present(antenna, slot) * w.row(r);
    }
  }
  return h;
}

}  // namespace

EffectiveChannel assemble_effective_channel(int i, int j, int l,
                                            const ChannelEpisode& episode,
                                            const Schedule& schedule,
                                            const PrecoderSet& precoders,
                                            const LiftingConstants& constants,
                                            bool is_virtual) {
  if (episode.users() != schedule.users || precoders.users() != schedule.users ||
      episode.slots() != schedule.total_slots) {
    throw DomainError("assemble_effective_channel: inputs from different schedules");
  }
  if (is_virtual) {
    return assemble_virtual_channel(i, j, l, csit_at(episode, schedule.start(2)), schedule,
                                    precoders);
  }
  EffectiveChannel out{{}, i, j, l, false};
  out.matrix = assemble(j, l, schedule, precoders, constants,
                        episode.h(i, schedule.phase1_slot(j, l)),
                        [&](int antenna, int slot) { return episode.coeff(i, antenna, slot); });
  return out;
}

EffectiveChannel assemble_virtual_channel(int i, int j, int l, const CsitView& csit,
                                          const Schedule& schedule,
                                          const PrecoderSet& precoders) {
  if (csit.now() < schedule.start(2)) {
    throw DomainError("assemble_virtual_channel: phase-1 channels not yet known");
  }
  static thread_local std::map<int, LiftingConstants> cache;
  auto it = cache.find(schedule.users);
  if (it == cache.end()) {
    it = cache.emplace(schedule.users, make_virtual_lifting_constants(schedule)).first;
  }
  EffectiveChannel out{{}, i, j, l, true};
  out.matrix = assemble(j, l, schedule, precoders, it->second,
                        csit.h(i, schedule.phase1_slot(j, l)),
                        [](int, int) { return cd(1.0, 0.0); });
  return out;
}

CMatrix branch_lift_operator(const Schedule& schedule, int l) {
  const int users = schedule.users;
  CMatrix q = CMatrix::Zero(schedule.total_slots, schedule.q(2));
  CMatrix lifted = CMatrix::Identity(schedule.q(2), schedule.q(2));
  for (int k = 2; k <= users; ++k) {
    if (k > 2) lifted = combiner_matrix(schedule, k - 1) * lifted;
    for (int r = 0; r < lifted.rows(); ++r) q.row(phase_slot(schedule, k, l, r)) = lifted.row(r);
  }
  return q;
}

}  // namespace gmat
