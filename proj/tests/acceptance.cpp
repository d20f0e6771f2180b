// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Each criterion also has a wall-clock budget.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gmat/sweep.hpp"
#include "test_util.hpp"

using namespace gmat;
using gmat::testing::random_episode;
using gmat::testing::random_precoders;
using gmat::testing::random_unit;
using gmat::testing::singular_values;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double relative(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& x) {
  MeanSe out;
  for (double v : x) out.mean += v;
  out.mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
  return out;
}

int numerical_rank(const CMatrix& m, double rel_tol) {
  const auto sv = singular_values(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv(i) > rel_tol * sv(0);
  return rank;
}

// 1. Alignment ranks
Outcome alignment_ranks() {
  std::mt19937_64 rng(1001);
  const auto s2 = make_schedule(2);
  double worst_ratio = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const auto ep = random_episode(s2, rng);
    const auto p = mat_precoder(csit_at(ep, s2.start(2)), s2);
    const auto c = make_lifting_constants(s2, ep);
    for (const auto& [rx, owner] : {std::pair{0, 1}, std::pair{1, 0}}) {
      const auto sv =
          singular_values(assemble_effective_channel(rx, owner, 0, ep, s2, p, c, false).matrix);
      worst_ratio = std::max(worst_ratio, sv(1) / sv(0));
    }
  }

  // Interference at receiver A from users B and C, pooled over both branches:
  // 12 columns in an 11-slot space.
  const auto s3 = make_schedule(3);
  int pooled_ok = 0;
  int per_branch_min = 99;
  int per_branch_max = 0;
  for (int n = 0; n < 200; ++n) {
    const auto ep = random_episode(s3, rng);
    const auto p = mat_precoder(csit_at(ep, s3.start(2)), s3);
    const auto c = make_lifting_constants(s3, ep);
    CMatrix pooled(s3.total_slots, 12);
    for (int l = 0; l < 2; ++l) {
      CMatrix branch(s3.total_slots, 6);
      branch.leftCols(3) = assemble_effective_channel(0, 1, l, ep, s3, p, c, false).matrix;
      branch.rightCols(3) = assemble_effective_channel(0, 2, l, ep, s3, p, c, false).matrix;
      pooled.middleCols(6 * l, 6) = branch;
      const int r = numerical_rank(branch, 1e-10);
      per_branch_min = std::min(per_branch_min, r);
      per_branch_max = std::max(per_branch_max, r);
    }
    pooled_ok += numerical_rank(pooled, 1e-10) == 5;
  }
  return {worst_ratio < 1e-10 && pooled_ok == 200,
          fmt("2-user max sigma2/sigma1 = %.2e; 3-user pooled-interference rank 5 in %d/200 "
              "(per-branch rank %d..%d)",
              worst_ratio, pooled_ok, per_branch_min, per_branch_max)};
}

// 2. MI identity chain
Outcome mi_identity_chain() {
  std::mt19937_64 rng(1002);
  const auto s = make_schedule(2);
  double worst = 0.0;
  int instances = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto ep = random_episode(s, rng);
    const auto ch = two_user_channels(ep);
    const auto c = make_lifting_constants(s, ep);
    const CVector w1 = random_unit(2, rng);
    const CVector w2 = random_unit(2, rng);
    PrecoderSet p(s);
    p.set_w(0, 1, 0, w1);
    p.set_w(1, 0, 0, w2);
    const auto rx_a = receiver_channels(0, ep, s, p, c, false);
    const auto rx_b = receiver_channels(1, ep, s, p, c, false);
    for (double rho : {0.1, 1.0, 10.0, 1000.0}) {
      const double ia = mutual_information_exact(rx_a, 0, rho);
      const double ib = mutual_information_exact(rx_b, 0, rho);
      const auto closed = mutual_information_2user_closed(w1, w2, ch, rho);
      const double rayleigh = sum_mi_rayleigh_form(w1, w2, ch, rho);
      worst = std::max({worst, relative(closed.user_a, ia), relative(closed.user_b, ib),
                        relative(closed.user_a + closed.user_b, ia + ib),
                        relative(rayleigh, ia + ib)});
      ++instances;
    }
  }
  return {worst < 1e-9,
          fmt("%d instances, max relative disagreement %.2e (limit 1e-9)", instances, worst)};
}

// 3. Gradient fidelity
Outcome gradient_fidelity() {
  std::mt19937_64 rng(1003);
  const double h = 1e-6;
  const double rho = 5.0;
  double worst = 0.0;
  int coordinates = 0;
  for (int k = 2; k <= 3; ++k) {
    const auto s = make_schedule(k);
    for (int inst = 0; inst < 10; ++inst) {
      const auto ep = random_episode(s, rng);
      const VirtualMmseModel model(csit_at(ep, s.start(2)), s);
      const auto p = random_precoders(s, rng);
      const auto grad = model.gradient(p, rho);
      std::uniform_int_distribution<int> pick_l(0, s.branches - 1);
      std::uniform_int_distribution<int> pick_user(0, k - 1);
      std::uniform_int_distribution<int> pick_part(0, 1);
      int done = 0;
      while (done < 20) {
        const int l = pick_l(rng);
        const int j = pick_user(rng);
        const int i = pick_user(rng);
        if (i == j) continue;
        const int r = p.pairs().row_of({i, j});
        const int col = pick_user(rng);
        const bool imag = pick_part(rng) == 1;
        PrecoderSet plus = p;
        PrecoderSet minus = p;
        const cd delta = imag ? cd(0.0, h) : cd(h, 0.0);
        plus.block(j, l)(r, col) += delta;
        minus.block(j, l)(r, col) -= delta;
        const double fd = (model.cost(plus, rho) - model.cost(minus, rho)) / (2.0 * h);
        const cd g = grad[static_cast<std::size_t>(l * k + j)](r, col);
        worst = std::max(worst, relative(fd, imag ? g.imag() : g.real()));
        ++done;
        ++coordinates;
      }
    }
  }
  return {worst < 1e-5, fmt("%d coordinates (K = 2, 3), max relative error %.2e (limit 1e-5)",
                            coordinates, worst)};
}

// 4. DSINR eigen-optimality
Outcome dsinr_optimality() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> log_rho(-1.0, 3.0);
  double worst_gap = -std::numeric_limits<double>::infinity();
  int solves = 0;
  for (int k = 2; k <= 3; ++k) {
    const auto s = make_schedule(k);
    for (int inst = 0; inst < 100; ++inst) {
      const auto ep = random_episode(s, rng);
      const auto csit = csit_at(ep, s.start(2));
      const double rho = std::pow(10.0, log_rho(rng));
      const auto design = gmat_dsinr_precoder(csit, s, rho);
      for (int l = 0; l < s.branches; ++l) {
        for (int j = 0; j < k; ++j) {
          for (int i = 0; i < k; ++i) {
            if (i == j) continue;
            const auto problem = make_dual_sinr_problem(csit, s, j, i, l, rho);
            const double mine = problem(design.precoders.w(j, i, l));
            double best = 0.0;
            for (int n = 0; n < 10000; ++n) best = std::max(best, problem(random_unit(k, rng)));
            worst_gap = std::max(worst_gap, best - mine);
            ++solves;
          }
        }
      }
    }
  }
  return {worst_gap <= 1e-9,
          fmt("%d precoders vs 10000 random unit vectors each; max(best random - closed form) "
              "= %.3e (slack 1e-9)",
              solves, worst_gap)};
}

// 5. DoF slopes
Outcome dof_slopes() {
  std::string detail;
  bool pass = true;
  for (int k = 2; k <= 3; ++k) {
    SweepConfig cfg;
    cfg.users = k;
    cfg.snr_grid_db = {60.0, 65.0, 70.0, 75.0, 80.0};
    cfg.schemes = {Scheme::kMat};
    cfg.realizations = 200;
    cfg.seed = 1005;
    const auto result = run_sweep(cfg);
    const double slope = dof_slope(result.curves[0].points);
    const double target = make_schedule(k).dof.value();
    const double err = relative(slope, target);
    pass = pass && err < 0.05;
    detail += fmt("%sK=%d slope %.4f vs %.4f (%.2f%%)", k == 2 ? "" : "; ", k, slope, target,
                  100.0 * err);
  }
  return {pass, detail + " (limit 5%)"};
}

// 6. Finite-SNR ordering. All schemes see the same episodes, so the margin
// is measured in standard errors of the per-episode rate differences.
Outcome finite_snr_ordering() {
  const int n = 500;
  std::string detail;
  bool pass = true;
  for (int k = 2; k <= 3; ++k) {
    const auto s = make_schedule(k);
    const double rho = rho_from_snr_db(10.0, k);
    const MmseOptConfig mmse;
    std::vector<double> mat, dsinr, gmmse, d_dsinr, d_mmse;
    for (int r = 0; r < n; ++r) {
      std::mt19937_64 rng(realization_seed(1006, static_cast<std::uint64_t>(r)));
      const auto ep = sample_episode(FadingConfig{k, 0.0, 0.0, 0}, s, rng);
      const auto csit = csit_at(ep, s.start(2));
      mat.push_back(sum_rate(ep, design_precoders(Scheme::kMat, csit, s, rho, mmse), rho, s));
      dsinr.push_back(
          sum_rate(ep, design_precoders(Scheme::kGmatDsinr, csit, s, rho, mmse), rho, s));
      gmmse.push_back(
          sum_rate(ep, design_precoders(Scheme::kGmatMmse, csit, s, rho, mmse), rho, s));
      d_dsinr.push_back(dsinr.back() - mat.back());
      d_mmse.push_back(gmmse.back() - mat.back());
    }
    const auto m = mean_se(mat);
    const auto a = mean_se(dsinr);
    const auto b = mean_se(gmmse);
    const auto da = mean_se(d_dsinr);
    const auto db = mean_se(d_mmse);
    pass = pass && da.mean >= 3.0 * da.se && db.mean >= 3.0 * db.se;
    detail += fmt("%sK=%d MAT %.4f(%.4f) DSINR %.4f(%.4f) gain %.4f = %.1f SE, MMSE %.4f(%.4f) "
                  "gain %.4f = %.1f SE",
                  k == 2 ? "" : "; ", k, m.mean, m.se, a.mean, a.se, da.mean, da.mean / da.se,
                  b.mean, b.se, db.mean, db.mean / db.se);
  }
  return {pass, detail + " (need >= 3 SE)"};
}

// 7. IC duality and MRT / ZF limits
Outcome ic_duality() {
  std::mt19937_64 rng(1007);
  const auto s = make_schedule(2);
  std::uniform_real_distribution<double> log_rho(-1.0, 3.0);
  double worst_rel = 0.0;
  double worst_mrt = 0.0;
  double worst_zf = 0.0;
  for (int n = 0; n < 500; ++n) {
    const auto ep = random_episode(s, rng);
    const auto ch = two_user_channels(ep);
    const auto c = make_lifting_constants(s, ep);
    const CVector w1 = random_unit(2, rng);
    const CVector w2 = random_unit(2, rng);
    const double rho = std::pow(10.0, log_rho(rng));
    PrecoderSet p(s);
    p.set_w(0, 1, 0, w1);
    p.set_w(1, 0, 0, w2);
    const double exact = mutual_information_exact(receiver_channels(0, ep, s, p, c, false), 0, rho) +
                         mutual_information_exact(receiver_channels(1, ep, s, p, c, false), 0, rho);
    const auto d = ic_dual_matrices(ch, w1, w2, rho);
    const double dual =
        std::log2(1.0 + d.sinr1(w1, w2)) + std::log2(1.0 + d.sinr2(w1, w2)) + std::log2(d.c);
    worst_rel = std::max(worst_rel, relative(dual, exact));

    const auto csit_ch = two_user_channels(csit_at(ep, s.start(2)));
    const CVector unit = CVector::Unit(2, 0);
    const auto design = mrt_zf_precoders(ic_dual_matrices(csit_ch, unit, unit, 1e8), s);
    const CVector ha_perp = orth_complement(csit_ch.ha1).complement.col(0);
    worst_mrt = std::max(worst_mrt, subspace_angle(design.mrt.w(0, 1, 0), ha_perp));
    worst_zf = std::max(worst_zf, subspace_angle(design.zf.w(0, 1, 0), csit_ch.hb1));
  }
  return {worst_rel < 1e-9 && worst_mrt < 1e-3 && worst_zf < 1e-3,
          fmt("500 instances: max relative gap %.2e (limit 1e-9); at rho=1e8 max angle "
              "MRT-to-hA_perp %.2e, ZF-to-hB %.2e rad (limit 1e-3)",
              worst_rel, worst_mrt, worst_zf)};
}

// 8. Optimizer dominance over the (budget-normalized) MAT starting point
Outcome optimizer_dominance() {
  std::mt19937_64 rng(1008);
  const auto s = make_schedule(2);
  const double rho = 10.0;
  int dominated = 0;
  int strict = 0;
  double mean_gain = 0.0;
  for (int n = 0; n < 500; ++n) {
    const auto ep = random_episode(s, rng);
    const auto csit = csit_at(ep, s.start(2));
    const VirtualMmseModel model(csit, s);
    auto mat = mat_precoder(csit, s);
    normalize_to_budget(mat, s);
    MmseOptConfig cfg;
    cfg.rho = rho;
    const auto best = gmat_mmse_optimize(csit, s, cfg);
    const double j_mat = model.cost(mat, rho);
    const double j_opt = model.cost(best, rho);
    dominated += j_opt <= j_mat;
    strict += j_opt < j_mat;
    mean_gain += (j_mat - j_opt) / 500.0;
  }
  return {dominated == 500,
          fmt("J(GMAT-MMSE) <= J(MAT) in %d/500 episodes (strictly lower in %d), mean "
              "reduction %.4f",
              dominated, strict, mean_gain)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "alignment ranks", 30.0, alignment_ranks},
      {2, "MI identity chain", 10.0, mi_identity_chain},
      {3, "gradient fidelity", 60.0, gradient_fidelity},
      {4, "DSINR eigen-optimality", 60.0, dsinr_optimality},
      {5, "DoF slopes", 300.0, dof_slopes},
      {6, "finite-SNR ordering", 600.0, finite_snr_ordering},
      {7, "IC duality", 30.0, ic_duality},
      {8, "optimizer dominance", 300.0, optimizer_dominance},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("%s [%d] %s: %s; %.1f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs, c.budget_s, in_time ? "" : " OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
