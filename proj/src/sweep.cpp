// SPDX-License-Identifier: Apache-2.0

#include "gmat/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <thread>

namespace gmat {

std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PrecoderSet design_precoders(Scheme scheme, const CsitView& csit, const Schedule& schedule,
                             double rho, const MmseOptConfig& mmse) {
  switch (scheme) {
    case Scheme::kMat: {
      PrecoderSet p = mat_precoder(csit, schedule);
      normalize_to_budget(p, schedule);
      return p;
    }
    case Scheme::kGmatMmse: {
      MmseOptConfig cfg = mmse;
      cfg.rho = rho;
      return gmat_mmse_optimize(csit, schedule, cfg);
    }
    case Scheme::kGmatDsinr: {
      PrecoderSet p = gmat_dsinr_precoder(csit, schedule, rho).precoders;
      normalize_to_budget(p, schedule);
      return p;
    }
    case Scheme::kMrt:
    case Scheme::kZf: {
      // Unit-norm beams; the present-slot gains are unknown and set to one.
      const CVector unit = CVector::Unit(2, 0);
      const auto dual = ic_dual_matrices(two_user_channels(csit), unit, unit, rho);
      auto design = mrt_zf_precoders(dual, schedule);
      PrecoderSet p = scheme == Scheme::kMrt ? design.mrt : design.zf;
      normalize_to_budget(p, schedule);
      return p;
    }
  }
  throw DomainError("design_precoders: unknown scheme");
}

SweepResult run_sweep(const SweepConfig& cfg, const SweepLogger& log) {
  cfg.validate();
  const Schedule schedule = make_schedule(cfg.users);
  const std::size_t n_real = static_cast<std::size_t>(cfg.realizations);
  const std::size_t n_scheme = cfg.schemes.size();
  const std::size_t n_snr = cfg.snr_grid_db.size();

  // rates[r][s * n_snr + g]; aggregation runs in realization order so the
  // result does not depend on the worker count.
  std::vector<std::vector<double>> rates(n_real, std::vector<double>(n_scheme * n_snr, 0.0));
  std::vector<char> dropped(n_real, 0);

  auto work = [&](std::size_t r) {
    std::mt19937_64 rng(realization_seed(cfg.seed, r));
    FadingConfig fading{cfg.users, cfg.tau_t, cfg.tau_r, cfg.seed};
    if (cfg.tau_mode == TauMode::kRandom) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      fading.tau_t = u(rng);
      fading.tau_r = u(rng);
    }
    const ChannelEpisode episode = sample_episode(fading, schedule, rng);
    const CsitView csit = csit_at(episode, schedule.start(2));
    try {
      for (std::size_t s = 0; s < n_scheme; ++s) {
        for (std::size_t g = 0; g < n_snr; ++g) {
          const double rho = rho_from_snr_db(cfg.snr_grid_db[g], cfg.users);
          const PrecoderSet p = design_precoders(cfg.schemes[s], csit, schedule, rho, cfg.mmse_opt);
          rates[r][s * n_snr + g] = sum_rate(episode, p, rho, schedule, cfg.rate_mode);
        }
      }
    } catch (const OptimizerDiverged&) {
      dropped[r] = 1;
    }
  };

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_real));
  if (workers <= 1) {
    for (std::size_t r = 0; r < n_real; ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < n_real; r = next++) work(r);
      });
    }
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  for (char d : dropped) result.dropped_realizations += d;
  const int kept = cfg.realizations - result.dropped_realizations;
  for (std::size_t s = 0; s < n_scheme; ++s) {
    RateCurve curve{cfg.schemes[s], {}};
    for (std::size_t g = 0; g < n_snr; ++g) {
      double sum = 0.0;
      for (std::size_t r = 0; r < n_real; ++r) {
        if (!dropped[r]) sum += rates[r][s * n_snr + g];
      }
      RatePoint pt;
      pt.snr_db = cfg.snr_grid_db[g];
      pt.rho = rho_from_snr_db(pt.snr_db, cfg.users);
      pt.realizations = kept;
      pt.sum_rate = kept > 0 ? sum / kept : 0.0;
      if (kept > 1) {
        double ss = 0.0;
        for (std::size_t r = 0; r < n_real; ++r) {
          if (dropped[r]) continue;
          const double d = rates[r][s * n_snr + g] - pt.sum_rate;
          ss += d * d;
        }
        pt.std_err = std::sqrt(ss / (kept - 1) / kept);
      }
      curve.points.push_back(pt);
      if (log) log(curve, pt);
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

std::string format_csv(const std::vector<RateCurve>& curves) {
  if (curves.empty()) throw DomainError("format_csv: no curves");
  std::string out = "scheme,snr_db,sum_rate_bps_hz,std_err,realizations\n";
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out += scheme_label(c.scheme) + "," + fmt_double(p.snr_db) + "," +
             fmt_double(p.sum_rate) + "," + fmt_double(p.std_err) + "," +
             std::to_string(p.realizations) + "\n";
    }
  }
  return out;
}

void emit_csv(const std::vector<RateCurve>& curves, const std::string& path) {
  write_file(path, format_csv(curves));
}

std::string format_plot_data(const std::vector<RateCurve>& curves) {
  if (curves.empty()) throw DomainError("format_plot_data: no curves");
  std::string out;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (c > 0) out += "\n\n";
    out += "# " + scheme_label(curves[c].scheme) + "\n# snr_db sum_rate_bps_hz std_err\n";
    for (const auto& p : curves[c].points) {
      out += fmt_double(p.snr_db) + " " + fmt_double(p.sum_rate) + " " + fmt_double(p.std_err) +
             "\n";
    }
  }
  return out;
}

void emit_plot_data(const std::vector<RateCurve>& curves, const std::string& path) {
  write_file(path, format_plot_data(curves));
}

}  // namespace gmat
