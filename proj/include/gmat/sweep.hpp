// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo sum-rate sweeps over an SNR grid and their CSV output.

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmat/metrics.hpp"
#include "gmat/precoders.hpp"

namespace gmat {

enum class Scheme { kMat, kGmatMmse, kGmatDsinr, kMrt, kZf };

std::string scheme_label(Scheme s);
Scheme parse_scheme(const std::string& label);

enum class TauMode { kFixed, kRandom };

struct SweepConfig {
  int users = 2;
  std::vector<double> snr_grid_db;
  int realizations = 1000;
  std::vector<Scheme> schemes;
  TauMode tau_mode = TauMode::kFixed;
  double tau_t = 0.0;
  double tau_r = 0.0;
  std::uint64_t seed = 1;
  RateMode rate_mode = RateMode::kExactMi;
  MmseOptConfig mmse_opt;  // rho is overwritten per grid point
  int threads = 0;         // 0: hardware concurrency

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Flat key=value text, one entry per line, '#' starts a comment.
///
///   K            = 2                      (required)
///   snr_db       = 0, 5, 10               (required, strictly increasing)
///   schemes      = MAT, GMAT-DSINR        (required; also GMAT-MMSE, MRT, ZF)
///   realizations = 1000
///   tau_mode     = fixed | random         (random: tau_t, tau_r ~ U[0,1) per realization)
///   tau_t        = 0.0
///   tau_r        = 0.0
///   seed         = 1
///   rate_mode    = exact-mi | mmse-sinr
///   mmse_beta    = 0.01
///   mmse_iters   = 500
///   mmse_projection = scale-to-budget | none
///   threads      = 0
SweepConfig parse_config(const std::string& text);

struct RateCurve {
  Scheme scheme = Scheme::kMat;
  std::vector<RatePoint> points;
};

struct SweepResult {
  std::vector<RateCurve> curves;
  int dropped_realizations = 0;  // optimizer divergence
};

/// Called once per grid point after aggregation.
using SweepLogger = std::function<void(const RateCurve&, const RatePoint&)>;

SweepResult run_sweep(const SweepConfig& cfg, const SweepLogger& log = {});

/// Per-realization seed derived from the sweep seed and realization index.
std::uint64_t realization_seed(std::uint64_t seed, std::uint64_t index);

/// Precoders of one scheme for one episode at one SNR, computed from the
/// CSIT available at the start of phase 2 and scaled to the order-2 budget.
PrecoderSet design_precoders(Scheme scheme, const CsitView& csit, const Schedule& schedule,
                             double rho, const MmseOptConfig& mmse);

std::string format_csv(const std::vector<RateCurve>& curves);
void emit_csv(const std::vector<RateCurve>& curves, const std::string& path);

/// One gnuplot data block per scheme (separated by two blank lines) with
/// columns snr_db, sum_rate_bps_hz, std_err.
std::string format_plot_data(const std::vector<RateCurve>& curves);
void emit_plot_data(const std::vector<RateCurve>& curves, const std::string& path);

}  // namespace gmat
