// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "gmat/schedule.hpp"
#include "gmat/sweep.hpp"

namespace gmat {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail(int line, const std::string& key, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + msg);
}

template <typename T>
T parse_number(const std::string& text, int line, const std::string& key) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    fail(line, key, "cannot parse '" + text + "' as a number");
  }
  return value;
}

}  // namespace

std::string scheme_label(Scheme s) {
  switch (s) {
    case Scheme::kMat: return "MAT";
    case Scheme::kGmatMmse: return "GMAT-MMSE";
    case Scheme::kGmatDsinr: return "GMAT-DSINR";
    case Scheme::kMrt: return "MRT";
    case Scheme::kZf: return "ZF";
  }
  return "?";
}

Scheme parse_scheme(const std::string& label) {
  for (Scheme s : {Scheme::kMat, Scheme::kGmatMmse, Scheme::kGmatDsinr, Scheme::kMrt,
                   Scheme::kZf}) {
    if (scheme_label(s) == label) return s;
  }
  throw ConfigError("unknown scheme '" + label + "'");
}

void SweepConfig::validate() const {
  if (users < 2 || users > kMaxUsers) {
    throw ConfigError("K: must be in [2, " + std::to_string(kMaxUsers) + "]");
  }
  if (snr_grid_db.empty()) throw ConfigError("snr_db: grid must be nonempty");
  for (std::size_t i = 1; i < snr_grid_db.size(); ++i) {
    if (!(snr_grid_db[i] > snr_grid_db[i - 1])) {
      throw ConfigError("snr_db: grid must be strictly increasing");
    }
  }
  if (realizations < 1) throw ConfigError("realizations: must be >= 1");
  if (schemes.empty()) throw ConfigError("schemes: at least one scheme required");
  for (Scheme s : schemes) {
    if ((s == Scheme::kMrt || s == Scheme::kZf) && users != 2) {
      throw ConfigError("schemes: " + scheme_label(s) + " is defined only for K = 2");
    }
  }
  if (!(tau_t >= 0.0 && tau_t < 1.0)) throw ConfigError("tau_t: must lie in [0, 1)");
  if (!(tau_r >= 0.0 && tau_r < 1.0)) throw ConfigError("tau_r: must lie in [0, 1)");
  if (!(mmse_opt.beta > 0.0)) throw ConfigError("mmse_beta: must be positive");
  if (mmse_opt.max_iters < 0) throw ConfigError("mmse_iters: must be >= 0");
  if (threads < 0) throw ConfigError("threads: must be >= 0");
}

SweepConfig parse_config(const std::string& text) {
  SweepConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) fail(line, content, "expected key=value");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (!seen.insert(key).second) fail(line, key, "duplicate key");

    if (key == "K") {
      cfg.users = parse_number<int>(value, line, key);
    } else if (key == "snr_db") {
      cfg.snr_grid_db.clear();
      for (const auto& item : split_list(value)) {
        cfg.snr_grid_db.push_back(parse_number<double>(item, line, key));
      }
    } else if (key == "realizations") {
      cfg.realizations = parse_number<int>(value, line, key);
    } else if (key == "schemes") {
      cfg.schemes.clear();
      for (const auto& item : split_list(value)) {
        try {
          cfg.schemes.push_back(parse_scheme(item));
        } catch (const ConfigError& e) {
          fail(line, key, e.what());
        }
      }
    } else if (key == "tau_mode") {
      if (value == "fixed") {
        cfg.tau_mode = TauMode::kFixed;
      } else if (value == "random") {
        cfg.tau_mode = TauMode::kRandom;
      } else {
        fail(line, key, "expected 'fixed' or 'random'");
      }
    } else if (key == "tau_t") {
      cfg.tau_t = parse_number<double>(value, line, key);
    } else if (key == "tau_r") {
      cfg.tau_r = parse_number<double>(value, line, key);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, line, key);
    } else if (key == "rate_mode") {
      if (value == "exact-mi") {
        cfg.rate_mode = RateMode::kExactMi;
      } else if (value == "mmse-sinr") {
        cfg.rate_mode = RateMode::kMmseSinr;
      } else {
        fail(line, key, "expected 'exact-mi' or 'mmse-sinr'");
      }
    } else if (key == "mmse_beta") {
      cfg.mmse_opt.beta = parse_number<double>(value, line, key);
    } else if (key == "mmse_iters") {
      cfg.mmse_opt.max_iters = parse_number<int>(value, line, key);
    } else if (key == "mmse_projection") {
      if (value == "scale-to-budget") {
        cfg.mmse_opt.projection = Projection::kScaleToBudget;
      } else if (value == "none") {
        cfg.mmse_opt.projection = Projection::kNone;
      } else {
        fail(line, key, "expected 'scale-to-budget' or 'none'");
      }
    } else if (key == "threads") {
      cfg.threads = parse_number<int>(value, line, key);
    } else {
      fail(line, key, "unknown key");
    }
  }
  for (const char* required : {"K", "snr_db", "schemes"}) {
    if (!seen.count(required)) throw ConfigError(std::string(required) + ": missing required key");
  }
  cfg.validate();
  return cfg;
}

}  // namespace gmat
