#pragma once

// Counting fundamental discriminants -D whose class number has small odd
// part, bucket by bucket, plus the correlation and growth-model summaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "parallel.hpp"
#include "quadforms.hpp"

namespace heegnerlab {

namespace detail {

// squarefree[i] tells whether lo + i is squarefree, for i in [0, hi - lo].
inline std::vector<bool> squarefree_segment(std::uint64_t lo, std::uint64_t hi,
                                            const std::vector<std::uint32_t>& primes) {
  std::vector<bool> sf(hi - lo + 1, true);
  for (std::uint64_t p : primes) {
    const std::uint64_t q = p * p;
    if (q > hi) break;
    for (std::uint64_t m = (lo + q - 1) / q * q; m <= hi; m += q) sf[m - lo] = false;
  }
  if (lo == 0) sf[0] = false;
  return sf;
}

}  // namespace detail

/// Calls f(Discriminant) for every fundamental -D with d_min <= D <= d_max, in
/// increasing D. Squarefreeness comes from a segmented sieve.
template <class F>
void for_each_fundamental(std::uint64_t d_min, std::uint64_t d_max, F&& f, std::uint64_t segment = 1 << 16) {
  if (d_min > d_max) return;
  d_min = std::max<std::uint64_t>(d_min, 1);
  const auto primes = primes_up_to(static_cast<std::uint32_t>(isqrt(d_max) + 1));
  for (std::uint64_t lo = d_min; lo <= d_max; lo += segment) {
    const std::uint64_t hi = std::min(d_max, lo + segment - 1);
    const auto sf = detail::squarefree_segment(lo, hi, primes);
    const std::uint64_t qlo = lo / 4, qhi = hi / 4;
    const auto sf4 = detail::squarefree_segment(qlo, qhi, primes);
    for (std::uint64_t d = lo; d <= hi; ++d) {
      bool fundamental = false;
      if (d % 4 == 3) {
        fundamental = sf[d - lo];                     // -D = 1 mod 4
      } else if (d % 4 == 0) {
        const std::uint64_t m = d / 4;                // -D/4 = 2 or 3 mod 4
        fundamental = (m % 4 == 1 || m % 4 == 2) && sf4[m - qlo];
      }
      if (fundamental) f(Discriminant(-static_cast<std::int64_t>(d)));
    }
    if (hi == d_max) break;
  }
}

inline std::vector<Discriminant> fundamental_discriminants(std::uint64_t d_min, std::uint64_t d_max) {
  std::vector<Discriminant> out;
  for_each_fundamental(d_min, d_max, [&](Discriminant d) { out.push_back(d); });
  return out;
}

struct CensusConfig {
  std::uint64_t d_min = 500'000;
  std::uint64_t d_max = 1'000'000;
  std::uint64_t bucket = 5555;
  std::vector<std::uint64_t> thresholds{1, 3, 5, 7, 9};
  bool descending = false;  // process D from d_max downward
  bool by_range = false;    // bucket = width of a D-interval instead of a count

  void validate() const {
    if (d_min < 1 || d_min > d_max) throw std::invalid_argument("census range needs 1 <= min <= max");
    if (bucket < 1) throw std::invalid_argument("bucket must be >= 1");
    if (thresholds.empty()) throw std::invalid_argument("need at least one threshold");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (thresholds[i] % 2 == 0) throw std::invalid_argument("thresholds must be odd");
      if (i && thresholds[i] <= thresholds[i - 1]) throw std::invalid_argument("thresholds must be strictly ascending");
    }
  }
};

struct CensusRow {
  std::uint64_t count_d = 0;              // discriminants processed so far
  std::uint64_t last_d = 0;               // D of the last one processed
  std::vector<std::uint64_t> counts;      // #{h^odd <= C} per threshold
};

struct CensusRecord {
  std::int64_t disc;
  std::uint64_t h;
};

struct CensusResult {
  CensusConfig config;
  std::vector<CensusRow> rows;        // one per complete bucket
  std::vector<CensusRecord> records;  // every processed discriminant, in processing order
};

/// h_D is divisible by 2^(t-1), t = number of prime divisors of D.
inline bool genus_consistent(Discriminant d, std::uint64_t h) {
  const int t = omega(d.magnitude());
  return h % (std::uint64_t{1} << (t - 1)) == 0;
}

/// Rows are emitted after every `bucket` processed discriminants (or, with
/// by_range, at the end of every D-interval of width `bucket`); a trailing
/// partial bucket produces no row. Class numbers are computed in parallel over
/// contiguous shards and merged in order, so the output does not depend on
/// the worker count.
inline CensusResult run_census(const CensusConfig& cfg, unsigned workers = 1) {
  cfg.validate();
  auto discs = fundamental_discriminants(cfg.d_min, cfg.d_max);
  if (cfg.descending) std::reverse(discs.begin(), discs.end());

  std::vector<std::uint64_t> h(discs.size());
  parallel_for(discs.size(), workers, [&](std::size_t i) {
    h[i] = class_number(discs[i]);
    if (!genus_consistent(discs[i], h[i]))
      throw std::logic_error("genus divisibility violated at D = " + std::to_string(discs[i].magnitude()) +
                             ", h = " + std::to_string(h[i]));
  }, 256);

  CensusResult out;
  out.config = cfg;
  out.records.reserve(discs.size());
  auto range_bucket = [&](std::uint64_t d) {
    return cfg.descending ? (cfg.d_max - d) / cfg.bucket : (d - cfg.d_min) / cfg.bucket;
  };
  const std::uint64_t complete_ranges = (cfg.d_max - cfg.d_min + 1) / cfg.bucket;
  std::vector<std::uint64_t> running(cfg.thresholds.size(), 0);
  for (std::size_t i = 0; i < discs.size(); ++i) {
    out.records.push_back({discs[i].value(), h[i]});
    const auto odd = odd_part(h[i]);
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k)
      if (odd <= cfg.thresholds[k]) ++running[k];
    bool closes;
    if (cfg.by_range) {
      const auto b = range_bucket(discs[i].magnitude());
      const bool last_in_bucket = i + 1 == discs.size() || range_bucket(discs[i + 1].magnitude()) != b;
      closes = last_in_bucket && b < complete_ranges;
    } else {
      closes = (i + 1) % cfg.bucket == 0;
    }
    if (closes) out.rows.push_back({i + 1, discs[i].magnitude(), running});
  }
  return out;
}

/// Pearson correlation between count_d and counts[threshold_index].
inline double correlation(const std::vector<CensusRow>& rows, std::size_t threshold_index) {
  if (rows.size() < 2) throw std::invalid_argument("correlation needs at least two rows");
  const double n = static_cast<double>(rows.size());
  double sx = 0, sy = 0;
  for (const auto& r : rows) {
    sx += static_cast<double>(r.count_d);
    sy += static_cast<double>(r.counts.at(threshold_index));
  }
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (const auto& r : rows) {
    const double dx = static_cast<double>(r.count_d) - mx, dy = static_cast<double>(r.counts[threshold_index]) - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw std::invalid_argument("correlation undefined for constant data");
  return sxy / std::sqrt(sxx * syy);
}

enum class GrowthModel { linear, sqrt_log, power };

inline const char* model_name(GrowthModel m) {
  switch (m) {
    case GrowthModel::linear: return "X";
    case GrowthModel::sqrt_log: return "sqrt(X)log(X)";
    case GrowthModel::power: return "X^(1-delta)";
  }
  return "?";
}

struct GrowthFit {
  GrowthModel model;
  double delta = 0;      // only for the power model
  double intercept = 0;
  double kappa = 0;      // N ~ intercept + kappa * g(X)
  double rms_residual = 0;
};

struct GrowthReport {
  std::vector<GrowthFit> fits;  // in model order
  std::size_t best = 0;         // index of the smallest residual
  std::size_t points = 0;
};

namespace detail {

inline double growth_basis(GrowthModel m, double x, double delta) {
  switch (m) {
    case GrowthModel::linear: return x;
    case GrowthModel::sqrt_log: return std::sqrt(x) * std::log(x);
    case GrowthModel::power: return std::pow(x, 1.0 - delta);
  }
  return 0;
}

inline GrowthFit fit_affine(GrowthModel m, const std::vector<double>& xs, const std::vector<double>& ys, double delta) {
  const double n = static_cast<double>(xs.size());
  double sg = 0, sy = 0;
  std::vector<double> g(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    g[i] = growth_basis(m, xs[i], delta);
    sg += g[i];
    sy += ys[i];
  }
  const double mg = sg / n, my = sy / n;
  double sgy = 0, sgg = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sgy += (g[i] - mg) * (ys[i] - my);
    sgg += (g[i] - mg) * (g[i] - mg);
  }
  GrowthFit f{m, delta, 0, 0, 0};
  f.kappa = sgg > 0 ? sgy / sgg : 0;
  f.intercept = my - f.kappa * mg;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - f.intercept - f.kappa * g[i];
    ss += e * e;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

}  // namespace detail

/// Least-squares fits y ~ a + kappa g(X) for g in {X, sqrt(X) log X,
/// X^(1-delta)}; delta is chosen on a grid over (0, 0.5]. Exploratory only.
inline GrowthReport growth_probe(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 3) throw std::invalid_argument("growth_probe needs >= 3 points");
  GrowthReport rep;
  rep.points = xs.size();
  rep.fits.push_back(detail::fit_affine(GrowthModel::linear, xs, ys, 0));
  rep.fits.push_back(detail::fit_affine(GrowthModel::sqrt_log, xs, ys, 0));
  GrowthFit best_power{GrowthModel::power, 0, 0, 0, std::numeric_limits<double>::infinity()};
  for (int k = 1; k <= 50; ++k) {
    auto f = detail::fit_affine(GrowthModel::power, xs, ys, k / 100.0);
    if (f.rms_residual < best_power.rms_residual) best_power = f;
  }
  rep.fits.push_back(best_power);
  for (std::size_t i = 1; i < rep.fits.size(); ++i)
    if (rep.fits[i].rms_residual < rep.fits[rep.best].rms_residual) rep.best = i;
  return rep;
}

/// Growth probe on census rows: X is the last D of each row, y the count for
/// the given threshold; the first `trim` rows are dropped.
inline GrowthReport growth_probe(const std::vector<CensusRow>& rows, std::size_t threshold_index, std::size_t trim = 0) {
  std::vector<double> xs, ys;
  for (std::size_t i = trim; i < rows.size(); ++i) {
    xs.push_back(static_cast<double>(rows[i].last_d));
    ys.push_back(static_cast<double>(rows[i].counts.at(threshold_index)));
  }
  return growth_probe(xs, ys);
}

}  // namespace heegnerlab
