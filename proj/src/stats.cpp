#include "dstsp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dstsp/error.hpp"
#include "dstsp/parallel.hpp"
#include "dstsp/rng.hpp"

namespace dstsp::stats {
namespace {

double pow_zeta(double k, double z) { return k <= 0.0 ? 0.0 : std::exp(z * std::log(k)); }

// Binomial pmf terms, evaluated in log space; calls fn(k, pmf).
template <class Fn>
void for_each_binom(std::uint64_t n, double p, Fn&& fn) {
  if (p <= 0.0) {
    fn(std::uint64_t{0}, 1.0);
    return;
  }
  if (p >= 1.0) {
    fn(n, 1.0);
    return;
  }
  const double lp = std::log(p), lq = std::log1p(-p), ln1 = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double lc = ln1 - std::lgamma(kd + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0);
    fn(k, std::exp(lc + kd * lp + static_cast<double>(n - k) * lq));
  }
}

double smallest_positive(const std::vector<double>& p) {
  double p1 = 2.0;
  for (double v : p)
    if (v > 0.0) p1 = std::min(p1, v);
  return p1;
}

constexpr double kHalfTol = 1e-12;

}  // namespace

double bernstein_restated_tail(double n, double EY, double VarY, double delta) {
  if (!(EY > 0.0) || VarY < 0.0 || delta < 0.0) fail(ErrorKind::InvalidArgument, "bernstein: EY > 0, Var >= 0, delta >= 0");
  const double num = n * EY * EY * delta * delta / 2.0;
  const double den = VarY + EY * EY * delta / 2.0;
  if (num == 0.0) return 1.0;
  return std::exp(-num / den);
}

double exact_binom_zeta_diff(std::uint64_t n, double p, double zeta_exp) {
  if (p < 0.0 || p > 1.0) fail(ErrorKind::InvalidArgument, "p must lie in [0, 1]");
  double sum = 0.0;
  for_each_binom(n, p, [&](std::uint64_t k, double w) {
    const double kd = static_cast<double>(k);
    sum += w * (pow_zeta(kd + 1.0, zeta_exp) - pow_zeta(kd, zeta_exp));
  });
  return sum;
}

double binom_zeta_moment(std::uint64_t n, double p, double zeta_exp) {
  double sum = 0.0;
  for_each_binom(n, p, [&](std::uint64_t k, double w) { sum += w * pow_zeta(static_cast<double>(k), zeta_exp); });
  return sum;
}

double diff_bound(double n, double p, double zeta_exp) {
  const double np = n * p;
  if (!(np > 0.0)) fail(ErrorKind::ZeroMass, "diff_bound needs n p > 0");
  return std::exp(-3.0 * np / 28.0) + 2.0 * zeta_exp * std::pow(np, zeta_exp - 1.0);
}

std::vector<double> martingale_diffs(double p1, std::uint64_t n, double zeta_exp) {
  if (!(p1 > 0.0) || p1 > 1.0) fail(ErrorKind::InvalidArgument, "p1 must lie in (0, 1]");
  std::vector<double> c(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double z = static_cast<double>(n - i) * p1;
    c[i - 1] = z <= 0.0 ? 1.0 : std::min(1.0, std::exp(-3.0 * z / 28.0) + 2.0 * zeta_exp * std::pow(z, zeta_exp - 1.0));
  }
  return c;
}

double azuma_tail(const std::vector<double>& c, double t) {
  double s2 = 0.0;
  for (double v : c) s2 += v * v;
  if (t <= 0.0) return 1.0;
  if (s2 <= 0.0) return 0.0;
  return std::exp(-t * t / (2.0 * s2));
}

double sum_p_zeta(const std::vector<double>& p, double zeta_exp) {
  double s = 0.0;
  for (double v : p) s += pow_zeta(v, zeta_exp);
  return s;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::AzumaSimple: return "azuma_simple";
    case Regime::ReduxGtHalf: return "redux_gt_half";
    case Regime::ReduxHalf: return "redux_half";
    case Regime::ReduxLtHalf: return "redux_lt_half";
  }
  return "unknown";
}

double redux_threshold(double p1, double zeta_exp) { return 280.0 / 3.0 * std::log(1.0 / zeta_exp) / p1; }

Regime choose_regime(const std::vector<double>& p, std::uint64_t n, double zeta_exp) {
  const double p1 = smallest_positive(p);
  if (zeta_exp > 2.0 / 3.0 + kHalfTol || static_cast<double>(n) < redux_threshold(p1, zeta_exp)) return Regime::AzumaSimple;
  if (std::fabs(zeta_exp - 0.5) <= kHalfTol) return Regime::ReduxHalf;
  return zeta_exp > 0.5 ? Regime::ReduxGtHalf : Regime::ReduxLtHalf;
}

double tail_bound(Regime r, const std::vector<double>& p, std::uint64_t n, double z) {
  const double nd = static_cast<double>(n);
  const double sp = sum_p_zeta(p, z);
  const double p1 = smallest_positive(p);
  double expo = 0.0;
  switch (r) {
    case Regime::AzumaSimple:
      expo = 0.5 * std::pow(nd, 2.0 * z - 1.0) * sp * sp;
      break;
    case Regime::ReduxGtHalf:
      expo = p1 * std::pow(nd, 2.0 * z) * sp * sp / (13.0 + 8.0 / (2.0 * z - 1.0) * std::pow(nd, 2.0 * z - 1.0));
      break;
    case Regime::ReduxHalf: {
      const double den = 127.0 - std::log(1.0 / p1) + std::log(nd);
      if (den <= 0.0) return 1.0;
      expo = (2.0 / 9.0) * p1 * nd * sp * sp / den;
      break;
    }
    case Regime::ReduxLtHalf: {
      const double l = 280.0 / 3.0 * std::log(1.0 / z);
      const double den = 560.0 / 3.0 * std::log(1.0 / z) + 4.0 + 18.0 * z * z / (1.0 - 2.0 * z) * std::pow(l, 2.0 * z - 1.0);
      expo = p1 * std::pow(nd, 2.0 * z) * sp * sp / den;
      break;
    }
  }
  return std::clamp(std::exp(-expo), 0.0, 1.0);
}

void BinExperiment::validate() const {
  if (p.empty()) fail(ErrorKind::InvalidArgument, "bin experiment needs at least one bin");
  double s = 0.0;
  for (double v : p) {
    if (v < 0.0) fail(ErrorKind::InvalidArgument, "bin probabilities must be nonnegative");
    s += v;
  }
  if (std::fabs(s - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "bin probabilities must sum to 1");
  if (!(zeta_exp > 0.0 && zeta_exp < 1.0)) fail(ErrorKind::InvalidArgument, "zeta exponent must lie in (0, 1)");
  if (trials == 0) fail(ErrorKind::InvalidArgument, "trials must be positive");
}

std::vector<std::uint64_t> multinomial(std::uint64_t n, const std::vector<double>& p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> counts(p.size(), 0);
  std::uint64_t left = n;
  double mass = 1.0;
  for (std::size_t j = 0; j < p.size() && left > 0; ++j) {
    if (j + 1 == p.size() || mass <= 0.0) {
      counts[j] = left;
      left = 0;
      break;
    }
    const double q = std::clamp(p[j] / mass, 0.0, 1.0);
    std::binomial_distribution<std::uint64_t> bin(left, q);
    counts[j] = bin(rng.engine());
    left -= counts[j];
    mass -= p[j];
  }
  return counts;
}

double y_statistic(const std::vector<std::uint64_t>& counts, double zeta_exp) {
  double y = 0.0;
  for (auto c : counts) y += pow_zeta(static_cast<double>(c), zeta_exp);
  return y;
}

TailReport balls_bins_experiment(const BinExperiment& exp, unsigned threads) {
  exp.validate();
  std::vector<double> ys(exp.trials);
  parallel_for(exp.trials, threads, [&](std::size_t t) {
    ys[t] = y_statistic(multinomial(exp.n, exp.p, substream_seed(exp.seed, t)), exp.zeta_exp);
  });
  TailReport r;
  r.trials = exp.trials;
  r.expectation_bound = std::pow(static_cast<double>(exp.n), exp.zeta_exp) * sum_p_zeta(exp.p, exp.zeta_exp);
  r.threshold = 2.0 * r.expectation_bound;
  double sum = 0.0;
  for (double y : ys) {
    sum += y;
    if (y >= r.threshold) ++r.exceedances;
  }
  const double td = static_cast<double>(exp.trials);
  r.mean_y = sum / td;
  double ss = 0.0;
  for (double y : ys) ss += (y - r.mean_y) * (y - r.mean_y);
  r.sd_y = exp.trials > 1 ? std::sqrt(ss / (td - 1.0)) : 0.0;
  r.empirical_prob = static_cast<double>(r.exceedances) / td;
  r.reported_prob = r.exceedances == 0 ? std::min(1.0, 3.0 / td) : r.empirical_prob;
  r.regime = choose_regime(exp.p, exp.n, exp.zeta_exp);
  r.theoretical_bound = tail_bound(r.regime, exp.p, exp.n, exp.zeta_exp);
  return r;
}

WvhpFit wvhp_fit(const std::vector<std::pair<double, double>>& failure_probs) {
  if (failure_probs.size() < 4) fail(ErrorKind::InvalidArgument, "wvhp fit needs at least 4 points");
  std::vector<double> xs, ys;
  for (auto [n, prob] : failure_probs) {
    if (!(n > 0.0)) fail(ErrorKind::InvalidArgument, "wvhp fit needs positive n");
    if (prob < 0.0 || prob > 1.0) fail(ErrorKind::InvalidArgument, "probabilities must lie in [0, 1]");
    if (prob <= 0.0 || prob >= 1.0) continue;
    xs.push_back(std::log(n));
    ys.push_back(std::log(-std::log(prob)));
  }
  if (xs.size() < 2) fail(ErrorKind::AllZeroFailures, "failure probabilities below measurement floor");
  const double k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k, my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  WvhpFit fit;
  fit.used_points = xs.size();
  fit.c3 = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.c2 = std::exp(my - fit.c3 * mx);
  fit.r_squared = syy > 0.0 && sxx > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  fit.wvhp = fit.c3 > 0.05 && fit.c2 > 0.0;
  return fit;
}

}  // namespace dstsp::stats
