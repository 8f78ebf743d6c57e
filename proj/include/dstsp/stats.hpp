#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dstsp::stats {

double bernstein_restated_tail(double n, double EY, double VarY, double delta);

// E[(W+1)^z] - E[W^z] for W ~ Binomial(n, p), summed exactly in log space.
double exact_binom_zeta_diff(std::uint64_t n, double p, double zeta_exp);
// E[W^z] for W ~ Binomial(n, p).
double binom_zeta_moment(std::uint64_t n, double p, double zeta_exp);
double diff_bound(double n, double p, double zeta_exp);

// c_1..c_n for the refined bounded-difference martingale.
std::vector<double> martingale_diffs(double p1, std::uint64_t n, double zeta_exp);
double azuma_tail(const std::vector<double>& c, double t);

double sum_p_zeta(const std::vector<double>& p, double zeta_exp);

enum class Regime { AzumaSimple, ReduxGtHalf, ReduxHalf, ReduxLtHalf };
std::string to_string(Regime r);

double redux_threshold(double p1, double zeta_exp);
Regime choose_regime(const std::vector<double>& p, std::uint64_t n, double zeta_exp);
// Upper bound on P[Y >= 2 n^z sum p^z] in the given regime; clamped to [0, 1].
double tail_bound(Regime r, const std::vector<double>& p, std::uint64_t n, double zeta_exp);

struct BinExperiment {
  std::vector<double> p;
  std::uint64_t n = 0;
  double zeta_exp = 0.5;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TailReport {
  double empirical_prob = 0.0;
  double theoretical_bound = 1.0;
  Regime regime = Regime::AzumaSimple;
  std::uint64_t exceedances = 0;
  std::uint64_t trials = 0;
  // 3/trials when nothing was observed, otherwise the empirical frequency.
  double reported_prob = 0.0;
  double mean_y = 0.0;
  double sd_y = 0.0;
  double expectation_bound = 0.0;  // n^z sum p^z
  double threshold = 0.0;          // 2 n^z sum p^z
};

// Multinomial counts via sequential binomials.
std::vector<std::uint64_t> multinomial(std::uint64_t n, const std::vector<double>& p, std::uint64_t seed);
double y_statistic(const std::vector<std::uint64_t>& counts, double zeta_exp);

TailReport balls_bins_experiment(const BinExperiment& exp, unsigned threads = 1);

struct WvhpFit {
  double c1 = 1.0, c2 = 0.0, c3 = 0.0;
  double r_squared = 0.0;
  std::size_t used_points = 0;
  bool wvhp = false;
};

// Fits prob = c1 exp(-c2 n^c3) with c1 = 1 through log(-log prob) = log c2 + c3 log n.
// Zero probabilities are below the measurement floor and are skipped.
WvhpFit wvhp_fit(const std::vector<std::pair<double, double>>& failure_probs);

}  // namespace dstsp::stats
