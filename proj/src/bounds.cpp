#include "sortition/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sortition/distortion.hpp"
#include "sortition/numeric.hpp"

namespace sortition {
namespace {

void check_k(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
}

long double log_binomial(std::uint64_t a, std::uint64_t b) {
  return std::lgammal(static_cast<long double>(a) + 1.0L) - std::lgammal(static_cast<long double>(b) + 1.0L) -
         std::lgammal(static_cast<long double>(a - b) + 1.0L);
}

}  // namespace

BoundCheck make_check(std::string name, double lhs, double rhs, std::map<std::string, double> params) {
  return {std::move(name), lhs, rhs, lhs <= rhs, std::move(params)};
}

double fair_upper_bound(std::size_t n, std::size_t k) {
  check_k(n, k);
  return 3.0 - 2.0 * static_cast<double>(k) / static_cast<double>(n);
}

double det_lower_value(std::size_t n, std::size_t k, double eps) {
  check_k(n, k);
  const auto nd = static_cast<double>(n), kd = static_cast<double>(k);
  return 5.0 - 12.0 * kd / (nd + 2.0 * kd) - eps;
}

double fair_lower_value(std::size_t n, std::size_t k, double eps) {
  return fair_upper_bound(n, k) - eps;
}

double serfling_tail(double t, std::size_t k, double alpha, double beta) {
  if (!(beta > alpha)) throw std::invalid_argument("serfling_tail: need beta > alpha");
  if (k < 1) throw std::invalid_argument("serfling_tail: need k >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("serfling_tail: need t > 0");
  const double width = beta - alpha;
  return std::exp(-2.0 * t * t / (static_cast<double>(k) * width * width));
}

double hypergeom_pmf(std::uint64_t population, std::uint64_t successes, std::uint64_t draws, std::uint64_t l) {
  if (successes > population || draws > population || l > draws) {
    throw std::invalid_argument("hypergeom_pmf: need l <= draws <= N and K <= N");
  }
  if (l > successes || draws - l > population - successes) return 0.0;

  const std::uint64_t total = binomial_saturating(population, draws);
  if (total != kBinomialOverflow) {
    // Numerator <= C(N, draws), so it fits as well.
    const unsigned __int128 num = static_cast<unsigned __int128>(binomial_saturating(successes, l)) *
                                  binomial_saturating(population - successes, draws - l);
    return static_cast<double>(static_cast<std::uint64_t>(num)) / static_cast<double>(total);
  }
  const long double log_p = log_binomial(successes, l) + log_binomial(population - successes, draws - l) -
                            log_binomial(population, draws);
  return static_cast<double>(std::exp(log_p));
}

double anti_concentration_lower(std::size_t k, std::size_t l) {
  if (k < 10) throw std::invalid_argument("anti_concentration_lower: need k >= 10");
  if (2 * l < k || 3 * l > 2 * k) throw std::invalid_argument("anti_concentration_lower: need k/2 <= l <= 2k/3");
  const auto kd = static_cast<double>(k), ld = static_cast<double>(l);
  return std::pow(kd / ld - 1.0, 2.0 * ld - kd) / std::sqrt(kd);
}

std::uint64_t uniform_panel_size(double eps, std::size_t m) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("uniform_panel_size: need eps in (0, 1]");
  if (m < 1) throw std::invalid_argument("uniform_panel_size: need m >= 1");
  const auto md = static_cast<double>(m);
  const double concentration = 25.0 / (2.0 * eps * eps) * std::log(144.0 * md / eps);
  const double tail = 3.0 + 3.0 * std::log2(72.0 * md / eps);
  const double need = std::max(concentration, tail);
  return 3 * static_cast<std::uint64_t>(std::ceil(need / 3.0));
}

BoundCheck lemma_19_21_check(std::size_t n, std::size_t k) {
  if (k < 3) throw std::invalid_argument("lemma_19_21_check: need k >= 3");
  if (n < k) throw std::invalid_argument("lemma_19_21_check: need n >= k");
  const std::size_t two_thirds = (2 * k + 2) / 3;  // ceil(2k/3)
  const std::size_t group = (n + k - 1) / k;       // ceil(n/k)
  const auto nd = static_cast<double>(n);
  // Both terms are correctly rounded rationals, so comparing them with the
  // correctly rounded 19/21 agrees with the exact comparison.
  const double first = static_cast<double>(two_thirds * group - 1) / nd;
  const double second = static_cast<double>(n - k + two_thirds - 1) / nd;
  return make_check("lemma-19-21", std::min(first, second), 19.0 / 21.0,
                    {{"n", nd}, {"k", static_cast<double>(k)}});
}

std::vector<BoundCheck> case2_diagnostics(const Instance& instance, std::size_t alt, const Panel& panel,
                                          double threshold) {
  const Optimum opt = optimal_alternative(instance);
  if (alt == opt.alternative) throw std::invalid_argument("case2_diagnostics: alt is the optimum");
  const double sc_alt = social_cost(instance, alt);
  if (!(sc_alt > opt.cost)) throw std::invalid_argument("case2_diagnostics: need SC(alt) > SC(c(N))");

  const double gap = sc_alt - opt.cost;
  const double far = instance.alt_distance(alt, opt.alternative);
  std::size_t ell = 0;
  std::size_t ell_on_panel = 0;
  for (std::size_t i = 0; i < instance.n(); ++i) {
    if (instance.cost(i, opt.alternative) > far / 4.0) {
      ++ell;
      if (panel.contains(i)) ++ell_on_panel;
    }
  }
  const auto n = static_cast<double>(instance.n());
  const double in_case2 = gap >= threshold * opt.cost ? 1.0 : 0.0;
  std::map<std::string, double> params = {{"alt", static_cast<double>(alt)},
                                          {"optimum", static_cast<double>(opt.alternative)},
                                          {"D", far},
                                          {"case2", in_case2}};

  std::vector<BoundCheck> out;
  out.push_back(make_check("small-ell", static_cast<double>(ell), 4.0 * n * opt.cost / gap, params));

  auto winner_params = params;
  const bool wins = !panel.empty() && best_alternative(instance, panel) == alt;
  winner_params["panel_picks_alt"] = wins ? 1.0 : 0.0;
  if (wins) {
    // c(P) = alt requires |L ∩ P| >= k/3, i.e. k/3 <= |L ∩ P|.
    out.push_back(make_check("bad-candidate-wins", static_cast<double>(panel.size()) / 3.0,
                             static_cast<double>(ell_on_panel), winner_params));
  } else {
    out.push_back(make_check("bad-candidate-wins", 0.0, 0.0, winner_params));
  }
  return out;
}

ProportionEstimate prob_c0_estimate(std::size_t n, std::size_t m, std::size_t k, double eps,
                                    const Panel& panel, std::size_t trials, std::uint64_t seed) {
  if (panel.size() != k) throw std::invalid_argument("prob_c0_estimate: panel must have size k");
  if (k < 1 || panel.members().back() >= n) throw std::invalid_argument("prob_c0_estimate: panel out of range");
  if (trials == 0) throw std::invalid_argument("prob_c0_estimate: trials must be at least 1");

  std::vector<char> hit(trials, 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t st = 0; st < static_cast<std::ptrdiff_t>(trials); ++st) {
    const auto t = static_cast<std::size_t>(st);
    Rng rng = derived_rng(seed, {t});
    const Instance inst = gen_random_family_sample(n, m, eps, rng);
    hit[t] = best_alternative(inst, panel) == 0 ? 1 : 0;
  }
  std::size_t hits = 0;
  for (char h : hit) hits += static_cast<std::size_t>(h);

  ProportionEstimate est;
  est.trials = trials;
  est.estimate = static_cast<double>(hits) / static_cast<double>(trials);
  const double half = 1.96 * std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  est.ci_low = std::max(0.0, est.estimate - half);
  est.ci_high = std::min(1.0, est.estimate + half);
  return est;
}

}  // namespace sortition
