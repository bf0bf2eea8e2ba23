#pragma once

// Test-only reference computations. None of these call into the library's
// probability code; they are deliberately naive so they can check it.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oed::testing {

/// C(n, k) p^k (1-p)^(n-k) via Pascal's triangle in long double.
inline double pascalBinomial(int n, double p, int k) {
  std::vector<long double> row{1.0L};
  for (int i = 0; i < n; ++i) {
    std::vector<long double> next(row.size() + 1, 0.0L);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j];
      next[j + 1] += row[j];
    }
    row.swap(next);
  }
  long double v = row[static_cast<std::size_t>(k)];
  for (int i = 0; i < k; ++i) v *= p;
  for (int i = 0; i < n - k; ++i) v *= (1.0L - p);
  return static_cast<double>(v);
}

/// Trapezoid rule for the Beta posterior predictive
///   int w * w^a (1-w)^b dw / int w^a (1-w)^b dw
/// under a uniform prior on w.
inline double quadraturePredictive(int successes, int failures, int points = 100001) {
  double num = 0.0;
  double den = 0.0;
  const double h = 1.0 / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double w = i * h;
    const double f = std::pow(w, successes) * std::pow(1.0 - w, failures);
    const double weight = (i == 0 || i == points - 1) ? 0.5 : 1.0;
    num += weight * w * f;
    den += weight * f;
  }
  return num / den;
}

/// likelihood[m][y] for models m and an enumerated response space.
using LikelihoodTable = std::vector<std::vector<double>>;

/// sum_y p(y) KL(P(M|y) || P(M)) by plain loops.
inline double bruteForceEig(const LikelihoodTable& lik, const std::vector<double>& prior, bool uniformOutcomes) {
  const std::size_t responses = lik.front().size();
  double eig = 0.0;
  for (std::size_t y = 0; y < responses; ++y) {
    double marginal = 0.0;
    for (std::size_t m = 0; m < lik.size(); ++m) marginal += prior[m] * lik[m][y];
    if (marginal <= 0.0) continue;
    double kl = 0.0;
    for (std::size_t m = 0; m < lik.size(); ++m) {
      const double post = prior[m] * lik[m][y] / marginal;
      if (post > 0.0) kl += post * std::log(post / prior[m]);
    }
    eig += (uniformOutcomes ? 1.0 / static_cast<double>(responses) : marginal) * kl;
  }
  return eig;
}

/// I(M; Y) = sum_{m,y} P(m) p_m(y) ln(p_m(y) / p(y)).
inline double mutualInformation(const LikelihoodTable& lik, const std::vector<double>& prior) {
  const std::size_t responses = lik.front().size();
  double mi = 0.0;
  for (std::size_t y = 0; y < responses; ++y) {
    double marginal = 0.0;
    for (std::size_t m = 0; m < lik.size(); ++m) marginal += prior[m] * lik[m][y];
    for (std::size_t m = 0; m < lik.size(); ++m) {
      if (lik[m][y] > 0.0) mi += prior[m] * lik[m][y] * std::log(lik[m][y] / marginal);
    }
  }
  return mi;
}

/// Two models with independent binary items: enumerate all 2^K label vectors.
inline double bruteForceItemEig(const std::vector<double>& p1, const std::vector<double>& p2, double prior1,
                                bool uniformOutcomes) {
  const std::size_t k = p1.size();
  LikelihoodTable lik(2, std::vector<double>(std::size_t{1} << k));
  for (std::size_t y = 0; y < (std::size_t{1} << k); ++y) {
    double a = 1.0;
    double b = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      const bool success = (y >> i) & 1u;
      a *= success ? p1[i] : 1.0 - p1[i];
      b *= success ? p2[i] : 1.0 - p2[i];
    }
    lik[0][y] = a;
    lik[1][y] = b;
  }
  return bruteForceEig(lik, {prior1, 1.0 - prior1}, uniformOutcomes);
}

/// Random probability vector with `size` entries, some possibly zero.
inline std::vector<double> randomSimplex(std::mt19937_64& rng, std::size_t size, bool allowZeros = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(size);
  double total = 0.0;
  for (auto& x : v) {
    x = u(rng);
    if (allowZeros && u(rng) < 0.2) x = 0.0;
    total += x;
  }
  if (total == 0.0) {
    v[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : v) x /= total;
  return v;
}

}  // namespace oed::testing
