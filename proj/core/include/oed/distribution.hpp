#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "oed/error.hpp"
#include "oed/keys.hpp"

namespace oed {

/// Tolerance used when comparing two distributions entry by entry.
inline constexpr double kDistributionTolerance = 1e-9;

/**
 * A probability table over a finite set of values.
 *
 * Entries are kept sorted by value and merged on equality, so two equal
 * distributions have identical entry lists and serialize identically. Only
 * values with strictly positive probability are stored; probability() returns
 * 0 for anything else.
 */
template <class T>
class FiniteDistribution {
 public:
  using value_type = T;
  using Entry = std::pair<T, double>;

  FiniteDistribution() = default;

  /// Normalizes nonnegative weights. Throws AllZeroWeights when nothing has mass.
  static FiniteDistribution normalize(std::vector<Entry> weights) {
    for (const auto& [value, w] : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw OedError(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
      }
    }
    std::stable_sort(weights.begin(), weights.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    FiniteDistribution out;
    out.entries_.reserve(weights.size());
    for (auto& e : weights) {
      if (!out.entries_.empty() && out.entries_.back().first == e.first) {
        out.entries_.back().second += e.second;
      } else {
        out.entries_.push_back(std::move(e));
      }
    }
    std::erase_if(out.entries_, [](const Entry& e) { return e.second == 0.0; });
    double total = 0.0;
    for (const auto& e : out.entries_) total += e.second;
    if (out.entries_.empty() || total <= 0.0) {
      throw OedError(ErrorCode::AllZeroWeights, "every weight is zero");
    }
    for (auto& e : out.entries_) e.second /= total;
    return out;
  }

  /// Equal mass on each distinct value.
  static FiniteDistribution uniform(std::vector<T> values) {
    std::vector<Entry> w;
    w.reserve(values.size());
    for (auto& v : values) w.emplace_back(std::move(v), 1.0);
    return normalize(std::move(w));
  }

  static FiniteDistribution pointMass(T value) { return normalize({{std::move(value), 1.0}}); }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  std::vector<T> support() const {
    std::vector<T> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

  double probability(const T& value) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), value,
                               [](const Entry& e, const T& v) { return e.first < v; });
    if (it == entries_.end() || !(it->first == value)) return 0.0;
    return it->second;
  }

  /// Max absolute probability difference over the union of supports is within tol.
  bool approxEqual(const FiniteDistribution& other, double tol = kDistributionTolerance) const {
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
        if (a->second > tol) return false;
        ++a;
      } else if (a == entries_.end() || b->first < a->first) {
        if (b->second > tol) return false;
        ++b;
      } else {
        if (std::abs(a->second - b->second) > tol) return false;
        ++a;
        ++b;
      }
    }
    return true;
  }

  friend bool operator==(const FiniteDistribution&, const FiniteDistribution&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Kullback-Leibler divergence D(p || q) in nats. Throws SupportMismatch when
/// p puts mass where q has none.
template <class T>
double klDivergence(const FiniteDistribution<T>& p, const FiniteDistribution<T>& q) {
  double total = 0.0;
  auto qi = q.begin();
  for (const auto& [value, pv] : p) {
    while (qi != q.end() && qi->first < value) ++qi;
    if (qi == q.end() || !(qi->first == value)) {
      throw OedError(ErrorCode::SupportMismatch, "p has mass outside the support of q");
    }
    total += pv * std::log(pv / qi->second);
  }
  // Rounding can push an identical pair a hair below zero.
  return std::max(total, 0.0);
}

/// Mean of a distribution over real numbers.
double expectation(const FiniteDistribution<double>& d);

/// Binomial(n, p) mass at k, evaluated through log-gamma.
double binomialPmf(int n, double p, int k);

struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  BetaParams() = default;
  BetaParams(double a, double b);
};

/// Posterior-predictive probability of one more success after observing the
/// given counts under a Beta prior and Bernoulli likelihood.
double betaPosteriorPredictive(const BetaParams& prior, int successes, int failures);

template <class T>
void to_json(nlohmann::json& j, const FiniteDistribution<T>& d) {
  j = nlohmann::json::object();
  j["support"] = nlohmann::json::array();
  j["probs"] = nlohmann::json::array();
  for (const auto& [value, p] : d) {
    j["support"].push_back(value);
    j["probs"].push_back(p);
  }
}

template <class T>
void from_json(const nlohmann::json& j, FiniteDistribution<T>& d) {
  const auto& support = j.at("support");
  const auto& probs = j.at("probs");
  if (support.size() != probs.size()) {
    throw OedError(ErrorCode::LengthMismatch, "support and probs differ in length");
  }
  std::vector<std::pair<T, double>> w;
  for (std::size_t i = 0; i < support.size(); ++i) {
    w.emplace_back(support[i].template get<T>(), probs[i].template get<double>());
  }
  d = FiniteDistribution<T>::normalize(std::move(w));
}

}  // namespace oed
