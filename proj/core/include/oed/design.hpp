#pragma once

// Expected and actual information gain over a finite model space, experiment
// ranking, and sample-size curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "oed/distribution.hpp"
#include "oed/keys.hpp"
#include "oed/model.hpp"

namespace oed {

/// Which distribution over hypothetical results weights the KL terms.
enum class OutcomePrior {
  Uniform,     ///< p(y; x) proportional to 1 over the declared response space.
  Predictive,  ///< p(y; x) = sum_m P(m) p_m(y | x).
};

std::string_view outcomePriorName(OutcomePrior prior) noexcept;
std::optional<OutcomePrior> parseOutcomePrior(std::string_view name) noexcept;

template <class Y>
struct OutcomeTerm {
  Y response;
  double probability = 0.0;  ///< p(y; x) under the chosen outcome prior.
  double kl = 0.0;           ///< D(P(M | x, y) || P(M)).
  bool impossible = false;   ///< every model gives y zero likelihood.
};

template <class X, class Y>
struct DesignReport {
  X experiment;
  double eig = 0.0;
  /// Empty when the report came from the factorized fast path.
  std::vector<OutcomeTerm<Y>> perOutcome;
  int rank = 0;
};

/// Normalized posterior over model names given per-model likelihoods of one
/// observation. Throws AllZeroLikelihood if they are all zero.
FiniteDistribution<std::string> posteriorFromLikelihoods(const FiniteDistribution<std::string>& prior,
                                                         std::span<const std::string> names,
                                                         std::span<const double> likelihoods);

template <class X, class Y>
std::vector<double> likelihoodsOf(const ModelSpace<X, Y>& space, const X& x, const Y& y) {
  std::vector<double> out;
  out.reserve(space.size());
  for (const auto& m : space.models()) out.push_back(m.probabilityOf(x, y));
  return out;
}

template <class X, class Y>
std::vector<std::string> modelNames(const ModelSpace<X, Y>& space) {
  std::vector<std::string> out;
  for (const auto& m : space.models()) out.push_back(m.name);
  return out;
}

/// P(M | x, y).
template <class X, class Y>
FiniteDistribution<std::string> modelPosterior(const ModelSpace<X, Y>& space, const X& x, const Y& y) {
  const auto names = modelNames(space);
  const auto lik = likelihoodsOf(space, x, y);
  return posteriorFromLikelihoods(space.prior(), names, lik);
}

/// D(P(M | x, y_observed) || P(M)) in nats.
template <class X, class Y>
double actualInformationGain(const ModelSpace<X, Y>& space, const X& x, const Y& yObserved) {
  return klDivergence(modelPosterior(space, x, yObserved), space.prior());
}

/**
 * Expected information gain of experiment x, summed over the declared response
 * space in its sorted order. Responses that no model can produce contribute 0
 * and are flagged; under the uniform outcome prior they still count toward the
 * normalizer.
 */
template <class X, class Y>
DesignReport<X, Y> expectedInformationGain(const ModelSpace<X, Y>& space, const X& x, OutcomePrior outcomePrior,
                                           std::vector<Y> responseSpace) {
  if (responseSpace.empty()) throw OedError(ErrorCode::EmptyResponseSpace, "no responses declared");
  std::sort(responseSpace.begin(), responseSpace.end());
  responseSpace.erase(std::unique(responseSpace.begin(), responseSpace.end()), responseSpace.end());

  const auto names = modelNames(space);
  std::vector<FiniteDistribution<Y>> predictions;
  predictions.reserve(space.size());
  for (const auto& m : space.models()) predictions.push_back(m.predict(x));

  // Each prediction must live inside the declared response space.
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    auto r = responseSpace.begin();
    for (const auto& [y, p] : predictions[i]) {
      r = std::lower_bound(r, responseSpace.end(), y);
      if (r == responseSpace.end() || !(*r == y)) {
        throw OedError(ErrorCode::ResponseOutsideSpace,
                       "model '" + names[i] + "' predicts a response outside the declared space");
      }
    }
  }

  DesignReport<X, Y> report{x, 0.0, {}, 0};
  report.perOutcome.reserve(responseSpace.size());
  const double uniformMass = 1.0 / static_cast<double>(responseSpace.size());
  std::vector<double> lik(space.size());
  std::vector<typename std::vector<std::pair<Y, double>>::const_iterator> cursors;
  for (const auto& d : predictions) cursors.push_back(d.entries().begin());

  for (auto& y : responseSpace) {
    double marginal = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      auto& it = cursors[i];
      const auto end = predictions[i].entries().end();
      while (it != end && it->first < y) ++it;
      lik[i] = (it != end && it->first == y) ? it->second : 0.0;
      marginal += space.priorOf(i) * lik[i];
    }
    OutcomeTerm<Y> term{std::move(y), 0.0, 0.0, false};
    term.probability = outcomePrior == OutcomePrior::Uniform ? uniformMass : marginal;
    if (marginal <= 0.0) {
      term.impossible = true;
    } else {
      term.kl = klDivergence(posteriorFromLikelihoods(space.prior(), names, lik), space.prior());
    }
    report.eig += term.probability * term.kl;
    report.perOutcome.push_back(std::move(term));
  }
  return report;
}

/// Evaluates fn(i) for i in [0, count) across worker threads. Each index is
/// computed by exactly one worker, so results match a sequential run bit for bit.
template <class R>
std::vector<R> evaluateParallel(std::size_t count, const std::function<R(std::size_t)>& fn, unsigned threads = 0) {
  std::vector<std::optional<R>> slots(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) slots[i].emplace(fn(i));
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i = t; i < count; i += threads) slots[i].emplace(fn(i));
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<R> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// EIG values closer than this are ranked as ties and ordered by experiment key.
inline constexpr double kRankTieTolerance = 1e-12;

/// Sorts reports by EIG descending (ties by experiment key) and assigns ranks 1..N.
template <class X, class Y>
void assignRanks(std::vector<DesignReport<X, Y>>& reports) {
  struct Key {
    std::int64_t eig;
    std::string experiment;
  };
  std::vector<std::pair<Key, std::size_t>> keys;
  keys.reserve(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    keys.push_back({{std::llround(reports[i].eig / kRankTieTolerance), toKey(reports[i].experiment)}, i});
  }
  std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    if (a.first.eig != b.first.eig) return a.first.eig > b.first.eig;
    return a.first.experiment < b.first.experiment;
  });
  std::vector<DesignReport<X, Y>> sorted;
  sorted.reserve(reports.size());
  for (std::size_t r = 0; r < keys.size(); ++r) {
    sorted.push_back(std::move(reports[keys[r].second]));
    sorted.back().rank = static_cast<int>(r) + 1;
  }
  reports = std::move(sorted);
}

/// Scores every experiment exhaustively and returns reports ordered by rank;
/// the first report holds the optimal experiment.
template <class X, class Y>
std::vector<DesignReport<X, Y>> rankExperiments(const ModelSpace<X, Y>& space, std::span<const X> xs,
                                                OutcomePrior outcomePrior,
                                                const std::function<std::vector<Y>(const X&)>& responseSpaceFor,
                                                unsigned threads = 0) {
  std::function<DesignReport<X, Y>(std::size_t)> eval = [&](std::size_t i) {
    return expectedInformationGain(space, xs[i], outcomePrior, responseSpaceFor(xs[i]));
  };
  auto reports = evaluateParallel(xs.size(), eval, threads);
  assignRanks(reports);
  return reports;
}

/// Group-lifts every model in a single-participant space, keeping the prior.
template <class X, class Y>
ModelSpace<GroupExperiment<X>, int> groupifySpace(const ModelSpace<X, Y>& single, const Y& success) {
  std::vector<Model<GroupExperiment<X>, int>> lifted;
  for (const auto& m : single.models()) lifted.push_back(groupify(m, success));
  return ModelSpace<GroupExperiment<X>, int>(std::move(lifted), single.priorWeights());
}

/// Response space {0, ..., n} of a group-lifted binary model.
std::vector<int> countResponseSpace(int n);

/// EIG of one per-participant experiment as the number of participants varies.
template <class X, class Y>
std::vector<std::pair<int, double>> eigCurve(const ModelSpace<X, Y>& single, const X& inner, const Y& success,
                                             std::span<const int> nRange, OutcomePrior outcomePrior) {
  const auto grouped = groupifySpace(single, success);
  std::vector<std::pair<int, double>> out;
  out.reserve(nRange.size());
  for (int n : nRange) {
    const GroupExperiment<X> g{n, inner};
    out.emplace_back(n, expectedInformationGain(grouped, g, outcomePrior, countResponseSpace(n)).eig);
  }
  return out;
}

/// Largest LLR support the fast path will carry before giving up.
inline constexpr std::size_t kMaxLlrSupport = std::size_t{1} << 24;

/**
 * Exact EIG for two models whose item responses are conditionally
 * independent. Each item's response is Binomial(n, p) under each model; the
 * posterior depends on a response vector only through its summed
 * log-likelihood ratio, so the per-item LLR distributions are convolved and the
 * KL integrand is evaluated once per distinct LLR value (merged at 1e-9).
 */
double eigFactorizedTwoModel(std::span<const double> pPerItemM1, std::span<const double> pPerItemM2,
                             const FiniteDistribution<std::string>& prior, OutcomePrior outcomePrior, int n = 1);

/// Overload taking the two prior weights directly, in model order.
double eigFactorizedTwoModel(std::span<const double> pPerItemM1, std::span<const double> pPerItemM2,
                             double priorM1, double priorM2, OutcomePrior outcomePrior, int n = 1);

/// Draws a report index with probability proportional to exp(eig / temperature).
template <class X, class Y>
std::size_t softmaxSample(std::span<const DesignReport<X, Y>> reports, double temperature, std::mt19937_64& rng) {
  if (reports.empty() || !(temperature > 0.0)) {
    throw OedError(ErrorCode::InvalidArgument, "softmax sampling needs reports and a positive temperature");
  }
  double best = reports.front().eig;
  for (const auto& r : reports) best = std::max(best, r.eig);
  std::vector<double> w;
  for (const auto& r : reports) w.push_back(std::exp((r.eig - best) / temperature));
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  return pick(rng);
}

template <class Y>
void to_json(nlohmann::json& j, const OutcomeTerm<Y>& t) {
  j = nlohmann::json{{"response", t.response}, {"probability", t.probability}, {"kl", t.kl}};
  if (t.impossible) j["impossible"] = true;
}

template <class X, class Y>
void to_json(nlohmann::json& j, const DesignReport<X, Y>& r) {
  j = nlohmann::json{{"rank", r.rank}, {"experiment", toKey(r.experiment)}, {"eig_nats", r.eig}};
  if (!r.perOutcome.empty()) j["per_outcome"] = r.perOutcome;
}

}  // namespace oed
