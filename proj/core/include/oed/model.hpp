#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "oed/distribution.hpp"
#include "oed/keys.hpp"

namespace oed {

/// A candidate theory: a conditional distribution over responses for each experiment.
template <class X, class Y>
struct Model {
  std::string name;
  std::function<FiniteDistribution<Y>(const X&)> predict;
  /// Optional shortcut for p(y | x) that avoids materializing predict(x).
  std::function<double(const X&, const Y&)> likelihood;

  double probabilityOf(const X& x, const Y& y) const {
    return likelihood ? likelihood(x, y) : predict(x).probability(y);
  }
};

/**
 * Candidate models together with a prior over their names.
 *
 * The prior is stored as a FiniteDistribution keyed by name, so it is sorted by
 * name rather than by model order; priorOf() looks weights up by index.
 */
template <class X, class Y>
class ModelSpace {
 public:
  ModelSpace(std::vector<Model<X, Y>> models, std::optional<std::vector<double>> weights = std::nullopt)
      : models_(std::move(models)) {
    if (models_.empty()) throw OedError(ErrorCode::InvalidArgument, "model space is empty");
    std::vector<std::pair<std::string, double>> w;
    for (std::size_t i = 0; i < models_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (models_[i].name == models_[j].name) {
          throw OedError(ErrorCode::InvalidArgument, "duplicate model name '" + models_[i].name + "'");
        }
      }
      double wi = 1.0;
      if (weights) {
        if (weights->size() != models_.size()) {
          throw OedError(ErrorCode::LengthMismatch, "prior weights must match the number of models");
        }
        wi = (*weights)[i];
        if (!(wi > 0.0)) throw OedError(ErrorCode::InvalidArgument, "prior weights must be positive");
      }
      w.emplace_back(models_[i].name, wi);
    }
    prior_ = FiniteDistribution<std::string>::normalize(std::move(w));
    priorByIndex_.reserve(models_.size());
    for (const auto& m : models_) priorByIndex_.push_back(prior_.probability(m.name));
  }

  const std::vector<Model<X, Y>>& models() const noexcept { return models_; }
  const FiniteDistribution<std::string>& prior() const noexcept { return prior_; }
  double priorOf(std::size_t i) const { return priorByIndex_.at(i); }
  std::size_t size() const noexcept { return models_.size(); }

  /// Prior weights in model order (unnormalized input is not retained).
  const std::vector<double>& priorWeights() const noexcept { return priorByIndex_; }

 private:
  std::vector<Model<X, Y>> models_;
  FiniteDistribution<std::string> prior_;
  std::vector<double> priorByIndex_;
};

/// n participants each run the same per-participant experiment.
template <class X>
struct GroupExperiment {
  int n = 1;
  X inner;

  friend auto operator<=>(const GroupExperiment&, const GroupExperiment&) = default;
};

template <class X>
std::string toKey(const GroupExperiment<X>& g) {
  return toKey(g.inner) + "@n=" + std::to_string(g.n);
}

template <class X>
void to_json(nlohmann::json& j, const GroupExperiment<X>& g) {
  j = nlohmann::json{{"n", g.n}, {"inner", g.inner}};
}

/**
 * Lifts a single-participant model with a binary response to n i.i.d.
 * participants. The lifted response is the number of `success` responses,
 * distributed Binomial(n, p(success)).
 */
template <class X, class Y>
Model<GroupExperiment<X>, int> groupify(Model<X, Y> single, Y success) {
  auto successProbability = [single, success](const X& inner) {
    const auto d = single.predict(inner);
    int nonSuccess = 0;
    for (const auto& [value, p] : d) {
      if (!(value == success)) ++nonSuccess;
    }
    if (nonSuccess > 1) {
      throw OedError(ErrorCode::NonBinaryResponse, "model '" + single.name + "' has more than two responses");
    }
    return d.probability(success);
  };
  Model<GroupExperiment<X>, int> lifted;
  lifted.name = single.name;
  lifted.predict = [successProbability](const GroupExperiment<X>& g) {
    if (g.n < 1) throw OedError(ErrorCode::InvalidArgument, "group size must be at least 1");
    const double p = successProbability(g.inner);
    std::vector<std::pair<int, double>> w;
    w.reserve(static_cast<std::size_t>(g.n) + 1);
    for (int k = 0; k <= g.n; ++k) w.emplace_back(k, binomialPmf(g.n, p, k));
    return FiniteDistribution<int>::normalize(std::move(w));
  };
  lifted.likelihood = [successProbability](const GroupExperiment<X>& g, const int& k) {
    if (k < 0 || k > g.n) return 0.0;
    return binomialPmf(g.n, successProbability(g.inner), k);
  };
  return lifted;
}

/// Per-item success probabilities with a mixing weight.
struct ItemMixtureComponent {
  double weight = 1.0;
  std::vector<double> items;
};

/**
 * A model whose response is a vector of binary item labels. With a single
 * mixture component the labels are conditionally independent; several
 * components describe a parameter-marginalized model whose labels are not.
 */
template <class X>
struct ItemwiseModel {
  std::string name;
  std::function<std::vector<ItemMixtureComponent>(const X&)> components;

  bool factorized(const X& x) const { return components(x).size() == 1; }
};

/// Joint probabilities of all (n+1)^K count vectors, indexed with item 0 as the
/// most significant digit. Throws SupportTooLarge past `maxSupport` entries.
std::vector<double> enumerateCountVectorProbabilities(const std::vector<ItemMixtureComponent>& components, int n,
                                                      std::size_t maxSupport = std::size_t{1} << 22);

/// Decodes an index from enumerateCountVectorProbabilities into counts.
CountVector decodeCountVector(std::size_t index, std::size_t items, int n);

/// Mixture over components of the product of per-item Binomial(n, p) masses.
double countVectorLikelihood(const std::vector<ItemMixtureComponent>& components, int n, const CountVector& counts);

/// Every count vector over `items` items with counts in 0..n, in lexicographic order.
std::vector<CountVector> countVectorSpace(std::size_t items, int n, std::size_t maxSupport = std::size_t{1} << 22);

/// The single-participant label-vector model implied by an itemwise model.
template <class X>
Model<X, CountVector> toResponseModel(ItemwiseModel<X> m) {
  Model<X, CountVector> out;
  out.name = m.name;
  out.predict = [m](const X& x) {
    const auto comps = m.components(x);
    const std::size_t items = comps.empty() ? 0 : comps.front().items.size();
    const auto probs = enumerateCountVectorProbabilities(comps, 1);
    std::vector<std::pair<CountVector, double>> w;
    w.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) w.emplace_back(decodeCountVector(i, items, 1), probs[i]);
    return FiniteDistribution<CountVector>::normalize(std::move(w));
  };
  out.likelihood = [m](const X& x, const CountVector& y) { return countVectorLikelihood(m.components(x), 1, y); };
  return out;
}

/**
 * Lifts an itemwise model to n i.i.d. participants. The response is the vector
 * of per-item success counts, independent Binomial(n, p_k) across items.
 * Throws NonFactorizableResponse for mixture models.
 */
template <class X>
Model<GroupExperiment<X>, CountVector> groupifyVector(ItemwiseModel<X> single) {
  auto factorizedItems = [single](const X& inner) {
    auto comps = single.components(inner);
    if (comps.size() != 1) {
      throw OedError(ErrorCode::NonFactorizableResponse,
                     "model '" + single.name + "' does not have independent item responses");
    }
    return comps;
  };
  Model<GroupExperiment<X>, CountVector> lifted;
  lifted.name = single.name;
  lifted.predict = [factorizedItems](const GroupExperiment<X>& g) {
    if (g.n < 1) throw OedError(ErrorCode::InvalidArgument, "group size must be at least 1");
    const auto comps = factorizedItems(g.inner);
    const std::size_t items = comps.front().items.size();
    const auto probs = enumerateCountVectorProbabilities(comps, g.n);
    std::vector<std::pair<CountVector, double>> w;
    w.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) w.emplace_back(decodeCountVector(i, items, g.n), probs[i]);
    return FiniteDistribution<CountVector>::normalize(std::move(w));
  };
  lifted.likelihood = [factorizedItems](const GroupExperiment<X>& g, const CountVector& y) {
    return countVectorLikelihood(factorizedItems(g.inner), g.n, y);
  };
  return lifted;
}

}  // namespace oed
