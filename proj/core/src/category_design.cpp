#include "oed/category_design.hpp"

namespace oed::category {

namespace {

using GroupStructure = GroupExperiment<CategoryStructure>;

Model<GroupStructure, CountVector> mixtureGroupModel(ItemwiseModel<CategoryStructure> single) {
  Model<GroupStructure, CountVector> out;
  out.name = single.name;
  out.predict = [single](const GroupStructure& g) {
    const auto comps = single.components(g.inner);
    const auto probs = enumerateCountVectorProbabilities(comps, g.n);
    std::vector<std::pair<CountVector, double>> w;
    w.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) w.emplace_back(decodeCountVector(i, kObjectCount, g.n), probs[i]);
    return FiniteDistribution<CountVector>::normalize(std::move(w));
  };
  out.likelihood = [single](const GroupStructure& g, const CountVector& y) {
    return countVectorLikelihood(single.components(g.inner), g.n, y);
  };
  return out;
}

}  // namespace

bool usesFactorizedPath(const CategoryDesignOptions& options) {
  return options.mode == ParameterMode::Point && options.models.size() == 2;
}

ModelSpace<GroupStructure, CountVector> groupModelSpace(const CategoryDesignOptions& options) {
  std::vector<Model<GroupStructure, CountVector>> models;
  for (const auto& name : options.models) {
    auto single = model(name, options.mode, options.params);
    models.push_back(options.mode == ParameterMode::Point ? groupifyVector(std::move(single))
                                                          : mixtureGroupModel(std::move(single)));
  }
  return ModelSpace<GroupStructure, CountVector>(std::move(models), options.prior);
}

CategoryReport structureEigDirect(const CategoryStructure& structure, const CategoryDesignOptions& options) {
  const auto space = groupModelSpace(options);
  const GroupStructure x{options.n, structure};
  auto grouped = expectedInformationGain(space, x, options.outcomePrior, countVectorSpace(kObjectCount, options.n));
  if (!options.perOutcomeDetail) grouped.perOutcome.clear();
  return {structure, grouped.eig, std::move(grouped.perOutcome), 0};
}

CategoryReport structureEig(const CategoryStructure& structure, const CategoryDesignOptions& options) {
  if (!usesFactorizedPath(options)) return structureEigDirect(structure, options);
  std::vector<std::vector<double>> items;
  for (const auto& name : options.models) {
    auto comps = model(name, options.mode, options.params).components(structure);
    items.push_back(std::move(comps.front().items));
  }
  double w1 = 1.0;
  double w2 = 1.0;
  if (options.prior) {
    if (options.prior->size() != 2) throw OedError(ErrorCode::LengthMismatch, "prior must have one weight per model");
    w1 = (*options.prior)[0];
    w2 = (*options.prior)[1];
  }
  const double eig = eigFactorizedTwoModel(items[0], items[1], w1, w2, options.outcomePrior, options.n);
  return {structure, eig, {}, 0};
}

std::vector<CategoryReport> rankStructures(const std::vector<CategoryStructure>& structures,
                                           const CategoryDesignOptions& options) {
  std::function<CategoryReport(std::size_t)> eval = [&](std::size_t i) { return structureEig(structures[i], options); };
  auto reports = evaluateParallel(structures.size(), eval, options.threads);
  assignRanks(reports);
  return reports;
}

}  // namespace oed::category
