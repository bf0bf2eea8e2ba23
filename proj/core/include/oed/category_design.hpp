#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oed/category.hpp"
#include "oed/design.hpp"

namespace oed::category {

struct CategoryDesignOptions {
  std::vector<std::string> models{"exemplar", "prototype"};
  std::optional<std::vector<double>> prior;
  OutcomePrior outcomePrior = OutcomePrior::Predictive;
  ParameterMode mode = ParameterMode::Point;
  SimilarityParams params;
  int n = 1;
  unsigned threads = 0;
  /// Keep per-outcome terms from direct enumeration (65536 rows per structure at n = 1).
  bool perOutcomeDetail = false;
};

using CategoryReport = DesignReport<CategoryStructure, CountVector>;

/// True when the LLR convolution applies: two point-parameter models.
bool usesFactorizedPath(const CategoryDesignOptions& options);

/// EIG of one training structure. Point-parameter two-model spaces take the
/// factorized path (no per-outcome detail); everything else enumerates the
/// full count-vector space, which must stay within 2^22 responses.
CategoryReport structureEig(const CategoryStructure& structure, const CategoryDesignOptions& options);

/// Same quantity by brute-force enumeration of the response space, whatever the options.
CategoryReport structureEigDirect(const CategoryStructure& structure, const CategoryDesignOptions& options);

std::vector<CategoryReport> rankStructures(const std::vector<CategoryStructure>& structures,
                                           const CategoryDesignOptions& options);

/// Model space over group experiments; groupifyVector for point mode, the
/// mixture likelihood for the marginalized mode.
ModelSpace<GroupExperiment<CategoryStructure>, CountVector> groupModelSpace(const CategoryDesignOptions& options);

}  // namespace oed::category
