#pragma once

// Category-learning study: objects with 4 binary features, exemplar and
// prototype classifiers, and the space of 5-A/4-B training structures.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "oed/model.hpp"

namespace oed::category {

inline constexpr std::size_t kDimensions = 4;
inline constexpr std::size_t kObjectCount = 16;
inline constexpr std::size_t kTrainA = 5;
inline constexpr std::size_t kTrainB = 4;

/// Four binary features; dimension 0 is the leftmost character of str().
struct StimulusObject {
  std::uint8_t bits = 0;

  static StimulusObject parse(std::string_view text);
  std::string str() const;
  int feature(std::size_t d) const { return (bits >> (kDimensions - 1 - d)) & 1; }
  StimulusObject complement() const { return {static_cast<std::uint8_t>(~bits & 0xF)}; }

  friend auto operator<=>(const StimulusObject&, const StimulusObject&) = default;
};

/// All 16 objects in order 0000, 0001, ..., 1111. Item k of every response
/// vector refers to allObjects()[k].
std::vector<StimulusObject> allObjects();

/// A training assignment. Both sets are kept sorted.
struct CategoryStructure {
  std::vector<StimulusObject> trainA;
  std::vector<StimulusObject> trainB;

  CategoryStructure() = default;
  CategoryStructure(std::vector<StimulusObject> a, std::vector<StimulusObject> b);

  friend auto operator<=>(const CategoryStructure&, const CategoryStructure&) = default;
};

/// Per-dimension similarity for a mismatch; a match contributes 1.
struct SimilarityParams {
  std::array<double, kDimensions> s{0.3, 0.3, 0.3, 0.3};

  SimilarityParams() = default;
  explicit SimilarityParams(std::array<double, kDimensions> values);
  static SimilarityParams uniform(double value) { return SimilarityParams({value, value, value, value}); }
};

double similarity(StimulusObject a, StimulusObject b, const SimilarityParams& params);

/// P(label = A | o) for every object under the summed-similarity exemplar rule.
std::vector<double> exemplarProbabilities(const CategoryStructure& structure, const SimilarityParams& params);

/// P(label = A | o) for every object against the prototypes 1111 and 0000.
std::vector<double> prototypeProbabilities(const SimilarityParams& params);

enum class ParameterMode { Point, Marginalized };

std::string_view parameterModeName(ParameterMode mode) noexcept;
std::optional<ParameterMode> parseParameterMode(std::string_view name) noexcept;

/// Grid values for each similarity parameter in the marginalized mode.
inline constexpr std::array<double, 5> kMarginalGrid{0.1, 0.3, 0.5, 0.7, 0.9};

ItemwiseModel<CategoryStructure> exemplarModel(const SimilarityParams& params);
ItemwiseModel<CategoryStructure> prototypeModel(const SimilarityParams& params);
/// Uniform mixture over kMarginalGrid^4 of the point-parameter model.
ItemwiseModel<CategoryStructure> exemplarModelMarginalized();
ItemwiseModel<CategoryStructure> prototypeModelMarginalized();

/// Names accepted by model(): exemplar, prototype.
const std::vector<std::string>& modelNames();
ItemwiseModel<CategoryStructure> model(std::string_view name, ParameterMode mode,
                                       const SimilarityParams& params = {});

// --- structure constraints ---------------------------------------------------

/// Decides linear separability by searching integer weights in [-16, 16]^4.
bool isLinearlySeparable(const std::vector<StimulusObject>& trainA, const std::vector<StimulusObject>& trainB);

/// Decides linear separability by phase-one simplex on the margin-1 system.
bool isLinearlySeparableLp(const std::vector<StimulusObject>& trainA, const std::vector<StimulusObject>& trainB);

/// The distinct dichotomies of the 16 objects cut out by integer hyperplanes,
/// as 16-bit masks of the positive side.
const std::vector<std::uint16_t>& thresholdFunctions();

/// 1 is a modal value of trainA and 0 a modal value of trainB on every dimension.
bool hasModalPrototypes(const CategoryStructure& structure);

/// Reason the structure violates a constraint, or nullopt if it is valid.
std::optional<std::string> validationError(const CategoryStructure& structure);

/// Lexicographically smallest image under the 24 dimension permutations.
CategoryStructure canonicalize(const CategoryStructure& structure);

CategoryStructure permuteDimensions(const CategoryStructure& structure, const std::array<std::size_t, kDimensions>& perm);

/// Every valid structure up to dimension permutation, canonical and sorted.
std::vector<CategoryStructure> enumerateStructures();

// --- I/O ---------------------------------------------------------------------

nlohmann::json structureToJson(const CategoryStructure& structure);
/// Parses {"trainA": [...], "trainB": [...]} without validating constraints.
CategoryStructure structureFromJson(const nlohmann::json& j);

/// Parses a structure key as produced by toKey().
CategoryStructure parseStructureKey(std::string_view key);

/// Directory holding ms54.json: $OED_DATA_DIR, then the source tree, then the install prefix.
std::filesystem::path defaultDataDir();

/// Loads and validates the Medin-Schaffer 5-4 structure. Throws InvalidBundledStructure.
CategoryStructure ms54Structure(const std::filesystem::path& file);
CategoryStructure ms54Structure();

inline std::string toKey(const StimulusObject& o) { return o.str(); }
/// "aaaa.aaaa.aaaa.aaaa.aaaa|bbbb.bbbb.bbbb.bbbb"
std::string toKey(const CategoryStructure& s);

inline void to_json(nlohmann::json& j, const CategoryStructure& s) { j = structureToJson(s); }

}  // namespace oed::category
