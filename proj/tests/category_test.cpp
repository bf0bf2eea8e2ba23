#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "oed/category.hpp"
#include "oed/category_design.hpp"
#include "support/oracles.hpp"

namespace oed::category {
namespace {

StimulusObject obj(std::string_view s) { return StimulusObject::parse(s); }

CategoryStructure structure(std::vector<std::string_view> a, std::vector<std::string_view> b) {
  std::vector<StimulusObject> ao, bo;
  for (auto s : a) ao.push_back(obj(s));
  for (auto s : b) bo.push_back(obj(s));
  return {ao, bo};
}

const CategoryStructure& ms54() {
  static const CategoryStructure s =
      structure({"1110", "1010", "1011", "1101", "0111"}, {"1100", "0110", "0001", "0000"});
  return s;
}

TEST(Objects, ParseAndFeatures) {
  const auto o = obj("1011");
  EXPECT_EQ(o.str(), "1011");
  EXPECT_EQ(o.feature(0), 1);
  EXPECT_EQ(o.feature(1), 0);
  EXPECT_EQ(o.complement().str(), "0100");
  EXPECT_THROW((void)obj("10112"), OedError);
  EXPECT_THROW((void)obj("1021"), OedError);
  const auto all = allObjects();
  ASSERT_EQ(all.size(), 16u);
  EXPECT_EQ(all.front().str(), "0000");
  EXPECT_EQ(all.back().str(), "1111");
}

TEST(Similarity, Examples) {
  const SimilarityParams p;
  EXPECT_EQ(similarity(obj("0110"), obj("0110"), p), 1.0);
  EXPECT_NEAR(similarity(obj("1111"), obj("0000"), p), 0.0081, 1e-15);
  EXPECT_NEAR(similarity(obj("1110"), obj("1111"), p), 0.3, 1e-15);
  const SimilarityParams mixed({0.1, 0.2, 0.5, 0.9});
  EXPECT_NEAR(similarity(obj("1010"), obj("0011"), mixed), 0.1 * 0.9, 1e-15);
  for (const auto& a : allObjects()) {
    for (const auto& b : allObjects()) EXPECT_EQ(similarity(a, b, mixed), similarity(b, a, mixed));
  }
  EXPECT_THROW(SimilarityParams({0.0, 0.3, 0.3, 0.3}), OedError);
  EXPECT_THROW(SimilarityParams({0.3, 0.3, 1.5, 0.3}), OedError);
}

TEST(Exemplar, MedinSchafferProbabilitiesMatchHandCalculation) {
  // S_A / (S_A + S_B) for each of the 16 objects, evaluated by hand at s = 0.3.
  const std::vector<double> expected{0.11799761621,  0.183894882768, 0.446374797313, 0.603847090334,
                                     0.235580264072, 0.537375213051, 0.381342901076, 0.744974152786,
                                     0.446374797313, 0.603847090334, 0.847770374167, 0.90178058587,
                                     0.381342901076, 0.744974152786, 0.711985850982, 0.857085907913};
  const auto p = exemplarProbabilities(ms54(), SimilarityParams{});
  ASSERT_EQ(p.size(), 16u);
  for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(p[k], expected[k], 1e-11) << allObjects()[k].str();
}

TEST(Exemplar, TrainingItemFarFromBIsClassifiedA) {
  const auto s = structure({"1111", "1110", "1101", "1011", "0111"}, {"0000", "0001", "0010", "0100"});
  const auto p = exemplarProbabilities(s, SimilarityParams::uniform(0.1));
  EXPECT_GT(p[0b1111], 0.5);
  EXPECT_LT(p[0b0000], 0.5);
}

TEST(Prototype, Examples) {
  const auto p = prototypeProbabilities(SimilarityParams{});
  EXPECT_NEAR(p[0b1110], 0.9174311926605504, 1e-15);  // 0.3 / (0.3 + 0.027)
  EXPECT_NEAR(p[0b1100], 0.5, 1e-15);
  for (const auto& o : allObjects()) EXPECT_NEAR(p[o.bits], 1.0 - p[o.complement().bits], 1e-15);
}

TEST(Models, AllSimilaritiesOne) {
  const auto flat = SimilarityParams::uniform(1.0);
  for (double v : exemplarProbabilities(ms54(), flat)) EXPECT_NEAR(v, 5.0 / 9, 1e-15);
  for (double v : prototypeProbabilities(flat)) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Models, MarginalizedModelsAreGridMixtures) {
  const auto comps = exemplarModelMarginalized().components(ms54());
  ASSERT_EQ(comps.size(), 625u);
  // Equal weights; the mixture normalizes them.
  for (const auto& c : comps) EXPECT_EQ(c.weight, comps.front().weight);
  EXPECT_EQ(prototypeModelMarginalized().components(ms54()).size(), 625u);
  const auto point = model("exemplar", ParameterMode::Point).components(ms54());
  ASSERT_EQ(point.size(), 1u);
  EXPECT_EQ(point.front().items, exemplarProbabilities(ms54(), SimilarityParams{}));
  EXPECT_THROW((void)model("rule", ParameterMode::Point), OedError);
}

TEST(Separability, Examples) {
  const auto lo = [](std::vector<std::string_view> v) {
    std::vector<StimulusObject> out;
    for (auto s : v) out.push_back(obj(s));
    return out;
  };
  EXPECT_TRUE(isLinearlySeparable(lo({"1111"}), lo({"0000"})));
  EXPECT_FALSE(isLinearlySeparable(lo({"1100", "0011"}), lo({"1010", "0101"})));  // XOR on two dimensions
  EXPECT_TRUE(isLinearlySeparable(ms54().trainA, ms54().trainB));
  EXPECT_TRUE(isLinearlySeparableLp(ms54().trainA, ms54().trainB));
  EXPECT_FALSE(isLinearlySeparableLp(lo({"1100", "0011"}), lo({"1010", "0101"})));
}

TEST(Separability, ThresholdFunctionCount) {
  // There are 1882 Boolean threshold functions of four variables.
  EXPECT_EQ(thresholdFunctions().size(), 1882u);
}

TEST(Separability, TableAgreesWithLinearProgram) {
  std::mt19937_64 rng(13);
  auto objects = allObjects();
  int separable = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::shuffle(objects.begin(), objects.end(), rng);
    std::vector<StimulusObject> a(objects.begin(), objects.begin() + 5);
    std::vector<StimulusObject> b(objects.begin() + 5, objects.begin() + 9);
    const bool table = isLinearlySeparable(a, b);
    EXPECT_EQ(table, isLinearlySeparableLp(a, b)) << "trial " << trial;
    separable += table;
  }
  EXPECT_GT(separable, 0);
  EXPECT_LT(separable, 1000);
}

TEST(Constraints, ModalPrototypesAllowTies) {
  // The B set of the 5-4 structure is split 2-2 on the second dimension.
  EXPECT_TRUE(hasModalPrototypes(ms54()));
  EXPECT_EQ(validationError(ms54()), std::nullopt);
  const auto wrongMode = structure({"0110", "0010", "0011", "0101", "0111"}, {"1100", "1110", "1001", "1000"});
  EXPECT_FALSE(hasModalPrototypes(wrongMode));
  EXPECT_TRUE(validationError(wrongMode).has_value());
  const auto overlap = structure({"1110", "1010", "1011", "1101", "0111"}, {"1110", "0110", "0001", "0000"});
  EXPECT_TRUE(validationError(overlap).has_value());
  const auto small = structure({"1110", "1010", "1011", "1101"}, {"1100", "0110", "0001", "0000"});
  EXPECT_TRUE(validationError(small).has_value());
}

TEST(Canonical, InvariantUnderDimensionPermutation) {
  std::array<std::size_t, 4> perm{0, 1, 2, 3};
  const auto base = canonicalize(ms54());
  do {
    EXPECT_EQ(canonicalize(permuteDimensions(ms54(), perm)), base);
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(canonicalize(base), base);
  EXPECT_EQ(parseStructureKey(toKey(base)), base);
}

TEST(Enumerate, NineHundredThirtyThreeValidStructures) {
  const auto all = enumerateStructures();
  ASSERT_EQ(all.size(), 933u);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  for (const auto& s : all) {
    EXPECT_EQ(validationError(s), std::nullopt);
    EXPECT_EQ(canonicalize(s), s);
  }
  EXPECT_TRUE(std::binary_search(all.begin(), all.end(), canonicalize(ms54())));
}

TEST(Io, BundledStructureLoads) {
  EXPECT_EQ(ms54Structure(), ms54());
  const auto j = structureToJson(ms54());
  EXPECT_EQ(structureFromJson(j), ms54());
}

TEST(Io, InvalidBundledStructureIsReported) {
  const auto dir = std::filesystem::temp_directory_path() / "oed_category_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "ms54.json";
  {
    std::ofstream out(file);
    out << R"({"trainA": ["1110", "1010", "1011", "1101"], "trainB": ["1100", "0110", "0001", "0000"]})";
  }
  try {
    (void)ms54Structure(file);
    FAIL();
  } catch (const OedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidBundledStructure);
  }
  {
    std::ofstream out(file);
    out << "{not json";
  }
  EXPECT_THROW((void)ms54Structure(file), OedError);
  EXPECT_THROW((void)ms54Structure(dir / "missing.json"), OedError);
  std::filesystem::remove_all(dir);
}

TEST(Design, FastPathMatchesDirectEnumeration) {
  const auto all = enumerateStructures();
  std::mt19937_64 rng(21);
  CategoryDesignOptions options;
  options.threads = 1;
  std::vector<CategoryStructure> picks{canonicalize(ms54())};
  for (int i = 0; i < 2; ++i) picks.push_back(all[rng() % all.size()]);
  for (const auto& s : picks) {
    for (auto prior : {OutcomePrior::Predictive, OutcomePrior::Uniform}) {
      options.outcomePrior = prior;
      ASSERT_TRUE(usesFactorizedPath(options));
      EXPECT_NEAR(structureEig(s, options).eig, structureEigDirect(s, options).eig, 1e-9) << toKey(s);
    }
  }
}

TEST(Design, MedinSchafferPointValue) {
  CategoryDesignOptions options;
  EXPECT_NEAR(structureEig(ms54(), options).eig, 0.342241, 1e-6);
}

TEST(Design, MarginalizedUsesDirectEnumeration) {
  CategoryDesignOptions options;
  options.mode = ParameterMode::Marginalized;
  EXPECT_FALSE(usesFactorizedPath(options));
  const double eig = structureEig(ms54(), options).eig;
  EXPECT_NEAR(eig, 0.225429, 1e-6);
  options.n = 5;  // 6^16 count vectors
  try {
    (void)structureEig(ms54(), options);
    FAIL();
  } catch (const OedError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SupportTooLarge);
  }
}

}  // namespace
}  // namespace oed::category
