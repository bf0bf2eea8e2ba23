#include "oed/category.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>

namespace oed::category {

StimulusObject StimulusObject::parse(std::string_view text) {
  if (text.size() != kDimensions) {
    throw OedError(ErrorCode::InvalidArgument, "object must be 4 bits: '" + std::string(text) + "'");
  }
  std::uint8_t bits = 0;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw OedError(ErrorCode::InvalidArgument, "object must be a bit string: '" + std::string(text) + "'");
    }
    bits = static_cast<std::uint8_t>((bits << 1) | (c == '1'));
  }
  return {bits};
}

std::string StimulusObject::str() const {
  std::string out(kDimensions, '0');
  for (std::size_t d = 0; d < kDimensions; ++d) out[d] = feature(d) ? '1' : '0';
  return out;
}

std::vector<StimulusObject> allObjects() {
  std::vector<StimulusObject> out;
  for (unsigned b = 0; b < kObjectCount; ++b) out.push_back({static_cast<std::uint8_t>(b)});
  return out;
}

CategoryStructure::CategoryStructure(std::vector<StimulusObject> a, std::vector<StimulusObject> b)
    : trainA(std::move(a)), trainB(std::move(b)) {
  std::sort(trainA.begin(), trainA.end());
  std::sort(trainB.begin(), trainB.end());
}

std::string toKey(const CategoryStructure& s) {
  std::string out;
  auto append = [&out](const std::vector<StimulusObject>& objs) {
    for (std::size_t i = 0; i < objs.size(); ++i) {
      if (i) out += '.';
      out += objs[i].str();
    }
  };
  append(s.trainA);
  out += '|';
  append(s.trainB);
  return out;
}

SimilarityParams::SimilarityParams(std::array<double, kDimensions> values) : s(values) {
  for (double v : s) {
    if (!(v > 0.0 && v <= 1.0)) throw OedError(ErrorCode::InvalidArgument, "similarity parameters must be in (0,1]");
  }
}

double similarity(StimulusObject a, StimulusObject b, const SimilarityParams& params) {
  double out = 1.0;
  for (std::size_t d = 0; d < kDimensions; ++d) {
    if (a.feature(d) != b.feature(d)) out *= params.s[d];
  }
  return out;
}

std::vector<double> exemplarProbabilities(const CategoryStructure& structure, const SimilarityParams& params) {
  std::vector<double> out;
  out.reserve(kObjectCount);
  for (auto probe : allObjects()) {
    double sa = 0.0;
    double sb = 0.0;
    for (auto e : structure.trainA) sa += similarity(probe, e, params);
    for (auto e : structure.trainB) sb += similarity(probe, e, params);
    if (!(sa + sb > 0.0)) {
      throw OedError(ErrorCode::DegenerateEvidence, "no similarity to any exemplar for " + probe.str());
    }
    out.push_back(sa / (sa + sb));
  }
  return out;
}

std::vector<double> prototypeProbabilities(const SimilarityParams& params) {
  const StimulusObject protoA{0xF};
  const StimulusObject protoB{0x0};
  std::vector<double> out;
  out.reserve(kObjectCount);
  for (auto probe : allObjects()) {
    const double sa = similarity(probe, protoA, params);
    const double sb = similarity(probe, protoB, params);
    out.push_back(sa / (sa + sb));
  }
  return out;
}

std::string_view parameterModeName(ParameterMode mode) noexcept {
  return mode == ParameterMode::Point ? "point" : "marginalized";
}

std::optional<ParameterMode> parseParameterMode(std::string_view name) noexcept {
  if (name == "point") return ParameterMode::Point;
  if (name == "marginalized") return ParameterMode::Marginalized;
  return std::nullopt;
}

namespace {

std::vector<SimilarityParams> marginalGrid() {
  std::vector<SimilarityParams> out;
  for (double a : kMarginalGrid)
    for (double b : kMarginalGrid)
      for (double c : kMarginalGrid)
        for (double d : kMarginalGrid) out.emplace_back(std::array<double, kDimensions>{a, b, c, d});
  return out;
}

}  // namespace

ItemwiseModel<CategoryStructure> exemplarModel(const SimilarityParams& params) {
  return {"exemplar", [params](const CategoryStructure& s) {
            return std::vector<ItemMixtureComponent>{{1.0, exemplarProbabilities(s, params)}};
          }};
}

ItemwiseModel<CategoryStructure> prototypeModel(const SimilarityParams& params) {
  return {"prototype", [items = prototypeProbabilities(params)](const CategoryStructure&) {
            return std::vector<ItemMixtureComponent>{{1.0, items}};
          }};
}

ItemwiseModel<CategoryStructure> exemplarModelMarginalized() {
  return {"exemplar", [grid = marginalGrid()](const CategoryStructure& s) {
            std::vector<ItemMixtureComponent> out;
            out.reserve(grid.size());
            for (const auto& g : grid) out.push_back({1.0, exemplarProbabilities(s, g)});
            return out;
          }};
}

ItemwiseModel<CategoryStructure> prototypeModelMarginalized() {
  std::vector<ItemMixtureComponent> comps;
  for (const auto& g : marginalGrid()) comps.push_back({1.0, prototypeProbabilities(g)});
  return {"prototype", [comps](const CategoryStructure&) { return comps; }};
}

const std::vector<std::string>& modelNames() {
  static const std::vector<std::string> names{"exemplar", "prototype"};
  return names;
}

ItemwiseModel<CategoryStructure> model(std::string_view name, ParameterMode mode, const SimilarityParams& params) {
  const bool point = mode == ParameterMode::Point;
  if (name == "exemplar") return point ? exemplarModel(params) : exemplarModelMarginalized();
  if (name == "prototype") return point ? prototypeModel(params) : prototypeModelMarginalized();
  throw OedError(ErrorCode::InvalidArgument, "unknown category model '" + std::string(name) + "'");
}

// --- separability ------------------------------------------------------------

namespace {

constexpr int kWeightBound = 16;

std::uint16_t maskOf(const std::vector<StimulusObject>& objs) {
  std::uint16_t m = 0;
  for (auto o : objs) m = static_cast<std::uint16_t>(m | (1u << o.bits));
  return m;
}

std::vector<std::uint16_t> buildThresholdFunctions() {
  std::set<std::uint16_t> masks;
  std::array<std::pair<int, unsigned>, kObjectCount> proj{};
  std::array<int, kDimensions> w{};
  const int span = 2 * kWeightBound + 1;
  const int total = span * span * span * span;
  for (int code = 0; code < total; ++code) {
    int rest = code;
    for (std::size_t d = 0; d < kDimensions; ++d) {
      w[d] = rest % span - kWeightBound;
      rest /= span;
    }
    for (unsigned o = 0; o < kObjectCount; ++o) {
      const StimulusObject obj{static_cast<std::uint8_t>(o)};
      int v = 0;
      for (std::size_t d = 0; d < kDimensions; ++d) v += w[d] * obj.feature(d);
      proj[o] = {v, o};
    }
    std::sort(proj.begin(), proj.end());
    // Positive side = everything at or above a cut between distinct values.
    std::uint16_t upper = 0xFFFF;
    masks.insert(upper);
    for (std::size_t i = 0; i < kObjectCount; ++i) {
      upper = static_cast<std::uint16_t>(upper & ~(1u << proj[i].second));
      if (i + 1 == kObjectCount || proj[i + 1].first != proj[i].first) masks.insert(upper);
    }
  }
  return {masks.begin(), masks.end()};
}

// Phase one of the simplex method with Bland's rule: is {z >= 0 : G z >= rhs}
// nonempty? Every rhs entry must be positive.
bool phaseOneFeasible(const std::vector<std::vector<double>>& g, const std::vector<double>& rhs) {
  constexpr double eps = 1e-9;
  const std::size_t m = g.size();
  const std::size_t n = g.front().size();
  const std::size_t cols = n + 2 * m + 1;
  const std::size_t rhsCol = cols - 1;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = g[i][j];
    t[i][n + i] = -1.0;     // surplus
    t[i][n + m + i] = 1.0;  // artificial
    t[i][rhsCol] = rhs[i];
    basis[i] = n + m + i;
  }
  auto isArtificial = [&](std::size_t j) { return j >= n + m && j < n + 2 * m; };

  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < n + m && enter == cols; ++j) {
      if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
      double reduced = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (isArtificial(basis[i])) reduced += t[i][j];
      }
      if (reduced > eps) enter = j;
    }
    if (enter == cols) break;

    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= eps) continue;
      const double ratio = t[i][rhsCol] / t[i][enter];
      if (leave == m || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen in phase one

    const double pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0.0) continue;
      const double f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }

  double infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (isArtificial(basis[i])) infeasibility += t[i][rhsCol];
  }
  return infeasibility <= eps;
}

}  // namespace

const std::vector<std::uint16_t>& thresholdFunctions() {
  static const std::vector<std::uint16_t> table = buildThresholdFunctions();
  return table;
}

bool isLinearlySeparable(const std::vector<StimulusObject>& trainA, const std::vector<StimulusObject>& trainB) {
  const std::uint16_t a = maskOf(trainA);
  const std::uint16_t b = maskOf(trainB);
  if (a & b) return false;
  for (std::uint16_t m : thresholdFunctions()) {
    if ((m & a) == a && (m & b) == 0) return true;
  }
  return false;
}

bool isLinearlySeparableLp(const std::vector<StimulusObject>& trainA, const std::vector<StimulusObject>& trainB) {
  // Unknowns (w+, w-, b+, b-) >= 0; rows w.a - b >= 1 and b - w.x >= 1.
  std::vector<std::vector<double>> g;
  for (auto a : trainA) {
    std::vector<double> row;
    for (std::size_t d = 0; d < kDimensions; ++d) row.push_back(a.feature(d));
    for (std::size_t d = 0; d < kDimensions; ++d) row.push_back(-a.feature(d));
    row.push_back(-1.0);
    row.push_back(1.0);
    g.push_back(std::move(row));
  }
  for (auto x : trainB) {
    std::vector<double> row;
    for (std::size_t d = 0; d < kDimensions; ++d) row.push_back(-x.feature(d));
    for (std::size_t d = 0; d < kDimensions; ++d) row.push_back(x.feature(d));
    row.push_back(1.0);
    row.push_back(-1.0);
    g.push_back(std::move(row));
  }
  if (g.empty()) return true;
  return phaseOneFeasible(g, std::vector<double>(g.size(), 1.0));
}

bool hasModalPrototypes(const CategoryStructure& structure) {
  for (std::size_t d = 0; d < kDimensions; ++d) {
    int onesA = 0;
    int zerosB = 0;
    for (auto o : structure.trainA) onesA += o.feature(d);
    for (auto o : structure.trainB) zerosB += 1 - o.feature(d);
    const int sizeA = static_cast<int>(structure.trainA.size());
    const int sizeB = static_cast<int>(structure.trainB.size());
    // A 2-2 split still has 0 among its modes.
    if (2 * onesA < sizeA || 2 * zerosB < sizeB) return false;
  }
  return true;
}

std::optional<std::string> validationError(const CategoryStructure& structure) {
  if (structure.trainA.size() != kTrainA || structure.trainB.size() != kTrainB) {
    return "training set must contain 5 A objects and 4 B objects";
  }
  auto distinct = [](const std::vector<StimulusObject>& v) { return std::adjacent_find(v.begin(), v.end()) == v.end(); };
  if (!distinct(structure.trainA) || !distinct(structure.trainB)) return "training objects repeat";
  if (maskOf(structure.trainA) & maskOf(structure.trainB)) return "an object is in both categories";
  if (!hasModalPrototypes(structure)) return "modal objects are not 1111 (A) and 0000 (B)";
  if (!isLinearlySeparable(structure.trainA, structure.trainB)) return "categories are not linearly separable";
  return std::nullopt;
}

CategoryStructure permuteDimensions(const CategoryStructure& structure,
                                    const std::array<std::size_t, kDimensions>& perm) {
  auto apply = [&perm](StimulusObject o) {
    std::uint8_t bits = 0;
    for (std::size_t d = 0; d < kDimensions; ++d) bits = static_cast<std::uint8_t>((bits << 1) | o.feature(perm[d]));
    return StimulusObject{bits};
  };
  std::vector<StimulusObject> a;
  std::vector<StimulusObject> b;
  for (auto o : structure.trainA) a.push_back(apply(o));
  for (auto o : structure.trainB) b.push_back(apply(o));
  return {std::move(a), std::move(b)};
}

CategoryStructure canonicalize(const CategoryStructure& structure) {
  std::array<std::size_t, kDimensions> perm{0, 1, 2, 3};
  CategoryStructure best = structure;
  do {
    auto candidate = permuteDimensions(structure, perm);
    if (candidate < best) best = std::move(candidate);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<CategoryStructure> enumerateStructures() {
  std::set<CategoryStructure> seen;
  const auto objects = allObjects();
  for (unsigned a = 0; a < (1u << kObjectCount); ++a) {
    if (std::popcount(a) != static_cast<int>(kTrainA)) continue;
    std::vector<StimulusObject> trainA;
    for (auto o : objects) {
      if (a & (1u << o.bits)) trainA.push_back(o);
    }
    if (!hasModalPrototypes(CategoryStructure(trainA, {}))) continue;
    const unsigned rest = ~a & 0xFFFFu;
    for (unsigned b = rest; b != 0; b = (b - 1) & rest) {
      if (std::popcount(b) != static_cast<int>(kTrainB)) continue;
      std::vector<StimulusObject> trainB;
      for (auto o : objects) {
        if (b & (1u << o.bits)) trainB.push_back(o);
      }
      CategoryStructure s(trainA, std::move(trainB));
      if (!hasModalPrototypes(s) || !isLinearlySeparable(s.trainA, s.trainB)) continue;
      seen.insert(canonicalize(s));
    }
  }
  return {seen.begin(), seen.end()};
}

// --- I/O -----------------------------------------------------------------------

nlohmann::json structureToJson(const CategoryStructure& structure) {
  nlohmann::json j;
  j["trainA"] = nlohmann::json::array();
  j["trainB"] = nlohmann::json::array();
  for (auto o : structure.trainA) j["trainA"].push_back(o.str());
  for (auto o : structure.trainB) j["trainB"].push_back(o.str());
  return j;
}

CategoryStructure structureFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("trainA") || !j.contains("trainB")) {
    throw OedError(ErrorCode::InvalidArgument, "structure needs trainA and trainB arrays");
  }
  std::vector<StimulusObject> a;
  std::vector<StimulusObject> b;
  for (const auto& o : j.at("trainA")) a.push_back(StimulusObject::parse(o.get<std::string>()));
  for (const auto& o : j.at("trainB")) b.push_back(StimulusObject::parse(o.get<std::string>()));
  return {std::move(a), std::move(b)};
}

CategoryStructure parseStructureKey(std::string_view key) {
  const auto bar = key.find('|');
  if (bar == std::string_view::npos) {
    throw OedError(ErrorCode::InvalidArgument, "structure key needs a '|' separator: '" + std::string(key) + "'");
  }
  auto split = [](std::string_view part) {
    std::vector<StimulusObject> out;
    while (!part.empty()) {
      const auto dot = part.find('.');
      out.push_back(StimulusObject::parse(part.substr(0, dot)));
      if (dot == std::string_view::npos) break;
      part.remove_prefix(dot + 1);
    }
    return out;
  };
  return {split(key.substr(0, bar)), split(key.substr(bar + 1))};
}

std::filesystem::path defaultDataDir() {
  if (const char* env = std::getenv("OED_DATA_DIR"); env && *env) return env;
#ifdef OED_SOURCE_DATA_DIR
  if (std::filesystem::exists(std::filesystem::path(OED_SOURCE_DATA_DIR) / "ms54.json")) return OED_SOURCE_DATA_DIR;
#endif
#ifdef OED_INSTALL_DATA_DIR
  return OED_INSTALL_DATA_DIR;
#else
  return "data";
#endif
}

CategoryStructure ms54Structure(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw OedError(ErrorCode::InvalidBundledStructure, "cannot open " + file.string());
  CategoryStructure s;
  try {
    s = structureFromJson(nlohmann::json::parse(in));
  } catch (const std::exception& e) {
    throw OedError(ErrorCode::InvalidBundledStructure, file.string() + ": " + e.what());
  }
  if (auto err = validationError(s)) throw OedError(ErrorCode::InvalidBundledStructure, file.string() + ": " + *err);
  return s;
}

CategoryStructure ms54Structure() { return ms54Structure(defaultDataDir() / "ms54.json"); }

}  // namespace oed::category
