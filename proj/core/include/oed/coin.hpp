#pragma once

// Sequence-prediction study: a participant sees four flips and predicts the next.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "oed/distribution.hpp"
#include "oed/model.hpp"

namespace oed::coin {

enum class Flip : char { H = 'H', T = 'T' };

inline constexpr std::size_t kSequenceLength = 4;

struct CoinSequence {
  std::array<Flip, kSequenceLength> flips{};

  /// Parses a 4-character H/T string; throws InvalidArgument otherwise.
  static CoinSequence parse(std::string_view text);
  std::string str() const;
  int heads() const;
  /// Number of adjacent positions whose flips differ.
  int transitions() const;
  Flip last() const { return flips.back(); }

  friend auto operator<=>(const CoinSequence&, const CoinSequence&) = default;
};

using CoinExperiment = GroupExperiment<CoinSequence>;

Flip opposite(Flip f);
CoinSequence mirror(const CoinSequence& s);

FiniteDistribution<Flip> fairCoin(const CoinSequence& seq);
FiniteDistribution<Flip> biasCoin(const CoinSequence& seq);
FiniteDistribution<Flip> markovCoin(const CoinSequence& seq);

/// All 16 sequences, HHHH first, leftmost flip most significant.
std::vector<CoinSequence> allSequences();

/// Names accepted by model(): fair, bias, markov.
const std::vector<std::string>& modelNames();
Model<CoinSequence, Flip> model(std::string_view name);

inline std::vector<Flip> responseSpace() { return {Flip::H, Flip::T}; }

inline std::string toKey(Flip f) { return std::string(1, static_cast<char>(f)); }
inline std::string toKey(const CoinSequence& s) { return s.str(); }

inline void to_json(nlohmann::json& j, Flip f) { j = toKey(f); }
inline void from_json(const nlohmann::json& j, Flip& f) {
  const auto s = j.get<std::string>();
  if (s == "H") {
    f = Flip::H;
  } else if (s == "T") {
    f = Flip::T;
  } else {
    throw OedError(ErrorCode::InvalidArgument, "flip must be H or T");
  }
}
inline void to_json(nlohmann::json& j, const CoinSequence& s) { j = s.str(); }

}  // namespace oed::coin
