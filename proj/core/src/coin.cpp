#include "oed/coin.hpp"

namespace oed::coin {

CoinSequence CoinSequence::parse(std::string_view text) {
  if (text.size() != kSequenceLength) {
    throw OedError(ErrorCode::InvalidArgument, "coin sequence must have 4 flips: '" + std::string(text) + "'");
  }
  CoinSequence s;
  for (std::size_t i = 0; i < kSequenceLength; ++i) {
    if (text[i] == 'H') {
      s.flips[i] = Flip::H;
    } else if (text[i] == 'T') {
      s.flips[i] = Flip::T;
    } else {
      throw OedError(ErrorCode::InvalidArgument, "coin sequence must use H and T: '" + std::string(text) + "'");
    }
  }
  return s;
}

std::string CoinSequence::str() const {
  std::string out;
  for (Flip f : flips) out += static_cast<char>(f);
  return out;
}

int CoinSequence::heads() const {
  int h = 0;
  for (Flip f : flips) h += f == Flip::H;
  return h;
}

int CoinSequence::transitions() const {
  int t = 0;
  for (std::size_t i = 1; i < flips.size(); ++i) t += flips[i] != flips[i - 1];
  return t;
}

Flip opposite(Flip f) { return f == Flip::H ? Flip::T : Flip::H; }

CoinSequence mirror(const CoinSequence& s) {
  CoinSequence out = s;
  for (auto& f : out.flips) f = opposite(f);
  return out;
}

namespace {

FiniteDistribution<Flip> headsWith(double pHeads) {
  return FiniteDistribution<Flip>::normalize({{Flip::H, pHeads}, {Flip::T, 1.0 - pHeads}});
}

}  // namespace

FiniteDistribution<Flip> fairCoin(const CoinSequence&) { return headsWith(0.5); }

// Uniform prior on the coin weight; the predictive is the Beta(1,1) posterior mean.
FiniteDistribution<Flip> biasCoin(const CoinSequence& seq) {
  const int h = seq.heads();
  return headsWith(betaPosteriorPredictive(BetaParams{1.0, 1.0}, h, static_cast<int>(kSequenceLength) - h));
}

// The first flip is uniform and says nothing about the switch probability; the
// three adjacent pairs are Bernoulli trials for "switch".
FiniteDistribution<Flip> markovCoin(const CoinSequence& seq) {
  const int t = seq.transitions();
  const int pairs = static_cast<int>(kSequenceLength) - 1;
  const double pSwitch = betaPosteriorPredictive(BetaParams{1.0, 1.0}, t, pairs - t);
  const double pHeads = seq.last() == Flip::H ? 1.0 - pSwitch : pSwitch;
  return headsWith(pHeads);
}

std::vector<CoinSequence> allSequences() {
  std::vector<CoinSequence> out;
  for (unsigned mask = 0; mask < (1u << kSequenceLength); ++mask) {
    CoinSequence s;
    for (std::size_t i = 0; i < kSequenceLength; ++i) {
      const bool tails = (mask >> (kSequenceLength - 1 - i)) & 1u;
      s.flips[i] = tails ? Flip::T : Flip::H;
    }
    out.push_back(s);
  }
  return out;
}

const std::vector<std::string>& modelNames() {
  static const std::vector<std::string> names{"fair", "bias", "markov"};
  return names;
}

Model<CoinSequence, Flip> model(std::string_view name) {
  Model<CoinSequence, Flip> m;
  m.name = std::string(name);
  if (name == "fair") {
    m.predict = fairCoin;
  } else if (name == "bias") {
    m.predict = biasCoin;
  } else if (name == "markov") {
    m.predict = markovCoin;
  } else {
    throw OedError(ErrorCode::InvalidArgument, "unknown coin model '" + std::string(name) + "'");
  }
  return m;
}

}  // namespace oed::coin
