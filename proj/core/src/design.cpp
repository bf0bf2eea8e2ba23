#include "oed/design.hpp"

#include <cmath>
#include <tuple>

namespace oed {

std::string_view outcomePriorName(OutcomePrior prior) noexcept {
  return prior == OutcomePrior::Uniform ? "uniform" : "predictive";
}

std::optional<OutcomePrior> parseOutcomePrior(std::string_view name) noexcept {
  if (name == "uniform") return OutcomePrior::Uniform;
  if (name == "predictive") return OutcomePrior::Predictive;
  return std::nullopt;
}

FiniteDistribution<std::string> posteriorFromLikelihoods(const FiniteDistribution<std::string>& prior,
                                                         std::span<const std::string> names,
                                                         std::span<const double> likelihoods) {
  if (names.size() != likelihoods.size()) {
    throw OedError(ErrorCode::LengthMismatch, "one likelihood per model is required");
  }
  std::vector<std::pair<std::string, double>> w;
  w.reserve(names.size());
  bool any = false;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double wi = prior.probability(names[i]) * likelihoods[i];
    any = any || wi > 0.0;
    w.emplace_back(names[i], wi);
  }
  if (!any) throw OedError(ErrorCode::AllZeroLikelihood, "every model assigns the observation zero probability");
  return FiniteDistribution<std::string>::normalize(std::move(w));
}

std::vector<int> countResponseSpace(int n) {
  if (n < 1) throw OedError(ErrorCode::InvalidArgument, "group size must be at least 1");
  std::vector<int> out(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out[static_cast<std::size_t>(k)] = k;
  return out;
}

namespace {

constexpr double kLlrQuantum = 1e-9;

// One merged point of the convolved log-likelihood-ratio distribution.
// `side` is +1 when model 2 cannot produce the response (ratio +inf), -1 when
// model 1 cannot, 0 otherwise.
struct LlrBin {
  int side = 0;
  std::int64_t key = 0;
  double w1 = 0.0;  // mass under model 1
  double w2 = 0.0;  // mass under model 2
  double u = 0.0;   // mass under the uniform outcome prior

  auto order() const { return std::tie(side, key); }
};

double binaryKl(double post1, double prior1) {
  double kl = 0.0;
  if (post1 > 0.0) kl += post1 * std::log(post1 / prior1);
  const double post2 = 1.0 - post1;
  if (post2 > 0.0) kl += post2 * std::log(post2 / (1.0 - prior1));
  return std::max(kl, 0.0);
}

}  // namespace

double eigFactorizedTwoModel(std::span<const double> pPerItemM1, std::span<const double> pPerItemM2,
                             double priorM1, double priorM2, OutcomePrior outcomePrior, int n) {
  if (pPerItemM1.size() != pPerItemM2.size()) {
    throw OedError(ErrorCode::LengthMismatch, "per-item probability lists differ in length");
  }
  if (pPerItemM1.empty()) throw OedError(ErrorCode::EmptyResponseSpace, "no items");
  if (n < 1) throw OedError(ErrorCode::InvalidArgument, "group size must be at least 1");
  if (!(priorM1 > 0.0) || !(priorM2 > 0.0)) throw OedError(ErrorCode::InvalidArgument, "prior must be positive");
  const double total = priorM1 + priorM2;
  const double pi1 = priorM1 / total;
  const double pi2 = priorM2 / total;

  const auto outcomes = static_cast<std::size_t>(n) + 1;
  const double uniformMass = 1.0 / static_cast<double>(outcomes);
  std::vector<LlrBin> bins{LlrBin{0, 0, 1.0, 1.0, 1.0}};
  std::vector<LlrBin> next;
  std::vector<double> a(outcomes), b(outcomes);

  for (std::size_t k = 0; k < pPerItemM1.size(); ++k) {
    for (std::size_t c = 0; c < outcomes; ++c) {
      a[c] = binomialPmf(n, pPerItemM1[k], static_cast<int>(c));
      b[c] = binomialPmf(n, pPerItemM2[k], static_cast<int>(c));
    }
    next.clear();
    next.reserve(bins.size() * outcomes);
    for (const auto& bin : bins) {
      for (std::size_t c = 0; c < outcomes; ++c) {
        LlrBin out{bin.side, bin.key, bin.w1 * a[c], bin.w2 * b[c], bin.u * uniformMass};
        if (a[c] == 0.0 && b[c] == 0.0) {
          continue;  // impossible under both models: zero KL, zero predictive mass
        } else if (b[c] == 0.0) {
          if (bin.side < 0) continue;
          out.side = 1;
        } else if (a[c] == 0.0) {
          if (bin.side > 0) continue;
          out.side = -1;
        }
        if (out.side == 0) {
          out.key += std::llround(std::log(a[c] / b[c]) / kLlrQuantum);
        } else {
          out.key = 0;
        }
        next.push_back(out);
      }
    }
    std::sort(next.begin(), next.end(), [](const LlrBin& x, const LlrBin& y) { return x.order() < y.order(); });
    bins.clear();
    for (const auto& e : next) {
      if (!bins.empty() && bins.back().order() == e.order()) {
        bins.back().w1 += e.w1;
        bins.back().w2 += e.w2;
        bins.back().u += e.u;
      } else {
        bins.push_back(e);
      }
    }
    if (bins.size() > kMaxLlrSupport) {
      throw OedError(ErrorCode::SupportTooLarge, "log-likelihood-ratio support exceeds the fast-path limit");
    }
  }

  double eig = 0.0;
  for (const auto& bin : bins) {
    const double m1 = pi1 * bin.w1;
    const double m2 = pi2 * bin.w2;
    const double marginal = m1 + m2;
    if (marginal <= 0.0) continue;
    const double weight = outcomePrior == OutcomePrior::Uniform ? bin.u : marginal;
    eig += weight * binaryKl(m1 / marginal, pi1);
  }
  return eig;
}

double eigFactorizedTwoModel(std::span<const double> pPerItemM1, std::span<const double> pPerItemM2,
                             const FiniteDistribution<std::string>& prior, OutcomePrior outcomePrior, int n) {
  if (prior.size() != 2) {
    throw OedError(ErrorCode::UnsupportedModelCount, "the factorized path handles exactly two models");
  }
  return eigFactorizedTwoModel(pPerItemM1, pPerItemM2, prior.entries()[0].second, prior.entries()[1].second,
                               outcomePrior, n);
}

}  // namespace oed
