#include "oed/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace oed {

std::string_view errorCodeName(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::NonBinaryResponse: return "NonBinaryResponse";
    case ErrorCode::NonFactorizableResponse: return "NonFactorizableResponse";
    case ErrorCode::AllZeroLikelihood: return "AllZeroLikelihood";
    case ErrorCode::EmptyResponseSpace: return "EmptyResponseSpace";
    case ErrorCode::ResponseOutsideSpace: return "ResponseOutsideSpace";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnsupportedModelCount: return "UnsupportedModelCount";
    case ErrorCode::DegenerateEvidence: return "DegenerateEvidence";
    case ErrorCode::InvalidBundledStructure: return "InvalidBundledStructure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SupportTooLarge: return "SupportTooLarge";
  }
  return "Unknown";
}

std::string toKey(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string toKey(const CountVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

double expectation(const FiniteDistribution<double>& d) {
  double total = 0.0;
  for (const auto& [value, p] : d) total += p * value;
  return total;
}

double binomialPmf(int n, double p, int k) {
  if (n < 0 || k < 0 || k > n || !(p >= 0.0 && p <= 1.0)) {
    throw OedError(ErrorCode::InvalidArgument, "binomialPmf requires 0 <= k <= n and p in [0,1]");
  }
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double logChoose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(logChoose + k * std::log(p) + (n - k) * std::log1p(-p));
}

BetaParams::BetaParams(double a, double b) : alpha(a), beta(b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw OedError(ErrorCode::InvalidArgument, "Beta parameters must be positive");
  }
}

double betaPosteriorPredictive(const BetaParams& prior, int successes, int failures) {
  if (successes < 0 || failures < 0) {
    throw OedError(ErrorCode::InvalidArgument, "counts must be nonnegative");
  }
  return (prior.alpha + successes) / (prior.alpha + prior.beta + successes + failures);
}

}  // namespace oed
