#include "oed/model.hpp"

#include <cmath>

namespace oed {
namespace {

std::size_t supportSize(std::size_t items, int n, std::size_t maxSupport) {
  if (n < 1) throw OedError(ErrorCode::InvalidArgument, "group size must be at least 1");
  std::size_t size = 1;
  for (std::size_t k = 0; k < items; ++k) {
    if (size > maxSupport / static_cast<std::size_t>(n + 1)) {
      throw OedError(ErrorCode::SupportTooLarge, "count-vector space exceeds " + std::to_string(maxSupport));
    }
    size *= static_cast<std::size_t>(n + 1);
  }
  return size;
}

double totalWeight(const std::vector<ItemMixtureComponent>& components) {
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw OedError(ErrorCode::InvalidArgument, "mixture weights must be nonnegative");
    total += c.weight;
  }
  if (!(total > 0.0)) throw OedError(ErrorCode::AllZeroWeights, "mixture has no weight");
  return total;
}

std::size_t itemCount(const std::vector<ItemMixtureComponent>& components) {
  if (components.empty()) throw OedError(ErrorCode::InvalidArgument, "model has no mixture components");
  const std::size_t items = components.front().items.size();
  for (const auto& c : components) {
    if (c.items.size() != items) throw OedError(ErrorCode::LengthMismatch, "components disagree on item count");
  }
  return items;
}

}  // namespace

std::vector<double> enumerateCountVectorProbabilities(const std::vector<ItemMixtureComponent>& components, int n,
                                                      std::size_t maxSupport) {
  const std::size_t items = itemCount(components);
  const std::size_t size = supportSize(items, n, maxSupport);
  const double total = totalWeight(components);

  std::vector<double> out(size, 0.0);
  std::vector<double> joint;
  std::vector<double> next;
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1);
  for (const auto& comp : components) {
    if (comp.weight == 0.0) continue;
    joint.assign(1, comp.weight / total);
    for (double p : comp.items) {
      for (int c = 0; c <= n; ++c) pmf[static_cast<std::size_t>(c)] = binomialPmf(n, p, c);
      next.resize(joint.size() * pmf.size());
      for (std::size_t i = 0; i < joint.size(); ++i) {
        for (std::size_t c = 0; c < pmf.size(); ++c) next[i * pmf.size() + c] = joint[i] * pmf[c];
      }
      joint.swap(next);
    }
    for (std::size_t i = 0; i < size; ++i) out[i] += joint[i];
  }
  return out;
}

CountVector decodeCountVector(std::size_t index, std::size_t items, int n) {
  CountVector out(items, 0);
  const auto base = static_cast<std::size_t>(n + 1);
  for (std::size_t k = items; k-- > 0;) {
    out[k] = static_cast<int>(index % base);
    index /= base;
  }
  return out;
}

double countVectorLikelihood(const std::vector<ItemMixtureComponent>& components, int n, const CountVector& counts) {
  const std::size_t items = itemCount(components);
  if (counts.size() != items) throw OedError(ErrorCode::LengthMismatch, "count vector length does not match items");
  const double total = totalWeight(components);
  double out = 0.0;
  for (const auto& comp : components) {
    double prod = comp.weight / total;
    for (std::size_t k = 0; k < items && prod > 0.0; ++k) {
      if (counts[k] < 0 || counts[k] > n) return 0.0;
      prod *= binomialPmf(n, comp.items[k], counts[k]);
    }
    out += prod;
  }
  return out;
}

std::vector<CountVector> countVectorSpace(std::size_t items, int n, std::size_t maxSupport) {
  const std::size_t size = supportSize(items, n, maxSupport);
  std::vector<CountVector> out;
  out.reserve(size);
  for (std::size_t i = 0; i < size; ++i) out.push_back(decodeCountVector(i, items, n));
  return out;
}

}  // namespace oed
