#pragma once

// Canonical string forms for experiment and response values. Report ordering,
// tie-breaking and CSV output all go through toKey().

#include <concepts>
#include <string>
#include <vector>

namespace oed {

/// Per-item success counts (or 0/1 labels for a single participant).
using CountVector = std::vector<int>;

inline std::string toKey(int v) { return std::to_string(v); }
inline std::string toKey(const std::string& v) { return v; }
std::string toKey(double v);
std::string toKey(const CountVector& v);

template <class T>
concept Keyed = requires(const T& v) {
  { toKey(v) } -> std::convertible_to<std::string>;
};

}  // namespace oed
