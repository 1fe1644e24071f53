#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace chainkit {

/// Outcome of one structural property check. On failure `witness` holds the
/// offending indices (points or levels, depending on the property).
struct PropertyCheck {
  std::string name;
  bool pass = true;
  std::string detail;
  std::vector<long long> witness;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
  }
  const PropertyCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace chainkit
