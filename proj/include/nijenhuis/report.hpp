#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace nij {

/// One failed identity: law id, the basis tuple it failed on, and both evaluated sides.
struct Violation {
  std::string law;
  std::vector<std::size_t> tuple;
  Vector lhs;
  Vector rhs;
};

struct Report {
  std::vector<std::string> laws;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool ok() const { return violations.empty(); }

  void add_law(const std::string& law) {
    for (const auto& l : laws)
      if (l == law) return;
    laws.push_back(law);
  }

  void merge(const Report& other) {
    for (const auto& l : other.laws) add_law(l);
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  }

  /// Records a violation when lhs != rhs.
  void check(const std::string& law, std::vector<std::size_t> tuple, Vector lhs, Vector rhs) {
    if (lhs != rhs) violations.push_back({law, std::move(tuple), std::move(lhs), std::move(rhs)});
  }

  std::string summary() const {
    if (ok()) return "ok (" + std::to_string(laws.size()) + " laws)";
    std::string s = std::to_string(violations.size()) + " violation(s); first: " +
                    violations.front().law + " at (";
    for (std::size_t i = 0; i < violations.front().tuple.size(); ++i)
      s += (i ? "," : "") + std::to_string(violations.front().tuple[i]);
    return s + ")";
  }
};

}  // namespace nij
