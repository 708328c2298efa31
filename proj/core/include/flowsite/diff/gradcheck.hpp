// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flowsite/diff/adam.hpp"
#include "flowsite/diff/var.hpp"

namespace flowsite::diff {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  /// Set when either estimate produced a NaN; holds the coordinate index.
  std::optional<std::size_t> nan_index;

  bool ok(double tolerance) const { return !nan_index && max_rel_error < tolerance; }
  std::string describe() const;
};

/// Compares backward() against central differences coordinate by coordinate:
/// max |analytic - fd| / (|analytic| + 1e-8).
GradCheckResult finite_difference_check(const std::function<Var(const Var&)>& f,
                                        const Array& point, double h = 1e-5);

/// Same comparison for a loss over a parameter set, taken along `directions`
/// (one random direction per entry, each the size of the concatenated
/// parameters). Parameter values are restored afterwards.
GradCheckResult directional_check(const std::function<Var()>& loss,
                                  const std::vector<Parameter*>& params,
                                  const std::vector<std::vector<double>>& directions,
                                  double h = 1e-5);

}  // namespace flowsite::diff
