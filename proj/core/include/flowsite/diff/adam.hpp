// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "flowsite/diff/var.hpp"

namespace flowsite::diff {

struct AdamState {
  Array m;
  Array v;
  std::int64_t step = 0;
};

/// Named trainable array with its optimizer moments.
struct Parameter {
  std::string name;
  Var node;
  AdamState adam;

  Parameter(std::string n, Array init);
};

/// Owns parameters with stable addresses, in registration order.
class ParameterStore {
 public:
  Parameter& add(const std::string& name, Array init);
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;
  void zero_grad();

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

struct AdamOptions {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected Adam step over every parameter, then zeroes gradients.
/// Parameters whose gradient holds a NaN are left untouched; the return value
/// counts them.
std::size_t adam_update(const std::vector<Parameter*>& params, const AdamOptions& options = {});

}  // namespace flowsite::diff
