// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "flowsite/diff/adam.hpp"
#include "flowsite/diff/ops.hpp"

namespace flowsite::net {

using diff::Array;
using diff::Parameter;
using diff::ParameterStore;
using diff::Shape;
using diff::Var;

/// Evenly spaced Gaussian radial basis on [lo, hi]; width equals the spacing.
struct RbfSpec {
  double lo = 0.0;
  double hi = 50.0;
  std::size_t count = 32;

  double width() const { return count > 1 ? (hi - lo) / static_cast<double>(count - 1) : 1.0; }
  double center(std::size_t i) const { return lo + width() * static_cast<double>(i); }
};

/// g_i = exp(-(d - c_i)^2 / (2 w^2)), written to out[0..count).
void rbf_embed(double d, const RbfSpec& spec, double* out);
std::vector<double> rbf_embed(double d, const RbfSpec& spec);

/// Dense affine map over the last axis of a (rows, in) input.
struct Linear {
  Parameter* weight = nullptr;  // (in, out)
  Parameter* bias = nullptr;    // (out) or absent
  std::size_t in = 0;
  std::size_t out = 0;

  /// Weights ~ N(0, gain^2 / in); bias zero.
  static Linear create(ParameterStore& store, const std::string& name, std::size_t in, std::size_t out,
                       std::mt19937_64& rng, bool with_bias = true, double gain = 1.0);

  Var operator()(const Var& x) const;
};

/// Linear -> SiLU -> Linear.
struct Mlp {
  Linear first;
  Linear second;

  static Mlp create(ParameterStore& store, const std::string& name, std::size_t in, std::size_t hidden,
                    std::size_t out, std::mt19937_64& rng, double out_gain = 1.0);

  Var operator()(const Var& x) const { return second(diff::silu(first(x))); }
};

/// Broadcasts a per-row constant weight over the trailing axes of x.
Var scale_rows(const Var& x, const std::vector<double>& per_row);

/// Adds a (cols) bias to every row of a (rows, cols) input.
Var add_row_bias(const Var& x, const Var& bias);

}  // namespace flowsite::net
