// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "flowsite/diff/ops.hpp"

namespace flowsite::testing {

using namespace flowsite::diff;

inline Array random_array(Shape s, std::mt19937_64& rng, double lo = -1.5, double hi = 1.5) {
  std::uniform_real_distribution<double> u(lo, hi);
  Array a(s);
  for (double& v : a.data) v = u(rng);
  return a;
}

// Random fixed weights turn any op into a scalar so every output slot is probed.
inline Var weighted_sum(const Var& y, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sum_all(mul(y, constant(random_array(y.shape(), rng))));
}

struct OpCase {
  std::string name;
  Shape input;
  std::function<Var(const Var&)> op;
  double lo = -1.5;
  double hi = 1.5;
};

inline std::vector<OpCase> op_cases() {
  std::mt19937_64 rng(99);
  const Array other = random_array(Shape{3, 4}, rng);
  const Array right = random_array(Shape{4, 2}, rng);
  const Array vec3 = random_array(Shape{5, 3}, rng);
  const Array vec3c = random_array(Shape{2, 3, 4}, rng);
  const Array denom = random_array(Shape{3, 4}, rng, 0.5, 2.0);
  return {
      {"add", Shape{3, 4}, [other](const Var& x) { return add(x, constant(other)); }},
      {"sub", Shape{3, 4}, [other](const Var& x) { return sub(constant(other), x); }},
      {"mul", Shape{3, 4}, [other](const Var& x) { return mul(x, constant(other)); }},
      {"mul_self", Shape{3, 4}, [](const Var& x) { return mul(x, x); }},
      {"div", Shape{3, 4}, [denom](const Var& x) { return div(x, constant(denom)); }},
      {"div_denominator", Shape{3, 4}, [other](const Var& x) { return div(constant(other), x); },
       0.5, 2.0},
      {"scale", Shape{3, 4}, [](const Var& x) { return scale(x, -2.5); }},
      {"add_scalar", Shape{3, 4}, [](const Var& x) { return square(add_scalar(x, 0.3)); }},
      {"mul_scalar", Shape{3, 4},
       [other](const Var& x) { return mul_scalar(x, slice(reshape(x, Shape{12}), 0, 5, 6)); }},
      {"matmul_left", Shape{3, 4}, [right](const Var& x) { return matmul(x, constant(right)); }},
      {"matmul_right", Shape{4, 2}, [other](const Var& x) { return matmul(constant(other), x); }},
      {"concat", Shape{3, 4},
       [other](const Var& x) { return concat({x, constant(other), square(x)}, 1); }},
      {"slice", Shape{3, 4}, [](const Var& x) { return slice(x, 1, 1, 3); }},
      {"reshape", Shape{3, 4}, [](const Var& x) { return reshape(x, Shape{2, 6}); }},
      {"sum", Shape{2, 3, 4}, [](const Var& x) { return square(sum(x, 1)); }},
      {"mean", Shape{2, 3, 4}, [](const Var& x) { return square(mean(x, 2)); }},
      {"sum_all", Shape{3, 4}, [](const Var& x) { return square(sum_all(x)); }},
      {"expand", Shape{3, 4}, [](const Var& x) { return square(expand(x, 1, 3)); }},
      {"softmax", Shape{3, 4}, [](const Var& x) { return softmax(x, 1); }},
      {"softmax_axis0", Shape{2, 3, 4}, [](const Var& x) { return softmax(x, 0); }},
      {"log_softmax", Shape{3, 4}, [](const Var& x) { return log_softmax(x, 1); }},
      {"silu", Shape{3, 4}, [](const Var& x) { return silu(x); }},
      {"relu", Shape{3, 4}, [](const Var& x) { return relu(x); }},
      {"exp", Shape{3, 4}, [](const Var& x) { return exp(x); }},
      {"log", Shape{3, 4}, [](const Var& x) { return log(x); }, 0.3, 3.0},
      {"sin", Shape{3, 4}, [](const Var& x) { return sin(x); }},
      {"cos", Shape{3, 4}, [](const Var& x) { return cos(x); }},
      {"sqrt", Shape{3, 4}, [](const Var& x) { return sqrt(x); }, 0.3, 3.0},
      {"abs", Shape{3, 4}, [](const Var& x) { return abs(x); }},
      {"layer_norm", Shape{3, 4}, [](const Var& x) { return layer_norm(x); }},
      {"norm", Shape{5, 3}, [](const Var& x) { return norm(x, 1); }},
      {"norm_mid", Shape{2, 3, 4}, [](const Var& x) { return norm(x, 1); }},
      {"cross", Shape{5, 3}, [vec3](const Var& x) { return cross(x, constant(vec3), 1); }},
      {"cross_self_mixed", Shape{2, 3, 4},
       [vec3c](const Var& x) { return cross(constant(vec3c), mul(x, x), 1); }},
      {"dot", Shape{5, 3}, [vec3](const Var& x) { return dot(x, constant(vec3), 1); }},
      {"gather_rows", Shape{3, 4},
       [](const Var& x) { return gather_rows(x, {2, 0, 2, 1, 2}); }},
      {"scatter_add_rows", Shape{5, 3},
       [](const Var& x) { return scatter_add_rows(x, {1, 0, 1, 3, 1}, 4); }},
      {"segment_softmax", Shape{6},
       [](const Var& x) { return segment_softmax(x, {0, 1, 0, 0, 2, 1}, 3); }},
  };
}

}  // namespace flowsite::testing
