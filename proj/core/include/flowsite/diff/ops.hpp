// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "flowsite/diff/var.hpp"

// The differentiable op set. Shapes must conform exactly: the only implicit
// broadcast is by a scalar (scale, add_scalar, mul_scalar). Everything else
// that would broadcast goes through expand().

namespace flowsite::diff {

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var div(const Var& a, const Var& b);
Var neg(const Var& x);

Var scale(const Var& x, double c);
Var add_scalar(const Var& x, double c);
/// x * s where s holds a single element.
Var mul_scalar(const Var& x, const Var& s);

/// (n, k) x (k, m) -> (n, m).
Var matmul(const Var& a, const Var& b);

Var concat(const std::vector<Var>& parts, std::size_t axis);
Var slice(const Var& x, std::size_t axis, std::size_t begin, std::size_t end);
Var reshape(const Var& x, Shape shape);

/// Reductions drop the reduced axis.
Var sum(const Var& x, std::size_t axis);
Var mean(const Var& x, std::size_t axis);
Var sum_all(const Var& x);
Var mean_all(const Var& x);

/// Inserts a new axis of extent n at `axis`, repeating x along it.
Var expand(const Var& x, std::size_t axis, std::size_t n);

Var softmax(const Var& x, std::size_t axis);
Var log_softmax(const Var& x, std::size_t axis);

Var silu(const Var& x);
Var relu(const Var& x);
Var exp(const Var& x);
Var log(const Var& x);
Var sin(const Var& x);
Var cos(const Var& x);
Var sqrt(const Var& x);
Var square(const Var& x);
Var abs(const Var& x);

/// Normalizes over the last axis to zero mean and unit variance (no affine).
Var layer_norm(const Var& x, double eps = 1e-5);

/// Euclidean norm along `axis` (gradient taken as zero at the origin).
Var norm(const Var& x, std::size_t axis);

/// Cross product of 3-vectors laid out along `axis` (extent 3).
Var cross(const Var& a, const Var& b, std::size_t axis);
Var dot(const Var& a, const Var& b, std::size_t axis);

/// Row gather along axis 0: out[e] = x[index[e]].
Var gather_rows(const Var& x, const std::vector<std::size_t>& index);
/// Row scatter-sum along axis 0 into `rows` rows: out[index[e]] += x[e].
Var scatter_add_rows(const Var& x, const std::vector<std::size_t>& index, std::size_t rows);
/// Softmax of a rank-1 score vector within each segment.
Var segment_softmax(const Var& scores, const std::vector<std::size_t>& segment,
                    std::size_t segments);

}  // namespace flowsite::diff
