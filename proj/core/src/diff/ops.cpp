// SPDX-License-Identifier: Apache-2.0

#include "flowsite/diff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace flowsite::diff {

namespace {

void require_same(const char* op, const Var& a, const Var& b) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string("shape mismatch in ") + op + ": " + a.shape().str() +
                                " vs " + b.shape().str());
  }
}

template <typename Fwd, typename Deriv>
Var unary(const Var& x, const char* op, Fwd fwd, Deriv deriv) {
  Array out(x.shape());
  const auto& xv = x.value().data;
  for (std::size_t i = 0; i < xv.size(); ++i) out.data[i] = fwd(xv[i]);
  return make_result(std::move(out), {x}, op, [x, deriv](detail::Node& self) {
    const auto& xv = x.value().data;
    const auto& yv = self.value.data;
    const auto& g = self.grad.data;
    accumulate(x, [&](std::size_t i) { return g[i] * deriv(xv[i], yv[i]); });
  });
}

Shape without_axis(const Shape& s, std::size_t axis) {
  std::vector<std::size_t> d = s.dims();
  d.erase(d.begin() + static_cast<std::ptrdiff_t>(axis));
  return Shape(d);
}

Shape with_axis(const Shape& s, std::size_t axis, std::size_t n) {
  std::vector<std::size_t> d = s.dims();
  d.insert(d.begin() + static_cast<std::ptrdiff_t>(axis), n);
  return Shape(d);
}

Shape replace_axis(const Shape& s, std::size_t axis, std::size_t n) {
  std::vector<std::size_t> d = s.dims();
  d[axis] = n;
  return Shape(d);
}

}  // namespace

Var add(const Var& a, const Var& b) {
  require_same("add", a, b);
  Array out(a.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = a.value().data[i] + b.value().data[i];
  return make_result(std::move(out), {a, b}, "add", [a, b](detail::Node& self) {
    const auto& g = self.grad.data;
    accumulate(a, [&](std::size_t i) { return g[i]; });
    accumulate(b, [&](std::size_t i) { return g[i]; });
  });
}

Var sub(const Var& a, const Var& b) {
  require_same("sub", a, b);
  Array out(a.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = a.value().data[i] - b.value().data[i];
  return make_result(std::move(out), {a, b}, "sub", [a, b](detail::Node& self) {
    const auto& g = self.grad.data;
    accumulate(a, [&](std::size_t i) { return g[i]; });
    accumulate(b, [&](std::size_t i) { return -g[i]; });
  });
}

Var mul(const Var& a, const Var& b) {
  require_same("mul", a, b);
  Array out(a.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = a.value().data[i] * b.value().data[i];
  return make_result(std::move(out), {a, b}, "mul", [a, b](detail::Node& self) {
    const auto& g = self.grad.data;
    const auto& av = a.value().data;
    const auto& bv = b.value().data;
    accumulate(a, [&](std::size_t i) { return g[i] * bv[i]; });
    accumulate(b, [&](std::size_t i) { return g[i] * av[i]; });
  });
}

Var div(const Var& a, const Var& b) {
  require_same("div", a, b);
  Array out(a.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = a.value().data[i] / b.value().data[i];
  return make_result(std::move(out), {a, b}, "div", [a, b](detail::Node& self) {
    const auto& g = self.grad.data;
    const auto& av = a.value().data;
    const auto& bv = b.value().data;
    accumulate(a, [&](std::size_t i) { return g[i] / bv[i]; });
    accumulate(b, [&](std::size_t i) { return -g[i] * av[i] / (bv[i] * bv[i]); });
  });
}

Var neg(const Var& x) { return scale(x, -1.0); }

Var scale(const Var& x, double c) {
  return unary(
      x, "scale", [c](double v) { return c * v; }, [c](double, double) { return c; });
}

Var add_scalar(const Var& x, double c) {
  return unary(
      x, "add_scalar", [c](double v) { return v + c; }, [](double, double) { return 1.0; });
}

Var mul_scalar(const Var& x, const Var& s) {
  if (s.numel() != 1) {
    throw std::invalid_argument("shape mismatch in mul_scalar: " + x.shape().str() + " vs " +
                                s.shape().str() + " (expected a single element)");
  }
  const double sv = s.value().data[0];
  Array out(x.shape());
  for (std::size_t i = 0; i < out.numel(); ++i) out.data[i] = x.value().data[i] * sv;
  return make_result(std::move(out), {x, s}, "mul_scalar", [x, s](detail::Node& self) {
    const auto& g = self.grad.data;
    const auto& xv = x.value().data;
    const double sv = s.value().data[0];
    accumulate(x, [&](std::size_t i) { return g[i] * sv; });
    double total = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) total += g[i] * xv[i];
    accumulate(s, [&](std::size_t) { return total; });
  });
}

Var matmul(const Var& a, const Var& b) {
  if (a.shape().rank() != 2 || b.shape().rank() != 2 || a.shape()[1] != b.shape()[0]) {
    throw std::invalid_argument("shape mismatch in matmul: " + a.shape().str() + " vs " +
                                b.shape().str());
  }
  const std::size_t n = a.shape()[0], k = a.shape()[1], m = b.shape()[1];
  Array out(Shape{n, m});
  const double* A = a.value().data.data();
  const double* B = b.value().data.data();
  double* C = out.data.data();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = A[i * k + p];
      if (aip == 0.0) continue;
      const double* brow = B + p * m;
      double* crow = C + i * m;
      for (std::size_t j = 0; j < m; ++j) crow[j] += aip * brow[j];
    }
  }
  return make_result(std::move(out), {a, b}, "matmul", [a, b, n, k, m](detail::Node& self) {
    const double* G = self.grad.data.data();
    const double* A = a.value().data.data();
    const double* B = b.value().data.data();
    if (a.requires_grad()) {
      a.node()->ensure_grad();
      double* GA = a.node()->grad.data.data();
      // dA = G B^T
      for (std::size_t i = 0; i < n; ++i) {
        const double* grow = G + i * m;
        for (std::size_t p = 0; p < k; ++p) {
          const double* brow = B + p * m;
          double acc = 0.0;
          for (std::size_t j = 0; j < m; ++j) acc += grow[j] * brow[j];
          GA[i * k + p] += acc;
        }
      }
    }
    if (b.requires_grad()) {
      b.node()->ensure_grad();
      double* GB = b.node()->grad.data.data();
      // dB = A^T G
      for (std::size_t i = 0; i < n; ++i) {
        const double* grow = G + i * m;
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = A[i * k + p];
          if (aip == 0.0) continue;
          double* gbrow = GB + p * m;
          for (std::size_t j = 0; j < m; ++j) gbrow[j] += aip * grow[j];
        }
      }
    }
  });
}

Var concat(const std::vector<Var>& parts, std::size_t axis) {
  if (parts.empty()) throw std::invalid_argument("concat of zero parts");
  const Shape& first = parts.front().shape();
  std::size_t total = 0;
  for (const auto& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.rank() == first.rank() && axis < s.rank();
    for (std::size_t d = 0; ok && d < s.rank(); ++d) ok = d == axis || s[d] == first[d];
    if (!ok) {
      throw std::invalid_argument("shape mismatch in concat: " + first.str() + " vs " + s.str());
    }
    total += s[axis];
  }
  const Shape out_shape = replace_axis(first, axis, total);
  const AxisSplit os = split_at(out_shape, axis);
  Array out(out_shape);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    offsets.push_back(offset);
    const AxisSplit ps = split_at(p.shape(), axis);
    const auto& pv = p.value().data;
    for (std::size_t o = 0; o < ps.outer; ++o) {
      std::copy_n(pv.begin() + static_cast<std::ptrdiff_t>(o * ps.mid * ps.inner), ps.mid * ps.inner,
                  out.data.begin() + static_cast<std::ptrdiff_t>((o * os.mid + offset) * os.inner));
    }
    offset += ps.mid;
  }
  return make_result(std::move(out), parts, "concat", [parts, offsets, os, axis](detail::Node& self) {
    const auto& g = self.grad.data;
    for (std::size_t q = 0; q < parts.size(); ++q) {
      const Var& p = parts[q];
      if (!p.requires_grad()) continue;
      const AxisSplit ps = split_at(p.shape(), axis);
      p.node()->ensure_grad();
      auto& pg = p.node()->grad.data;
      for (std::size_t o = 0; o < ps.outer; ++o) {
        const std::size_t src = (o * os.mid + offsets[q]) * os.inner;
        const std::size_t dst = o * ps.mid * ps.inner;
        for (std::size_t i = 0; i < ps.mid * ps.inner; ++i) pg[dst + i] += g[src + i];
      }
    }
  });
}

Var slice(const Var& x, std::size_t axis, std::size_t begin, std::size_t end) {
  const AxisSplit xs = split_at(x.shape(), axis);
  if (begin > end || end > xs.mid) {
    throw std::invalid_argument("slice [" + std::to_string(begin) + "," + std::to_string(end) +
                                ") out of range for shape " + x.shape().str());
  }
  const std::size_t len = end - begin;
  Array out(replace_axis(x.shape(), axis, len));
  const auto& xv = x.value().data;
  for (std::size_t o = 0; o < xs.outer; ++o) {
    std::copy_n(xv.begin() + static_cast<std::ptrdiff_t>((o * xs.mid + begin) * xs.inner),
                len * xs.inner,
                out.data.begin() + static_cast<std::ptrdiff_t>(o * len * xs.inner));
  }
  return make_result(std::move(out), {x}, "slice", [x, xs, begin, len](detail::Node& self) {
    if (!x.requires_grad()) return;
    x.node()->ensure_grad();
    auto& xg = x.node()->grad.data;
    const auto& g = self.grad.data;
    for (std::size_t o = 0; o < xs.outer; ++o) {
      for (std::size_t i = 0; i < len * xs.inner; ++i) {
        xg[(o * xs.mid + begin) * xs.inner + i] += g[o * len * xs.inner + i];
      }
    }
  });
}

Var reshape(const Var& x, Shape shape) {
  if (shape.numel() != x.numel()) {
    throw std::invalid_argument("shape mismatch in reshape: " + x.shape().str() + " vs " +
                                shape.str());
  }
  Array out(shape, x.value().data);
  return make_result(std::move(out), {x}, "reshape", [x](detail::Node& self) {
    const auto& g = self.grad.data;
    accumulate(x, [&](std::size_t i) { return g[i]; });
  });
}

Var sum(const Var& x, std::size_t axis) {
  const AxisSplit s = split_at(x.shape(), axis);
  Array out(without_axis(x.shape(), axis));
  const auto& xv = x.value().data;
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t m = 0; m < s.mid; ++m)
      for (std::size_t i = 0; i < s.inner; ++i)
        out.data[o * s.inner + i] += xv[(o * s.mid + m) * s.inner + i];
  return make_result(std::move(out), {x}, "sum", [x, s](detail::Node& self) {
    const auto& g = self.grad.data;
    accumulate(x, [&](std::size_t idx) {
      const std::size_t i = idx % s.inner;
      const std::size_t o = idx / (s.inner * s.mid);
      return g[o * s.inner + i];
    });
  });
}

Var mean(const Var& x, std::size_t axis) {
  const std::size_t n = split_at(x.shape(), axis).mid;
  return scale(sum(x, axis), n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
}

Var sum_all(const Var& x) {
  double total = 0.0;
  for (double v : x.value().data) total += v;
  return make_result(Array::scalar(total), {x}, "sum_all", [x](detail::Node& self) {
    const double g = self.grad.data[0];
    accumulate(x, [&](std::size_t) { return g; });
  });
}

Var mean_all(const Var& x) {
  return scale(sum_all(x), 1.0 / static_cast<double>(std::max<std::size_t>(1, x.numel())));
}

Var expand(const Var& x, std::size_t axis, std::size_t n) {
  if (axis > x.shape().rank()) {
    throw std::invalid_argument("expand axis " + std::to_string(axis) + " out of range for " +
                                x.shape().str());
  }
  const Shape out_shape = with_axis(x.shape(), axis, n);
  const AxisSplit s = split_at(out_shape, axis);
  Array out(out_shape);
  const auto& xv = x.value().data;
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t m = 0; m < s.mid; ++m)
      for (std::size_t i = 0; i < s.inner; ++i)
        out.data[(o * s.mid + m) * s.inner + i] = xv[o * s.inner + i];
  return make_result(std::move(out), {x}, "expand", [x, s](detail::Node& self) {
    if (!x.requires_grad()) return;
    x.node()->ensure_grad();
    auto& xg = x.node()->grad.data;
    const auto& g = self.grad.data;
    for (std::size_t o = 0; o < s.outer; ++o)
      for (std::size_t m = 0; m < s.mid; ++m)
        for (std::size_t i = 0; i < s.inner; ++i)
          xg[o * s.inner + i] += g[(o * s.mid + m) * s.inner + i];
  });
}

Var softmax(const Var& x, std::size_t axis) {
  const AxisSplit s = split_at(x.shape(), axis);
  Array out(x.shape());
  const auto& xv = x.value().data;
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t i = 0; i < s.inner; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < s.mid; ++m) mx = std::max(mx, xv[(o * s.mid + m) * s.inner + i]);
      double z = 0.0;
      for (std::size_t m = 0; m < s.mid; ++m) {
        const std::size_t k = (o * s.mid + m) * s.inner + i;
        out.data[k] = std::exp(xv[k] - mx);
        z += out.data[k];
      }
      for (std::size_t m = 0; m < s.mid; ++m) out.data[(o * s.mid + m) * s.inner + i] /= z;
    }
  }
  return make_result(std::move(out), {x}, "softmax", [x, s](detail::Node& self) {
    if (!x.requires_grad()) return;
    x.node()->ensure_grad();
    auto& xg = x.node()->grad.data;
    const auto& y = self.value.data;
    const auto& g = self.grad.data;
    for (std::size_t o = 0; o < s.outer; ++o) {
      for (std::size_t i = 0; i < s.inner; ++i) {
        double dotp = 0.0;
        for (std::size_t m = 0; m < s.mid; ++m) {
          const std::size_t k = (o * s.mid + m) * s.inner + i;
          dotp += g[k] * y[k];
        }
        for (std::size_t m = 0; m < s.mid; ++m) {
          const std::size_t k = (o * s.mid + m) * s.inner + i;
          xg[k] += y[k] * (g[k] - dotp);
        }
      }
    }
  });
}

Var log_softmax(const Var& x, std::size_t axis) {
  const AxisSplit s = split_at(x.shape(), axis);
  Array out(x.shape());
  const auto& xv = x.value().data;
  for (std::size_t o = 0; o < s.outer; ++o) {
    for (std::size_t i = 0; i < s.inner; ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < s.mid; ++m) mx = std::max(mx, xv[(o * s.mid + m) * s.inner + i]);
      double z = 0.0;
      for (std::size_t m = 0; m < s.mid; ++m) z += std::exp(xv[(o * s.mid + m) * s.inner + i] - mx);
      const double lse = mx + std::log(z);
      for (std::size_t m = 0; m < s.mid; ++m) {
        const std::size_t k = (o * s.mid + m) * s.inner + i;
        out.data[k] = xv[k] - lse;
      }
    }
  }
  return make_result(std::move(out), {x}, "log_softmax", [x, s](detail::Node& self) {
    if (!x.requires_grad()) return;
    x.node()->ensure_grad();
    auto& xg = x.node()->grad.data;
    const auto& y = self.value.data;
    const auto& g = self.grad.data;
    for (std::size_t o = 0; o < s.outer; ++o) {
      for (std::size_t i = 0; i < s.inner; ++i) {
        double gs = 0.0;
        for (std::size_t m = 0; m < s.mid; ++m) gs += g[(o * s.mid + m) * s.inner + i];
        for (std::size_t m = 0; m < s.mid; ++m) {
          const std::size_t k = (o * s.mid + m) * s.inner + i;
          xg[k] += g[k] - std::exp(y[k]) * gs;
        }
      }
    }
  });
}

Var silu(const Var& x) {
  return unary(
      x, "silu", [](double v) { return v / (1.0 + std::exp(-v)); },
      [](double v, double) {
        const double sg = 1.0 / (1.0 + std::exp(-v));
        return sg * (1.0 + v * (1.0 - sg));
      });
}

Var relu(const Var& x) {
  return unary(
      x, "relu", [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var exp(const Var& x) {
  return unary(
      x, "exp", [](double v) { return std::exp(v); }, [](double, double y) { return y; });
}

Var log(const Var& x) {
  return unary(
      x, "log", [](double v) { return std::log(v); }, [](double v, double) { return 1.0 / v; });
}

Var sin(const Var& x) {
  return unary(
      x, "sin", [](double v) { return std::sin(v); }, [](double v, double) { return std::cos(v); });
}

Var cos(const Var& x) {
  return unary(
      x, "cos", [](double v) { return std::cos(v); }, [](double v, double) { return -std::sin(v); });
}

Var sqrt(const Var& x) {
  return unary(
      x, "sqrt", [](double v) { return std::sqrt(v); },
      [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Var square(const Var& x) {
  return unary(
      x, "square", [](double v) { return v * v; }, [](double v, double) { return 2.0 * v; });
}

Var abs(const Var& x) {
  return unary(
      x, "abs", [](double v) { return std::fabs(v); },
      [](double v, double) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); });
}

Var layer_norm(const Var& x, double eps) {
  const std::size_t last = x.shape().rank() - 1;
  const std::size_t width = x.shape()[last];
  const Var centered = sub(x, expand(mean(x, last), last, width));
  const Var var = mean(square(centered), last);
  const Var inv_std = unary(
      add_scalar(var, eps), "rsqrt", [](double v) { return 1.0 / std::sqrt(v); },
      [](double v, double y) { return -0.5 * y / v; });
  return mul(centered, expand(inv_std, last, width));
}

Var norm(const Var& x, std::size_t axis) {
  const AxisSplit s = split_at(x.shape(), axis);
  Array out(without_axis(x.shape(), axis));
  const auto& xv = x.value().data;
  for (std::size_t o = 0; o < s.outer; ++o)
    for (std::size_t i = 0; i < s.inner; ++i) {
      double acc = 0.0;
      for (std::size_t m = 0; m < s.mid; ++m) {
        const double v = xv[(o * s.mid + m) * s.inner + i];
        acc += v * v;
      }
      out.data[o * s.inner + i] = std::sqrt(acc);
    }
  return make_result(std::move(out), {x}, "norm", [x, s](detail::Node& self) {
    const auto& xv = x.value().data;
    const auto& y = self.value.data;
    const auto& g = self.grad.data;
    accumulate(x, [&](std::size_t idx) {
      const std::size_t i = idx % s.inner;
      const std::size_t o = idx / (s.inner * s.mid);
      const double n = y[o * s.inner + i];
      return n > 0.0 ? g[o * s.inner + i] * xv[idx] / n : 0.0;
    });
  });
}

Var cross(const Var& a, const Var& b, std::size_t axis) {
  require_same("cross", a, b);
  const AxisSplit s = split_at(a.shape(), axis);
  if (s.mid != 3) {
    throw std::invalid_argument("cross needs extent 3 on axis " + std::to_string(axis) + ", got " +
                                a.shape().str());
  }
  auto apply = [s](const std::vector<double>& u, const std::vector<double>& v,
                   std::vector<double>& w, double sign) {
    for (std::size_t o = 0; o < s.outer; ++o)
      for (std::size_t i = 0; i < s.inner; ++i) {
        const std::size_t b0 = o * 3 * s.inner + i;
        const double* up[3] = {&u[b0], &u[b0 + s.inner], &u[b0 + 2 * s.inner]};
        const double* vp[3] = {&v[b0], &v[b0 + s.inner], &v[b0 + 2 * s.inner]};
        w[b0] += sign * (*up[1] * *vp[2] - *up[2] * *vp[1]);
        w[b0 + s.inner] += sign * (*up[2] * *vp[0] - *up[0] * *vp[2]);
        w[b0 + 2 * s.inner] += sign * (*up[0] * *vp[1] - *up[1] * *vp[0]);
      }
  };
  Array out(a.shape());
  apply(a.value().data, b.value().data, out.data, 1.0);
  return make_result(std::move(out), {a, b}, "cross", [a, b, apply](detail::Node& self) {
    // d(a x b) with upstream g: grad_a = b x g, grad_b = g x a.
    if (a.requires_grad()) {
      a.node()->ensure_grad();
      apply(b.value().data, self.grad.data, a.node()->grad.data, 1.0);
    }
    if (b.requires_grad()) {
      b.node()->ensure_grad();
      apply(self.grad.data, a.value().data, b.node()->grad.data, 1.0);
    }
  });
}

Var dot(const Var& a, const Var& b, std::size_t axis) {
  require_same("dot", a, b);
  return sum(mul(a, b), axis);
}

Var gather_rows(const Var& x, const std::vector<std::size_t>& index) {
  if (x.shape().rank() == 0) throw std::invalid_argument("gather_rows on a scalar");
  const std::size_t rows = x.shape()[0];
  const std::size_t width = x.numel() / std::max<std::size_t>(1, rows);
  for (std::size_t r : index) {
    if (r >= rows) {
      throw std::invalid_argument("gather_rows index " + std::to_string(r) + " out of range for " +
                                  x.shape().str());
    }
  }
  Array out(replace_axis(x.shape(), 0, index.size()));
  const auto& xv = x.value().data;
  for (std::size_t e = 0; e < index.size(); ++e)
    std::copy_n(xv.begin() + static_cast<std::ptrdiff_t>(index[e] * width), width,
                out.data.begin() + static_cast<std::ptrdiff_t>(e * width));
  return make_result(std::move(out), {x}, "gather_rows", [x, index, width](detail::Node& self) {
    if (!x.requires_grad()) return;
    x.node()->ensure_grad();
    auto& xg = x.node()->grad.data;
    const auto& g = self.grad.data;
    for (std::size_t e = 0; e < index.size(); ++e)
      for (std::size_t c = 0; c < width; ++c) xg[index[e] * width + c] += g[e * width + c];
  });
}

Var scatter_add_rows(const Var& x, const std::vector<std::size_t>& index, std::size_t rows) {
  if (x.shape().rank() == 0 || x.shape()[0] != index.size()) {
    throw std::invalid_argument("shape mismatch in scatter_add_rows: " + x.shape().str() + " vs " +
                                std::to_string(index.size()) + " indices");
  }
  const std::size_t width = x.numel() / std::max<std::size_t>(1, index.size());
  Array out(replace_axis(x.shape(), 0, rows));
  const auto& xv = x.value().data;
  for (std::size_t e = 0; e < index.size(); ++e) {
    if (index[e] >= rows) {
      throw std::invalid_argument("scatter_add_rows index " + std::to_string(index[e]) +
                                  " out of range for " + std::to_string(rows) + " rows");
    }
    for (std::size_t c = 0; c < width; ++c) out.data[index[e] * width + c] += xv[e * width + c];
  }
  return make_result(std::move(out), {x}, "scatter_add_rows", [x, index, width](detail::Node& self) {
    const auto& g = self.grad.data;
    accumulate(x, [&](std::size_t k) { return g[index[k / width] * width + k % width]; });
  });
}

Var segment_softmax(const Var& scores, const std::vector<std::size_t>& segment,
                    std::size_t segments) {
  if (scores.shape().rank() != 1 || scores.numel() != segment.size()) {
    throw std::invalid_argument("shape mismatch in segment_softmax: " + scores.shape().str() +
                                " vs " + std::to_string(segment.size()) + " segment ids");
  }
  const auto& w = scores.value().data;
  std::vector<double> mx(segments, -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < w.size(); ++e) mx[segment[e]] = std::max(mx[segment[e]], w[e]);
  std::vector<double> z(segments, 0.0);
  Array out(scores.shape());
  for (std::size_t e = 0; e < w.size(); ++e) {
    out.data[e] = std::exp(w[e] - mx[segment[e]]);
    z[segment[e]] += out.data[e];
  }
  for (std::size_t e = 0; e < w.size(); ++e) out.data[e] /= z[segment[e]];
  return make_result(std::move(out), {scores}, "segment_softmax",
                     [scores, segment, segments](detail::Node& self) {
                       const auto& y = self.value.data;
                       const auto& g = self.grad.data;
                       std::vector<double> dotp(segments, 0.0);
                       for (std::size_t e = 0; e < y.size(); ++e) dotp[segment[e]] += g[e] * y[e];
                       accumulate(scores,
                                  [&](std::size_t e) { return y[e] * (g[e] - dotp[segment[e]]); });
                     });
}

}  // namespace flowsite::diff
