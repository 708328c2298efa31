// SPDX-License-Identifier: Apache-2.0

#include "flowsite/net/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace flowsite::net {

void rbf_embed(double d, const RbfSpec& spec, double* out) {
  const double w = spec.width();
  const double inv = 1.0 / (2.0 * w * w);
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double z = d - spec.center(i);
    out[i] = std::exp(-z * z * inv);
  }
}

std::vector<double> rbf_embed(double d, const RbfSpec& spec) {
  std::vector<double> out(spec.count);
  rbf_embed(d, spec, out.data());
  return out;
}

Linear Linear::create(ParameterStore& store, const std::string& name, std::size_t in, std::size_t out,
                      std::mt19937_64& rng, bool with_bias, double gain) {
  Linear l;
  l.in = in;
  l.out = out;
  Array w(Shape{in, out});
  std::normal_distribution<double> normal(0.0, gain / std::sqrt(static_cast<double>(in)));
  for (double& v : w.data) v = normal(rng);
  l.weight = &store.add(name + ".weight", std::move(w));
  if (with_bias) l.bias = &store.add(name + ".bias", Array(Shape{out}));
  return l;
}

Var Linear::operator()(const Var& x) const {
  if (x.shape().rank() != 2 || x.shape()[1] != in) {
    throw std::invalid_argument("shape mismatch in linear: " + x.shape().str() + " vs " +
                                weight->node.shape().str());
  }
  Var y = diff::matmul(x, weight->node);
  return bias ? add_row_bias(y, bias->node) : y;
}

Mlp Mlp::create(ParameterStore& store, const std::string& name, std::size_t in, std::size_t hidden,
                std::size_t out, std::mt19937_64& rng, double out_gain) {
  Mlp m;
  m.first = Linear::create(store, name + ".0", in, hidden, rng);
  m.second = Linear::create(store, name + ".1", hidden, out, rng, true, out_gain);
  return m;
}

Var scale_rows(const Var& x, const std::vector<double>& per_row) {
  const Shape& s = x.shape();
  if (s.rank() == 0 || s[0] != per_row.size()) {
    throw std::invalid_argument("shape mismatch in scale_rows: " + s.str() + " vs " +
                                std::to_string(per_row.size()) + " rows");
  }
  Array w(s);
  const std::size_t width = s.numel() / std::max<std::size_t>(1, s[0]);
  for (std::size_t r = 0; r < per_row.size(); ++r)
    for (std::size_t c = 0; c < width; ++c) w.data[r * width + c] = per_row[r];
  return diff::mul(x, diff::constant(std::move(w)));
}

Var add_row_bias(const Var& x, const Var& bias) {
  return diff::add(x, diff::expand(bias, 0, x.shape()[0]));
}

}  // namespace flowsite::net
