// SPDX-License-Identifier: Apache-2.0

#include "flowsite/diff/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace flowsite::diff {

Parameter::Parameter(std::string n, Array init) : name(std::move(n)), node(variable(std::move(init))) {
  adam.m = Array(node.shape(), 0.0);
  adam.v = Array(node.shape(), 0.0);
}

Parameter& ParameterStore::add(const std::string& name, Array init) {
  if (find(name) != nullptr) throw std::invalid_argument("duplicate parameter name: " + name);
  params_.push_back(std::make_unique<Parameter>(name, std::move(init)));
  return *params_.back();
}

Parameter* ParameterStore::find(const std::string& name) {
  for (auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

const Parameter* ParameterStore::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p->name == name) return p.get();
  return nullptr;
}

std::vector<Parameter*> ParameterStore::all() {
  std::vector<Parameter*> out;
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter*> ParameterStore::all() const {
  std::vector<const Parameter*> out;
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->node.numel();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p->node.zero_grad();
}

std::size_t adam_update(const std::vector<Parameter*>& params, const AdamOptions& o) {
  std::size_t skipped = 0;
  for (Parameter* p : params) {
    if (!p->node.has_grad()) continue;
    const Array g = p->node.grad();
    bool finite = true;
    for (double v : g.data) finite = finite && !std::isnan(v);
    if (!finite) {
      ++skipped;
      p->node.zero_grad();
      continue;
    }
    AdamState& s = p->adam;
    ++s.step;
    const double bc1 = 1.0 - std::pow(o.beta1, static_cast<double>(s.step));
    const double bc2 = 1.0 - std::pow(o.beta2, static_cast<double>(s.step));
    auto& w = p->node.mutable_value().data;
    for (std::size_t i = 0; i < w.size(); ++i) {
      s.m.data[i] = o.beta1 * s.m.data[i] + (1.0 - o.beta1) * g.data[i];
      s.v.data[i] = o.beta2 * s.v.data[i] + (1.0 - o.beta2) * g.data[i] * g.data[i];
      const double m_hat = s.m.data[i] / bc1;
      const double v_hat = s.v.data[i] / bc2;
      w[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
    p->node.zero_grad();
  }
  return skipped;
}

}  // namespace flowsite::diff
