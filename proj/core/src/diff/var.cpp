// SPDX-License-Identifier: Apache-2.0

#include "flowsite/diff/var.hpp"

#include <stdexcept>
#include <unordered_set>

namespace flowsite::diff {

namespace {
thread_local bool g_grad_enabled = true;
}

void detail::Node::ensure_grad() {
  if (!grad_ready) {
    grad = Array(value.shape, 0.0);
    grad_ready = true;
  }
}

double Var::item() const {
  if (numel() != 1) {
    throw std::invalid_argument("item() on non-scalar of shape " + shape().str());
  }
  return node_->value.data[0];
}

Array Var::grad() const {
  if (node_->grad_ready) return node_->grad;
  return Array(node_->value.shape, 0.0);
}

void Var::zero_grad() {
  node_->grad = Array();
  node_->grad.data.clear();
  node_->grad_ready = false;
}

Var constant(Array value) {
  auto n = std::make_shared<detail::Node>();
  n->value = std::move(value);
  n->op = "constant";
  return Var(std::move(n));
}

Var variable(Array value) {
  auto n = std::make_shared<detail::Node>();
  n->value = std::move(value);
  n->requires_grad = true;
  n->op = "variable";
  return Var(std::move(n));
}

Var detach(const Var& x) {
  auto n = std::make_shared<detail::Node>();
  n->value = x.value();
  n->detached = true;
  n->op = "detach";
  return Var(std::move(n));
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool grad_enabled() { return g_grad_enabled; }

Var make_result(Array value, std::vector<Var> parents, const char* op,
                std::function<void(detail::Node&)> backward_fn) {
  auto n = std::make_shared<detail::Node>();
  n->value = std::move(value);
  n->op = op;
  bool any = false;
  if (g_grad_enabled) {
    for (const auto& p : parents) any = any || p.requires_grad();
  }
  if (any) {
    n->requires_grad = true;
    n->parents.reserve(parents.size());
    for (const auto& p : parents) n->parents.push_back(p.shared());
    n->backward = std::move(backward_fn);
  }
  return Var(std::move(n));
}

void backward(const Var& root) {
  if (root.numel() != 1) {
    throw std::invalid_argument("backward() needs a scalar root, got shape " +
                                root.shape().str());
  }
  if (!root.requires_grad()) return;

  // Iterative post-order DFS gives a topological order (parents first).
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  stack.emplace_back(root.node(), 0);
  seen.insert(root.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::Node* p = node->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  root.node()->ensure_grad();
  root.node()->grad.data[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    n->ensure_grad();
    if (n->backward) n->backward(*n);
  }
}

}  // namespace flowsite::diff
