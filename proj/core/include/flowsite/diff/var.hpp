// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "flowsite/diff/array.hpp"

namespace flowsite::diff {

namespace detail {

struct Node {
  Array value;
  Array grad;  // empty (numel 0 data) until touched by a backward pass
  bool grad_ready = false;
  bool requires_grad = false;
  bool detached = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  void ensure_grad();
};

}  // namespace detail

/// Handle to a node of the computation record. Copies share the node.
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

  bool defined() const { return node_ != nullptr; }
  const Array& value() const { return node_->value; }
  Array& mutable_value() { return node_->value; }
  const Shape& shape() const { return node_->value.shape; }
  std::size_t numel() const { return node_->value.numel(); }
  double item() const;

  /// Gradient accumulated by backward(); zeros when none reached this node.
  Array grad() const;
  bool has_grad() const { return node_->grad_ready; }
  void zero_grad();

  bool requires_grad() const { return node_->requires_grad; }
  bool detached() const { return node_->detached; }
  const char* op() const { return node_->op; }

  detail::Node* node() const { return node_.get(); }
  const std::shared_ptr<detail::Node>& shared() const { return node_; }

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Leaf without gradient tracking.
Var constant(Array value);
/// Leaf that accumulates gradient.
Var variable(Array value);

/// Copy of x's value that blocks gradient flow to everything upstream of x.
Var detach(const Var& x);

/// Reverse pass from a scalar root. Gradients accumulate into every reachable
/// node that requires grad.
void backward(const Var& root);

/// While alive, new ops record no provenance (results are constants).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

/// Builds an op result. When no parent requires grad (or recording is off) the
/// result is a constant and `backward_fn` is dropped.
Var make_result(Array value, std::vector<Var> parents, const char* op,
                std::function<void(detail::Node&)> backward_fn);

/// Adds `contribution(i)` into parent's gradient for every element.
template <typename F>
void accumulate(const Var& parent, F&& contribution) {
  detail::Node* p = parent.node();
  if (!p->requires_grad) return;
  p->ensure_grad();
  double* g = p->grad.data.data();
  const std::size_t n = p->grad.data.size();
  for (std::size_t i = 0; i < n; ++i) g[i] += contribution(i);
}

}  // namespace flowsite::diff
