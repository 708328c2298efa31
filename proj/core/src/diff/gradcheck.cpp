// SPDX-License-Identifier: Apache-2.0

#include "flowsite/diff/gradcheck.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flowsite::diff {

namespace {

void record(GradCheckResult& r, std::size_t index, double analytic, double numeric) {
  if (std::isnan(analytic) || std::isnan(numeric)) {
    if (!r.nan_index) r.nan_index = index;
    return;
  }
  const double err = std::fabs(analytic - numeric) / (std::fabs(analytic) + 1e-8);
  if (err > r.max_rel_error) {
    r.max_rel_error = err;
    r.worst_index = index;
  }
}

}  // namespace

std::string GradCheckResult::describe() const {
  std::ostringstream os;
  if (nan_index) {
    os << "NaN at coordinate " << *nan_index;
  } else {
    os << "max relative error " << max_rel_error << " at coordinate " << worst_index;
  }
  return os.str();
}

GradCheckResult finite_difference_check(const std::function<Var(const Var&)>& f,
                                        const Array& point, double h) {
  if (h < 1e-7 || h > 1e-3) throw std::invalid_argument("finite difference step outside [1e-7, 1e-3]");
  Var x = variable(point);
  Var y = f(x);
  backward(y);
  const Array analytic = x.grad();

  GradCheckResult result;
  NoGradGuard no_grad;
  for (std::size_t i = 0; i < point.numel(); ++i) {
    Array plus = point, minus = point;
    plus.data[i] += h;
    minus.data[i] -= h;
    const double fp = f(constant(plus)).item();
    const double fm = f(constant(minus)).item();
    record(result, i, analytic.data[i], (fp - fm) / (2.0 * h));
  }
  return result;
}

GradCheckResult directional_check(const std::function<Var()>& loss,
                                  const std::vector<Parameter*>& params,
                                  const std::vector<std::vector<double>>& directions, double h) {
  std::size_t total = 0;
  for (const Parameter* p : params) total += p->node.numel();
  for (const auto& d : directions) {
    if (d.size() != total) throw std::invalid_argument("direction length does not match parameters");
  }

  for (Parameter* p : params) p->node.zero_grad();
  backward(loss());
  std::vector<double> grad;
  grad.reserve(total);
  for (Parameter* p : params) {
    const Array g = p->node.grad();
    grad.insert(grad.end(), g.data.begin(), g.data.end());
    p->node.zero_grad();
  }

  std::vector<Array> saved;
  for (Parameter* p : params) saved.push_back(p->node.value());
  auto shift = [&](const std::vector<double>& d, double amount) {
    std::size_t k = 0;
    for (std::size_t q = 0; q < params.size(); ++q) {
      auto& w = params[q]->node.mutable_value().data;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = saved[q].data[i] + amount * d[k++];
    }
  };

  GradCheckResult result;
  NoGradGuard no_grad;
  for (std::size_t q = 0; q < directions.size(); ++q) {
    const auto& d = directions[q];
    double analytic = 0.0;
    for (std::size_t k = 0; k < total; ++k) analytic += grad[k] * d[k];
    shift(d, h);
    const double fp = loss().item();
    shift(d, -h);
    const double fm = loss().item();
    shift(d, 0.0);
    record(result, q, analytic, (fp - fm) / (2.0 * h));
  }
  return result;
}

}  // namespace flowsite::diff
