// Copyright 2026 The hnmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hnmc/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>

#include "hnmc/autodiff/tape.hpp"
#include "hnmc/errors.hpp"

namespace hnmc::ad {
namespace {

using NodePtr = std::shared_ptr<detail::Node>;

bool tracks(std::initializer_list<const Tensor*> inputs) {
  if (Tape::current() == nullptr) return false;
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const Tensor* t) { return t->requires_grad(); });
}

Tensor make_output(Shape shape, std::vector<double> values, bool track) {
  return Tensor(std::move(shape), std::move(values), track);
}

void record(const Tensor& out, Pullback pullback) {
  Tape::current()->record(out.shared_node(), std::move(pullback));
}

Shape broadcast_shape(const Shape& a, const Shape& b, const char* op) {
  if (a == b) return a;
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() == b.size() + 1 && std::equal(b.begin(), b.end(), a.begin() + 1)) return a;
  if (b.size() == a.size() + 1 && std::equal(a.begin(), a.end(), b.begin() + 1)) return b;
  throw ShapeError(std::string(op) + ": shapes " + shape_to_string(a) + " and " +
                   shape_to_string(b) + " do not broadcast");
}

// Elementwise binary op with leading-dimension broadcasting. `partials`
// returns (d out/d x, d out/d y) at one element.
template <typename Forward, typename Partials>
Tensor binary(const Tensor& x, const Tensor& y, const char* name, Forward forward,
              Partials partials) {
  Shape shape = broadcast_shape(x.shape(), y.shape(), name);
  const std::size_t n = shape_size(shape);
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  auto xv = x.values();
  auto yv = y.values();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = forward(xv[k % nx], yv[k % ny]);

  const bool track = tracks({&x, &y});
  Tensor result = make_output(std::move(shape), std::move(out), track);
  if (track) {
    record(result, [xn = x.shared_node(), yn = y.shared_node(), partials, n](
                       std::span<const double> g) {
      const std::size_t nx = xn->value.size();
      const std::size_t ny = yn->value.size();
      for (std::size_t k = 0; k < n; ++k) {
        if (g[k] == 0.0) continue;
        auto [dx, dy] = partials(xn->value[k % nx], yn->value[k % ny]);
        if (xn->requires_grad) xn->grad[k % nx] += g[k] * dx;
        if (yn->requires_grad) yn->grad[k % ny] += g[k] * dy;
      }
    });
  }
  return result;
}

// Elementwise unary op. `derivative(x, f)` receives the input and output.
template <typename Forward, typename Derivative>
Tensor unary(const Tensor& x, Forward forward, Derivative derivative) {
  auto xv = x.values();
  std::vector<double> out(xv.size());
  std::transform(xv.begin(), xv.end(), out.begin(), forward);
  const bool track = tracks({&x});
  Tensor result = make_output(x.shape(), std::move(out), track);
  if (track) {
    record(result, [xn = x.shared_node(), yn = result.node(), derivative](
                       std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t k = 0; k < g.size(); ++k) {
        xn->grad[k] += g[k] * derivative(xn->value[k], yn->value[k]);
      }
    });
  }
  return result;
}

void require_rank(const Tensor& x, std::size_t rank, const char* op) {
  if (x.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) +
                     ", got shape " + shape_to_string(x.shape()));
  }
}

// Splits a shape around `axis` into (outer, length, inner) extents.
struct AxisView {
  std::size_t outer = 1, length = 1, inner = 1;
};

AxisView axis_view(const Shape& shape, int axis, const char* op) {
  const int rank = static_cast<int>(shape.size());
  if (axis < 0) axis += rank;
  if (axis < 0 || axis >= rank) {
    throw ShapeError(std::string(op) + ": axis out of range for shape " + shape_to_string(shape));
  }
  AxisView v;
  for (int d = 0; d < axis; ++d) v.outer *= shape[d];
  v.length = shape[axis];
  for (int d = axis + 1; d < rank; ++d) v.inner *= shape[d];
  return v;
}

std::vector<double> softmax_values(std::span<const double> x, const AxisView& v, bool log_space) {
  std::vector<double> out(x.size());
  for (std::size_t o = 0; o < v.outer; ++o) {
    for (std::size_t in = 0; in < v.inner; ++in) {
      const std::size_t base = o * v.length * v.inner + in;
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < v.length; ++l) m = std::max(m, x[base + l * v.inner]);
      double z = 0.0;
      for (std::size_t l = 0; l < v.length; ++l) z += std::exp(x[base + l * v.inner] - m);
      const double log_z = m + std::log(z);
      for (std::size_t l = 0; l < v.length; ++l) {
        const double ls = x[base + l * v.inner] - log_z;
        out[base + l * v.inner] = log_space ? ls : std::exp(ls);
      }
    }
  }
  return out;
}

}  // namespace

Tensor add(const Tensor& x, const Tensor& y) {
  return binary(
      x, y, "add", [](double a, double b) { return a + b; },
      [](double, double) { return std::pair{1.0, 1.0}; });
}

Tensor sub(const Tensor& x, const Tensor& y) {
  return binary(
      x, y, "sub", [](double a, double b) { return a - b; },
      [](double, double) { return std::pair{1.0, -1.0}; });
}

Tensor mul(const Tensor& x, const Tensor& y) {
  return binary(
      x, y, "mul", [](double a, double b) { return a * b; },
      [](double a, double b) { return std::pair{b, a}; });
}

Tensor div(const Tensor& x, const Tensor& y) {
  for (double d : y.values()) {
    if (d == 0.0) throw DomainError("div: zero denominator");
  }
  return binary(
      x, y, "div", [](double a, double b) { return a / b; },
      [](double a, double b) { return std::pair{1.0 / b, -a / (b * b)}; });
}

Tensor neg(const Tensor& x) {
  return unary(
      x, [](double a) { return -a; }, [](double, double) { return -1.0; });
}

Tensor scale(const Tensor& x, double factor) {
  return unary(
      x, [factor](double a) { return factor * a; }, [factor](double, double) { return factor; });
}

Tensor exp(const Tensor& x) {
  return unary(
      x, [](double a) { return std::exp(a); }, [](double, double f) { return f; });
}

Tensor log(const Tensor& x) {
  for (double v : x.values()) {
    if (!(v > 0.0)) throw DomainError("log: non-positive input " + std::to_string(v));
  }
  return unary(
      x, [](double a) { return std::log(a); }, [](double a, double) { return 1.0 / a; });
}

Tensor sigmoid(const Tensor& x) {
  return unary(
      x,
      [](double a) {
        if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
        const double e = std::exp(a);
        return e / (1.0 + e);
      },
      [](double, double f) { return f * (1.0 - f); });
}

Tensor tanh(const Tensor& x) {
  return unary(
      x, [](double a) { return std::tanh(a); }, [](double, double f) { return 1.0 - f * f; });
}

double melu(double x) { return x > 0.0 ? 1.0 + x : std::exp(x); }

double melu_derivative(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

Tensor melu(const Tensor& x) {
  return unary(
      x, [](double a) { return melu(a); },
      [](double a, double f) { return a > 0.0 ? 1.0 : f; });
}

Tensor sum(const Tensor& x) {
  auto xv = x.values();
  double total = 0.0;
  for (double v : xv) total += v;
  const bool track = tracks({&x});
  Tensor result = make_output({}, {total}, track);
  if (track) {
    record(result, [xn = x.shared_node()](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (double& d : xn->grad) d += g[0];
    });
  }
  return result;
}

Tensor sum(const Tensor& x, int axis) {
  require_rank(x, 2, "sum(axis)");
  if (axis < 0) axis += 2;
  if (axis != 0 && axis != 1) throw ShapeError("sum: axis must be 0 or 1");
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  auto xv = x.values();
  std::vector<double> out(axis == 0 ? cols : rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[axis == 0 ? c : r] += xv[r * cols + c];
  }
  const std::size_t n = out.size();
  const bool track = tracks({&x});
  Tensor result = make_output({n}, std::move(out), track);
  if (track) {
    record(result, [xn = x.shared_node(), axis, rows, cols](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) xn->grad[r * cols + c] += g[axis == 0 ? c : r];
      }
    });
  }
  return result;
}

Tensor normalize(const Tensor& x) {
  auto xv = x.values();
  double total = 0.0;
  for (double v : xv) total += v;
  if (total == 0.0 || !std::isfinite(total)) {
    throw DomainError("normalize: total mass is " + std::to_string(total));
  }
  std::vector<double> out(xv.size());
  for (std::size_t k = 0; k < xv.size(); ++k) out[k] = xv[k] / total;
  const bool track = tracks({&x});
  Tensor result = make_output(x.shape(), std::move(out), track);
  if (track) {
    record(result, [xn = x.shared_node(), yn = result.node(), total](std::span<const double> g) {
      if (!xn->requires_grad) return;
      double dot = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) dot += g[k] * yn->value[k];
      for (std::size_t k = 0; k < g.size(); ++k) xn->grad[k] += (g[k] - dot) / total;
    });
  }
  return result;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  const bool a_vec = a.rank() == 1;
  const bool b_vec = b.rank() == 1;
  if (a.rank() < 1 || a.rank() > 2 || b.rank() < 1 || b.rank() > 2 || (a_vec && b_vec)) {
    throw ShapeError("matmul: unsupported shapes " + shape_to_string(a.shape()) + " x " +
                     shape_to_string(b.shape()));
  }
  const std::size_t m = a_vec ? 1 : a.dim(0);
  const std::size_t k = a_vec ? a.dim(0) : a.dim(1);
  const std::size_t kb = b.dim(0);
  const std::size_t n = b_vec ? 1 : b.dim(1);
  if (k != kb) {
    throw ShapeError("matmul: inner dimensions differ in " + shape_to_string(a.shape()) + " x " +
                     shape_to_string(b.shape()));
  }
  auto av = a.values();
  auto bv = b.values();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      if (aip == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aip * bv[p * n + j];
    }
  }
  Shape shape;
  if (!a_vec) shape.push_back(m);
  if (!b_vec) shape.push_back(n);
  const bool track = tracks({&a, &b});
  Tensor result = make_output(std::move(shape), std::move(out), track);
  if (track) {
    record(result, [an = a.shared_node(), bn = b.shared_node(), m, k, n](
                       std::span<const double> g) {
      if (an->requires_grad) {
        // dA = G B^T
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * bn->value[p * n + j];
            an->grad[i * k + p] += acc;
          }
        }
      }
      if (bn->requires_grad) {
        // dB = A^T G
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t p = 0; p < k; ++p) {
            const double aip = an->value[i * k + p];
            if (aip == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) bn->grad[p * n + j] += aip * g[i * n + j];
          }
        }
      }
    });
  }
  return result;
}

Tensor transpose(const Tensor& x) {
  require_rank(x, 2, "transpose");
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  auto xv = x.values();
  std::vector<double> out(xv.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = xv[r * cols + c];
  }
  const bool track = tracks({&x});
  Tensor result = make_output({cols, rows}, std::move(out), track);
  if (track) {
    record(result, [xn = x.shared_node(), rows, cols](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) xn->grad[r * cols + c] += g[c * rows + r];
      }
    });
  }
  return result;
}

Tensor reshape(const Tensor& x, Shape shape) {
  if (shape_size(shape) != x.size()) {
    throw ShapeError("reshape: cannot view " + shape_to_string(x.shape()) + " as " +
                     shape_to_string(shape));
  }
  auto xv = x.values();
  const bool track = tracks({&x});
  Tensor result = make_output(std::move(shape), std::vector<double>(xv.begin(), xv.end()), track);
  if (track) {
    record(result, [xn = x.shared_node()](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t k = 0; k < g.size(); ++k) xn->grad[k] += g[k];
    });
  }
  return result;
}

Tensor row(const Tensor& x, std::size_t index) {
  require_rank(x, 2, "row");
  const std::size_t rows = x.dim(0), cols = x.dim(1);
  if (index >= rows) {
    throw ShapeError("row: index " + std::to_string(index) + " out of range for " +
                     shape_to_string(x.shape()));
  }
  auto xv = x.values();
  std::vector<double> out(xv.begin() + index * cols, xv.begin() + (index + 1) * cols);
  const bool track = tracks({&x});
  Tensor result = make_output({cols}, std::move(out), track);
  if (track) {
    record(result, [xn = x.shared_node(), index, cols](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t c = 0; c < cols; ++c) xn->grad[index * cols + c] += g[c];
    });
  }
  return result;
}

Tensor stack(const std::vector<Tensor>& rows) {
  if (rows.empty()) throw ShapeError("stack: no rows");
  const Shape& first = rows.front().shape();
  if (first.size() != 1) throw ShapeError("stack: rows must be rank-1");
  const std::size_t cols = first[0];
  std::vector<double> out;
  out.reserve(rows.size() * cols);
  bool track = false;
  for (const Tensor& r : rows) {
    if (r.shape() != first) throw ShapeError("stack: rows differ in shape");
    out.insert(out.end(), r.values().begin(), r.values().end());
    track = track || r.requires_grad();
  }
  track = track && Tape::current() != nullptr;
  Tensor result = make_output({rows.size(), cols}, std::move(out), track);
  if (track) {
    std::vector<NodePtr> nodes;
    nodes.reserve(rows.size());
    for (const Tensor& r : rows) nodes.push_back(r.shared_node());
    record(result, [nodes = std::move(nodes), cols](std::span<const double> g) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i]->requires_grad) continue;
        for (std::size_t c = 0; c < cols; ++c) nodes[i]->grad[c] += g[i * cols + c];
      }
    });
  }
  return result;
}

Tensor concat_columns(const Tensor& left, const Tensor& right) {
  require_rank(left, 2, "concat_columns");
  require_rank(right, 2, "concat_columns");
  const std::size_t rows = left.dim(0);
  if (right.dim(0) != rows) throw ShapeError("concat_columns: row counts differ");
  const std::size_t cl = left.dim(1), cr = right.dim(1), c = cl + cr;
  auto lv = left.values();
  auto rv = right.values();
  std::vector<double> out(rows * c);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(lv.begin() + r * cl, cl, out.begin() + r * c);
    std::copy_n(rv.begin() + r * cr, cr, out.begin() + r * c + cl);
  }
  const bool track = tracks({&left, &right});
  Tensor result = make_output({rows, c}, std::move(out), track);
  if (track) {
    record(result, [ln = left.shared_node(), rn = right.shared_node(), rows, cl, cr](
                       std::span<const double> g) {
      const std::size_t c = cl + cr;
      for (std::size_t r = 0; r < rows; ++r) {
        if (ln->requires_grad) {
          for (std::size_t j = 0; j < cl; ++j) ln->grad[r * cl + j] += g[r * c + j];
        }
        if (rn->requires_grad) {
          for (std::size_t j = 0; j < cr; ++j) rn->grad[r * cr + j] += g[r * c + cl + j];
        }
      }
    });
  }
  return result;
}

Tensor softmax(const Tensor& x, int axis) {
  const AxisView v = axis_view(x.shape(), axis, "softmax");
  const bool track = tracks({&x});
  Tensor result = make_output(x.shape(), softmax_values(x.values(), v, false), track);
  if (track) {
    record(result, [xn = x.shared_node(), yn = result.node(), v](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t o = 0; o < v.outer; ++o) {
        for (std::size_t in = 0; in < v.inner; ++in) {
          const std::size_t base = o * v.length * v.inner + in;
          double dot = 0.0;
          for (std::size_t l = 0; l < v.length; ++l) {
            dot += g[base + l * v.inner] * yn->value[base + l * v.inner];
          }
          for (std::size_t l = 0; l < v.length; ++l) {
            const std::size_t k = base + l * v.inner;
            xn->grad[k] += yn->value[k] * (g[k] - dot);
          }
        }
      }
    });
  }
  return result;
}

Tensor log_softmax(const Tensor& x, int axis) {
  const AxisView v = axis_view(x.shape(), axis, "log_softmax");
  const bool track = tracks({&x});
  Tensor result = make_output(x.shape(), softmax_values(x.values(), v, true), track);
  if (track) {
    record(result, [xn = x.shared_node(), yn = result.node(), v](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t o = 0; o < v.outer; ++o) {
        for (std::size_t in = 0; in < v.inner; ++in) {
          const std::size_t base = o * v.length * v.inner + in;
          double total = 0.0;
          for (std::size_t l = 0; l < v.length; ++l) total += g[base + l * v.inner];
          for (std::size_t l = 0; l < v.length; ++l) {
            const std::size_t k = base + l * v.inner;
            xn->grad[k] += g[k] - std::exp(yn->value[k]) * total;
          }
        }
      }
    });
  }
  return result;
}

Tensor cross_entropy(const Tensor& logits, std::size_t target) {
  require_rank(logits, 1, "cross_entropy");
  if (target >= logits.dim(0)) {
    throw std::out_of_range("cross_entropy: target " + std::to_string(target) +
                            " out of range for " + std::to_string(logits.dim(0)) + " classes");
  }
  const Tensor as_row = reshape(logits, {1, logits.dim(0)});
  const int t = static_cast<int>(target);
  return cross_entropy_sum(as_row, std::span<const int>(&t, 1));
}

Tensor cross_entropy_sum(const Tensor& logits, std::span<const int> targets) {
  require_rank(logits, 2, "cross_entropy_sum");
  const std::size_t rows = logits.dim(0), classes = logits.dim(1);
  if (targets.size() != rows) {
    throw ShapeError("cross_entropy_sum: " + std::to_string(targets.size()) + " targets for " +
                     std::to_string(rows) + " rows");
  }
  for (int t : targets) {
    if (t < 0 || static_cast<std::size_t>(t) >= classes) {
      throw std::out_of_range("cross_entropy: target " + std::to_string(t) + " out of range for " +
                              std::to_string(classes) + " classes");
    }
  }
  const AxisView v{rows, classes, 1};
  std::vector<double> log_probs = softmax_values(logits.values(), v, true);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) total -= log_probs[r * classes + targets[r]];
  const bool track = tracks({&logits});
  Tensor result = make_output({}, {total}, track);
  if (track) {
    record(result, [xn = logits.shared_node(), lp = std::move(log_probs),
                    tg = std::vector<int>(targets.begin(), targets.end()), rows,
                    classes](std::span<const double> g) {
      if (!xn->requires_grad) return;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < classes; ++c) {
          const double p = std::exp(lp[r * classes + c]);
          const double onehot = static_cast<int>(c) == tg[r] ? 1.0 : 0.0;
          xn->grad[r * classes + c] += g[0] * (p - onehot);
        }
      }
    });
  }
  return result;
}

}  // namespace hnmc::ad
