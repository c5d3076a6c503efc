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

#ifndef HNMC_AUTODIFF_TENSOR_HPP_
#define HNMC_AUTODIFF_TENSOR_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hnmc::ad {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_to_string(const Shape& shape);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> value;
  // Sized like `value` iff requires_grad.
  std::vector<double> grad;
  bool requires_grad = false;
};

}  // namespace detail

// Dense row-major array of doubles with optional gradient participation.
//
// A Tensor is a cheap handle: copies share the same storage. Operations in
// ops.hpp create new tensors and, when a Tape is active on the calling thread
// and some input requires a gradient, record how to propagate gradients back.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);
  static Tensor vector(std::vector<double> values, bool requires_grad = false);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values, bool requires_grad = false);

  bool defined() const noexcept { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t size() const { return values().size(); }

  std::span<const double> values() const;
  // In-place access, for parameter initialisation and optimizer updates.
  std::span<double> mutable_values();
  double item() const;
  double operator[](std::size_t flat_index) const { return values()[flat_index]; }
  double at(std::size_t row, std::size_t col) const;

  bool requires_grad() const;
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();

  // Independent copy of the values, outside of any tape.
  Tensor detach() const;

  detail::Node* node() const noexcept { return node_.get(); }
  const std::shared_ptr<detail::Node>& shared_node() const noexcept { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  friend Tensor wrap_node(std::shared_ptr<detail::Node> node);

  std::shared_ptr<detail::Node> node_;
};

Tensor wrap_node(std::shared_ptr<detail::Node> node);

}  // namespace hnmc::ad

#endif  // HNMC_AUTODIFF_TENSOR_HPP_
