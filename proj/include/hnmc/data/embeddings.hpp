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

#ifndef HNMC_DATA_EMBEDDINGS_HPP_
#define HNMC_DATA_EMBEDDINGS_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hnmc/autodiff/tensor.hpp"
#include "hnmc/data/corpus.hpp"

namespace hnmc::data {

// Word -> dense vector map. Lookups never fail: unknown words get the zero
// vector. With `lowercase` set, keys and queries are lower-cased.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0, bool lowercase = false);

  // One-hot vectors over `vocabulary`, in order.
  static EmbeddingTable one_hot(const std::vector<std::string>& vocabulary);

  // Throws FormatError on a dimension mismatch; later entries replace
  // earlier ones.
  void add(const std::string& word, std::span<const double> vector);

  std::span<const double> lookup(const std::string& word) const;
  bool contains(const std::string& word) const;
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return index_.size(); }
  bool lowercase() const noexcept { return lowercase_; }
  // Words in insertion order.
  const std::vector<std::string>& words() const noexcept { return words_; }

 private:
  std::string key(const std::string& word) const;

  std::size_t dim_;
  bool lowercase_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::vector<double> unk_;
};

// Text format: one "word v_1 ... v_D" entry per line; an optional first
// line "count D" of two integers is skipped. Throws FormatError on
// inconsistent dimensions, unparsable numbers or an empty file.
EmbeddingTable load_embeddings(const std::string& path, bool lowercase = false);
EmbeddingTable parse_embeddings(std::istream& in, bool lowercase = false);

// [T, D] matrix of token embeddings.
ad::Tensor embed_tokens(const std::vector<std::string>& tokens, const EmbeddingTable& table);

struct SequenceBatch {
  std::vector<ad::Tensor> inputs;
  std::vector<std::vector<int>> labels;
  std::vector<std::vector<std::string>> tokens;

  std::size_t size() const noexcept { return inputs.size(); }
};

SequenceBatch embed(const Corpus& corpus, const EmbeddingTable& table);

}  // namespace hnmc::data

#endif  // HNMC_DATA_EMBEDDINGS_HPP_
