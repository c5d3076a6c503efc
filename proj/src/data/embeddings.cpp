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

#include "hnmc/data/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "hnmc/errors.hpp"

namespace hnmc::data {
namespace {

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool is_count(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::size_t dim, bool lowercase)
    : dim_(dim), lowercase_(lowercase), unk_(dim, 0.0) {}

EmbeddingTable EmbeddingTable::one_hot(const std::vector<std::string>& vocabulary) {
  EmbeddingTable t(vocabulary.size());
  std::vector<double> v(vocabulary.size(), 0.0);
  for (std::size_t k = 0; k < vocabulary.size(); ++k) {
    v[k] = 1.0;
    t.add(vocabulary[k], v);
    v[k] = 0.0;
  }
  return t;
}

std::string EmbeddingTable::key(const std::string& word) const {
  if (!lowercase_) return word;
  std::string k = word;
  std::transform(k.begin(), k.end(), k.begin(), [](unsigned char c) { return std::tolower(c); });
  return k;
}

void EmbeddingTable::add(const std::string& word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw FormatError("embedding for '" + word + "' has dimension " + std::to_string(vector.size()) +
                      ", expected " + std::to_string(dim_));
  }
  const std::string k = key(word);
  if (auto it = index_.find(k); it != index_.end()) {
    std::copy(vector.begin(), vector.end(), data_.begin() + static_cast<long>(it->second * dim_));
    return;
  }
  index_.emplace(k, words_.size());
  words_.push_back(k);
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::span<const double> EmbeddingTable::lookup(const std::string& word) const {
  auto it = index_.find(key(word));
  if (it == index_.end()) return unk_;
  return {data_.data() + it->second * dim_, dim_};
}

bool EmbeddingTable::contains(const std::string& word) const { return index_.count(key(word)) != 0; }

EmbeddingTable parse_embeddings(std::istream& in, bool lowercase) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<EmbeddingTable> table;
  std::vector<double> v;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(std::move(f));
    if (cols.empty()) continue;
    if (!table && line_no == 1 && cols.size() == 2 && is_count(cols[0]) && is_count(cols[1])) continue;
    if (cols.size() < 2) {
      throw FormatError("line " + std::to_string(line_no) + ": expected a word and a vector");
    }
    v.assign(cols.size() - 1, 0.0);
    for (std::size_t k = 1; k < cols.size(); ++k) {
      if (!parse_double(cols[k], v[k - 1])) {
        throw FormatError("line " + std::to_string(line_no) + ": bad number '" + cols[k] + "'");
      }
    }
    if (!table) table.emplace(v.size(), lowercase);
    if (v.size() != table->dim()) {
      throw FormatError("line " + std::to_string(line_no) + ": dimension " + std::to_string(v.size()) +
                        " differs from " + std::to_string(table->dim()));
    }
    table->add(cols[0], v);
  }
  if (!table) throw FormatError("embedding file has no entries");
  return std::move(*table);
}

EmbeddingTable load_embeddings(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return parse_embeddings(in, lowercase);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

ad::Tensor embed_tokens(const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  const std::size_t D = table.dim();
  std::vector<double> v;
  v.reserve(tokens.size() * D);
  for (const auto& tok : tokens) {
    const auto row = table.lookup(tok);
    v.insert(v.end(), row.begin(), row.end());
  }
  return ad::Tensor::matrix(tokens.size(), D, std::move(v));
}

SequenceBatch embed(const Corpus& corpus, const EmbeddingTable& table) {
  SequenceBatch b;
  for (const auto& s : corpus.sentences) {
    b.inputs.push_back(embed_tokens(s.tokens, table));
    b.labels.push_back(s.labels);
    b.tokens.push_back(s.tokens);
  }
  return b;
}

}  // namespace hnmc::data
