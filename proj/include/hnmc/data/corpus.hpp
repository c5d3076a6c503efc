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

#ifndef HNMC_DATA_CORPUS_HPP_
#define HNMC_DATA_CORPUS_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hnmc::data {

// Label string <-> index bijection. Once frozen, unknown labels are errors.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(const std::vector<std::string>& labels);

  // Index of `label`, adding it when not frozen. Throws FormatError on an
  // unseen label after freeze().
  int intern(const std::string& label);
  // Throws FormatError when absent.
  int index_of(const std::string& label) const;
  bool contains(const std::string& label) const { return index_.count(label) != 0; }
  const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  bool frozen_ = false;
};

enum class Split { kTrain, kDev, kTest };
std::string_view to_string(Split split);

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<int> labels;
};

struct Corpus {
  std::vector<Sentence> sentences;
  LabelMap labels;
  Split split = Split::kTrain;

  std::size_t size() const noexcept { return sentences.size(); }
  std::size_t n_tokens() const;
};

struct ConllOptions {
  std::size_t token_column = 0;
  // Negative counts from the end: -1 is the last column.
  int label_column = -1;
};

// Whitespace-separated columns, one token per line, blank line between
// sentences, "-DOCSTART-" lines skipped. Labels are indexed in first-seen
// order unless `labels` is given, in which case it is frozen and reused.
// Throws FormatError on ragged or missing columns and on an empty corpus.
Corpus read_conll(const std::string& path, const ConllOptions& options = {},
                  const LabelMap* labels = nullptr, Split split = Split::kTrain);
Corpus parse_conll(std::istream& in, const ConllOptions& options = {},
                   const LabelMap* labels = nullptr, Split split = Split::kTrain);

// Two columns "token label" per line, blank line after each sentence.
void write_conll(std::ostream& out, const Corpus& corpus);
void write_conll(const std::string& path, const Corpus& corpus);

// Sentences [begin, end) with the same label map.
Corpus slice(const Corpus& corpus, std::size_t begin, std::size_t end, Split split);

}  // namespace hnmc::data

#endif  // HNMC_DATA_CORPUS_HPP_
