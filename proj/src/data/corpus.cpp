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

#include "hnmc/data/corpus.hpp"

#include <fstream>
#include <sstream>

#include "hnmc/errors.hpp"

namespace hnmc::data {

LabelMap::LabelMap(const std::vector<std::string>& labels) {
  for (const auto& l : labels) {
    if (contains(l)) throw FormatError("duplicate label '" + l + "'");
    intern(l);
  }
}

int LabelMap::intern(const std::string& label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  if (frozen_) throw FormatError("label '" + label + "' was not seen in training data");
  const int id = static_cast<int>(names_.size());
  names_.push_back(label);
  index_.emplace(label, id);
  return id;
}

int LabelMap::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw FormatError("unknown label '" + label + "'");
  return it->second;
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "unknown";
}

std::size_t Corpus::n_tokens() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.tokens.size();
  return n;
}

Corpus parse_conll(std::istream& in, const ConllOptions& options, const LabelMap* labels,
                   Split split) {
  Corpus corpus;
  corpus.split = split;
  if (labels) {
    corpus.labels = *labels;
    corpus.labels.freeze();
  }
  Sentence cur;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!cur.tokens.empty()) corpus.sentences.push_back(std::move(cur));
    cur = Sentence{};
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> cols;
    for (std::string f; fields >> f;) cols.push_back(std::move(f));
    if (cols.empty()) {
      flush();
      continue;
    }
    if (cols[0] == "-DOCSTART-") continue;
    if (width == 0) width = cols.size();
    if (cols.size() != width) {
      throw FormatError("line " + std::to_string(line_no) + ": ragged columns (" +
                        std::to_string(cols.size()) + " instead of " + std::to_string(width) + ")");
    }
    const long label_col = options.label_column < 0
                               ? static_cast<long>(width) + options.label_column
                               : options.label_column;
    if (options.token_column >= width || label_col < 0 || static_cast<std::size_t>(label_col) >= width) {
      throw FormatError("line " + std::to_string(line_no) + ": ragged columns (token column " +
                        std::to_string(options.token_column) + ", label column " +
                        std::to_string(options.label_column) + ", " + std::to_string(width) +
                        " columns present)");
    }
    try {
      cur.labels.push_back(corpus.labels.intern(cols[static_cast<std::size_t>(label_col)]));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    cur.tokens.push_back(cols[options.token_column]);
  }
  flush();
  if (corpus.sentences.empty()) throw FormatError("corpus contains no sentences");
  return corpus;
}

Corpus read_conll(const std::string& path, const ConllOptions& options, const LabelMap* labels,
                  Split split) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return parse_conll(in, options, labels, split);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_conll(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences) {
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      out << s.tokens[t] << ' ' << corpus.labels.name(s.labels[t]) << '\n';
    }
    out << '\n';
  }
}

void write_conll(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  write_conll(out, corpus);
  if (!out) throw FormatError("failed writing " + path);
}

Corpus slice(const Corpus& corpus, std::size_t begin, std::size_t end, Split split) {
  if (begin > end || end > corpus.size()) throw ShapeError("slice outside the corpus");
  Corpus out;
  out.labels = corpus.labels;
  out.split = split;
  out.sentences.assign(corpus.sentences.begin() + static_cast<long>(begin),
                       corpus.sentences.begin() + static_cast<long>(end));
  return out;
}

}  // namespace hnmc::data
