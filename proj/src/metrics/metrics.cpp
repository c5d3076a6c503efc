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

#include "hnmc/metrics/metrics.hpp"

#include <algorithm>

#include "hnmc/errors.hpp"

namespace hnmc::metrics {

double token_accuracy(std::span<const int> pred, std::span<const int> gold) {
  if (pred.size() != gold.size()) {
    throw ShapeError("prediction and gold lengths differ (" + std::to_string(pred.size()) +
                     " vs " + std::to_string(gold.size()) + ")");
  }
  if (gold.empty()) throw ShapeError("accuracy of an empty sequence");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < gold.size(); ++t) hits += pred[t] == gold[t];
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double token_accuracy(const std::vector<std::vector<int>>& pred,
                      const std::vector<std::vector<int>>& gold) {
  if (pred.size() != gold.size()) throw ShapeError("prediction and gold sequence counts differ");
  std::size_t hits = 0, total = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (pred[s].size() != gold[s].size()) {
      throw ShapeError("length mismatch in sequence " + std::to_string(s));
    }
    for (std::size_t t = 0; t < gold[s].size(); ++t) hits += pred[s][t] == gold[s][t];
    total += gold[s].size();
  }
  if (total == 0) throw ShapeError("accuracy of an empty corpus");
  return static_cast<double>(hits) / static_cast<double>(total);
}

SpanSet extract_spans(const LabelSequences& labels) {
  SpanSet spans;
  for (std::size_t s = 0; s < labels.size(); ++s) {
    const auto& seq = labels[s];
    bool open = false;
    Span cur;
    auto close = [&] {
      if (open) spans.insert(cur);
      open = false;
    };
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const std::string& tag = seq[t];
      if (tag == "O") {
        close();
        continue;
      }
      if (tag.size() < 3 || tag[1] != '-' || (tag[0] != 'B' && tag[0] != 'I')) {
        throw FormatError("tag '" + tag + "' is not O, B-type or I-type");
      }
      const std::string type = tag.substr(2);
      if (tag[0] == 'I' && open && cur.type == type) {
        cur.end = t;
        continue;
      }
      close();
      cur = Span{s, t, t, type};
      open = true;
    }
    close();
  }
  return spans;
}

std::vector<std::string> spans_to_bio(const SpanSet& spans, std::size_t sequence,
                                      std::size_t length) {
  std::vector<std::string> out(length, "O");
  for (const Span& sp : spans) {
    if (sp.sequence != sequence) continue;
    if (sp.start > sp.end || sp.end >= length) throw ShapeError("span outside the sequence");
    out[sp.start] = "B-" + sp.type;
    for (std::size_t t = sp.start + 1; t <= sp.end; ++t) out[t] = "I-" + sp.type;
  }
  return out;
}

PrfScore span_f1(const LabelSequences& pred, const LabelSequences& gold) {
  if (pred.size() != gold.size()) throw ShapeError("prediction and gold sequence counts differ");
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (pred[s].size() != gold[s].size()) {
      throw ShapeError("length mismatch in sequence " + std::to_string(s));
    }
  }
  const SpanSet p = extract_spans(pred), g = extract_spans(gold);
  if (p.empty() && g.empty()) return {0.0, 0.0, 1.0};
  std::size_t common = 0;
  for (const Span& sp : p) common += g.count(sp);
  PrfScore r;
  r.precision = p.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(p.size());
  r.recall = g.empty() ? 0.0 : static_cast<double>(common) / static_cast<double>(g.size());
  r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

}  // namespace hnmc::metrics
