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

#ifndef HNMC_METRICS_METRICS_HPP_
#define HNMC_METRICS_METRICS_HPP_

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hnmc::metrics {

using LabelSequences = std::vector<std::vector<std::string>>;

// Fraction of positions where pred == gold. Throws ShapeError on a length
// mismatch or empty input.
double token_accuracy(std::span<const int> pred, std::span<const int> gold);
double token_accuracy(const std::vector<std::vector<int>>& pred,
                      const std::vector<std::vector<int>>& gold);

// Inclusive token range [start, end] of one typed chunk.
struct Span {
  std::size_t sequence = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;

  auto operator<=>(const Span&) const = default;
};

using SpanSet = std::set<Span>;

// BIO extraction. "O" is outside, "B-t" opens a span of type t, "I-t"
// continues a t span and opens one when the previous tag is O or of another
// type. Any other tag throws FormatError.
SpanSet extract_spans(const LabelSequences& labels);

// BIO tags of the spans with sequence id `sequence`.
std::vector<std::string> spans_to_bio(const SpanSet& spans, std::size_t sequence,
                                      std::size_t length);

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Exact-match span precision/recall/F1. With no predicted spans precision is
// 0, with no gold spans recall is 0, and when both sets are empty f1 = 1.
PrfScore span_f1(const LabelSequences& pred, const LabelSequences& gold);

}  // namespace hnmc::metrics

#endif  // HNMC_METRICS_METRICS_HPP_
