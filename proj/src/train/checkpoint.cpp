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

#include "hnmc/train/checkpoint.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "hnmc/errors.hpp"

namespace hnmc::train {

namespace {

constexpr std::string_view kMagic = "HNMCCKPT";
// Guards against absurd allocations from a corrupt length field.
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 34;

template <typename U>
void put_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

void put_string(std::ostream& out, const std::string& s) {
  put_le<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void read_exact(std::istream& in, char* dst, std::size_t n) {
  in.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw FormatError("checkpoint truncated");
}

template <typename U>
U get_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes;
  read_exact(in, reinterpret_cast<char*>(bytes.data()), bytes.size());
  U value = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
  return value;
}

std::uint64_t get_length(std::istream& in) {
  const auto n = get_le<std::uint64_t>(in);
  if (n > kMaxLength) throw FormatError("checkpoint length field out of range");
  return n;
}

std::string get_string(std::istream& in) {
  std::string s(get_length(in), '\0');
  read_exact(in, s.data(), s.size());
  return s;
}

}  // namespace

Checkpoint capture(const nn::LabeledModel& model, nlohmann::json config, std::uint64_t epoch,
                   std::string rng_state) {
  Checkpoint c{std::move(config), epoch, std::move(rng_state), {}};
  for (const auto& [name, t] : model.parameters()) {
    const auto v = t.values();
    c.tensors.push_back({name, t.shape(), std::vector<double>(v.begin(), v.end())});
  }
  return c;
}

void restore(nn::LabeledModel& model, const Checkpoint& checkpoint) {
  auto params = model.parameters();
  if (params.size() != checkpoint.tensors.size()) {
    throw FormatError("checkpoint has " + std::to_string(checkpoint.tensors.size()) +
                      " tensors, model expects " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& stored = checkpoint.tensors[i];
    auto& [name, t] = params[i];
    if (stored.name != name || stored.shape != t.shape()) {
      throw FormatError("checkpoint tensor '" + stored.name + "' " +
                        ad::shape_to_string(stored.shape) + " does not match model tensor '" +
                        name + "' " + ad::shape_to_string(t.shape()));
    }
    std::copy(stored.values.begin(), stored.values.end(), t.mutable_values().begin());
  }
}

void save_checkpoint(std::ostream& out, const Checkpoint& c) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_string(out, c.config.dump());
  put_le<std::uint64_t>(out, c.epoch);
  put_string(out, c.rng_state);
  put_le<std::uint64_t>(out, c.tensors.size());
  for (const auto& t : c.tensors) {
    if (ad::shape_size(t.shape) != t.values.size()) {
      throw ShapeError("stored tensor '" + t.name + "' has inconsistent shape");
    }
    put_string(out, t.name);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (auto d : t.shape) put_le<std::uint64_t>(out, d);
    for (double v : t.values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw FormatError("failed writing checkpoint");
}

void save_checkpoint(const std::string& path, const Checkpoint& c) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  save_checkpoint(out, c);
}

Checkpoint load_checkpoint(std::istream& in) {
  std::string magic(kMagic.size(), '\0');
  read_exact(in, magic.data(), magic.size());
  if (magic != kMagic) throw FormatError("not a checkpoint (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  const std::string config = get_string(in);
  try {
    c.config = nlohmann::json::parse(config);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint config is not JSON: ") + e.what());
  }
  c.epoch = get_le<std::uint64_t>(in);
  c.rng_state = get_string(in);
  const auto count = get_length(in);
  for (std::uint64_t k = 0; k < count; ++k) {
    StoredTensor t;
    t.name = get_string(in);
    const auto rank = get_le<std::uint32_t>(in);
    if (rank > 8) throw FormatError("tensor rank out of range");
    std::uint64_t n = 1;
    for (std::uint32_t r = 0; r < rank; ++r) {
      const auto d = get_length(in);
      t.shape.push_back(d);
      n *= d;
      if (n > kMaxLength) throw FormatError("tensor too large");
    }
    t.values.resize(n);
    for (auto& v : t.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    c.tensors.push_back(std::move(t));
  }
  return c;
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint '" + path + "'");
  return load_checkpoint(in);
}

}  // namespace hnmc::train
