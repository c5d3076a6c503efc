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

#include "hnmc/cli/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "hnmc/autodiff/gradcheck.hpp"
#include "hnmc/autodiff/ops.hpp"
#include "hnmc/errors.hpp"
#include "hnmc/nn/model.hpp"
#include "hnmc/nn/table_embedding.hpp"
#include "hnmc/prob/entropic.hpp"
#include "hnmc/prob/enumerate.hpp"
#include "hnmc/prob/forward_backward.hpp"
#include "hnmc/prob/sampling.hpp"

namespace hnmc::cli {

namespace {

using prob::ModelKind;
using Clock = std::chrono::steady_clock;

struct Draw {
  std::size_t n_states, n_obs;
  prob::GenerativeHmmParams params;
  std::vector<int> obs;
};

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<int> random_obs(std::mt19937_64& rng, std::size_t T, std::size_t M) {
  std::uniform_int_distribution<int> u(0, static_cast<int>(M) - 1);
  std::vector<int> o(T);
  for (int& y : o) y = u(rng);
  return o;
}

Draw draw(const OracleGrid& g, std::mt19937_64& rng) {
  const std::size_t N = pick(rng, g.min_states, g.max_states);
  const std::size_t M = pick(rng, g.min_obs, g.max_obs);
  const std::size_t T = pick(rng, g.min_length, g.max_length);
  auto params = prob::random_params(g.kind, N, M, rng());
  return {N, M, std::move(params), random_obs(rng, T, M)};
}

void check_grid(const OracleGrid& g) {
  if (g.min_states < 1 || g.min_states > g.max_states || g.min_obs < 1 ||
      g.min_obs > g.max_obs || g.min_length < 1 || g.min_length > g.max_length) {
    throw ParameterError("empty oracle grid range");
  }
  if (g.max_length > prob::kDefaultEnumerationCap) {
    throw CapExceededError("sequence length " + std::to_string(g.max_length) +
                           " exceeds the enumeration cap of " +
                           std::to_string(prob::kDefaultEnumerationCap));
  }
}

std::string describe(const Draw& d) {
  std::ostringstream os;
  os << "N=" << d.n_states << " M=" << d.n_obs << " T=" << d.obs.size();
  return os.str();
}

prob::PosteriorMatrix entropic(ModelKind kind, const prob::GenerativeHmmParams& g,
                               const prob::EntropicHmmParams& e, prob::Observations o) {
  switch (kind) {
    case ModelKind::kHmm: return prob::efb(e, o);
    case ModelKind::kHmm2: return prob::efb2(e, *g.order2, o);
    case ModelKind::kHmmCn: return prob::efb_cn(e, o);
  }
  throw ParameterError("unknown model kind");
}

double max_abs(const prob::Matrix& a, const prob::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return (a - b).cwiseAbs().maxCoeff();
}

void record(CheckResult& r, double err, const std::string& what) {
  if (std::isnan(err)) err = INFINITY;  // NaN counts as a failure
  if (r.cases++ == 0 || err > r.worst) {
    r.worst = err;
    r.worst_case = what;
  }
}

CheckResult start(std::string name, double tolerance) {
  CheckResult r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  return r;
}

class Timer {
 public:
  explicit Timer(CheckResult& r) : r_(r), start_(Clock::now()) {}
  ~Timer() { r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count(); }

 private:
  CheckResult& r_;
  Clock::time_point start_;
};

}  // namespace

CheckResult oracle_check(const OracleGrid& grid, double tolerance, bool inject_fault) {
  check_grid(grid);
  CheckResult r =
      start("efb vs enumeration (" + std::string(prob::to_string(grid.kind)) + ")", tolerance);
  if (inject_fault) r.name += " [fault injected]";
  Timer timer(r);
  std::mt19937_64 rng(grid.seed);
  for (std::size_t k = 0; k < grid.models; ++k) {
    const Draw d = draw(grid, rng);
    const auto e = prob::derive_entropic(d.params);
    std::vector<int> fed = d.obs;
    if (inject_fault) fed[0] = (fed[0] + 1) % static_cast<int>(d.n_obs);
    const auto got = entropic(grid.kind, d.params, e, fed);
    const auto want = prob::enumerate_posteriors(grid.kind, d.params, d.obs);
    record(r, max_abs(got.values, want.values), describe(d));
  }
  return r;
}

CheckResult classic_check(const OracleGrid& grid, double tolerance) {
  check_grid(grid);
  CheckResult r = start("classic forward-backward vs enumeration (hmm)", tolerance);
  Timer timer(r);
  OracleGrid g = grid;
  g.kind = ModelKind::kHmm;
  std::mt19937_64 rng(grid.seed);
  for (std::size_t k = 0; k < g.models; ++k) {
    const Draw d = draw(g, rng);
    const auto want = prob::enumerate_posteriors(ModelKind::kHmm, d.params, d.obs);
    record(r, max_abs(prob::classic_fb(d.params, d.obs).values, want.values), describe(d));
  }
  return r;
}

CheckResult scale_relation_check(ModelKind kind, std::size_t models, std::uint64_t seed,
                           double tolerance) {
  CheckResult r =
      start("probability-scale relations (" + std::string(prob::to_string(kind)) + ")", tolerance);
  Timer timer(r);
  OracleGrid grid{kind, models, 2, 3, 2, 2, kind == ModelKind::kHmm2 ? 2u : 1u, 5, seed};
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < models; ++k) {
    const Draw d = draw(grid, rng);
    const std::size_t T = d.obs.size();
    const auto e = prob::derive_entropic(d.params);
    std::vector<double> py(T);
    for (std::size_t s = 0; s < T; ++s) {
      py[s] = prob::enumerate_observation_marginal(kind, d.params, s + 1, s)(d.obs[s]);
    }
    auto prefix = [&](std::size_t t) {
      double v = 1.0;
      for (std::size_t s = 0; s <= t; ++s) v *= py[s];
      return v;
    };
    auto suffix = [&](std::size_t t) {
      double v = 1.0;
      for (std::size_t s = t + 1; s < T; ++s) v *= py[s];
      return v;
    };
    const auto raw = prob::unnormalized_recursions(kind, d.params, d.obs);
    double err = 0.0;
    if (kind == ModelKind::kHmm2) {
      const auto& p = std::get<prob::PairTables>(raw);
      const auto q = prob::efb2_tables(e, *d.params.order2, d.obs, prob::keep_unnormalized());
      for (std::size_t t = 1; t < T; ++t) {
        err = std::max(err, max_abs(q.alpha[t] * prefix(t), p.alpha[t]));
        err = std::max(err, max_abs(q.beta[t] * suffix(t), p.beta[t]));
      }
    } else {
      const auto& p = std::get<prob::ChainTables>(raw);
      const auto q = kind == ModelKind::kHmm
                         ? prob::efb_tables(e, d.obs, prob::keep_unnormalized())
                         : prob::efb_cn_tables(e, d.obs, prob::keep_unnormalized());
      for (std::size_t t = 0; t < T; ++t) {
        err = std::max(err, max_abs(q.alpha[t] * prefix(t), p.alpha[t]));
        err = std::max(err, max_abs(q.beta[t] * suffix(t), p.beta[t]));
      }
    }
    record(r, err, describe(d));
  }
  return r;
}

CheckResult scaling_check(ModelKind kind, std::size_t models, std::uint64_t seed,
                          double tolerance) {
  CheckResult r =
      start("scaling invariance (" + std::string(prob::to_string(kind)) + ")", tolerance);
  Timer timer(r);
  OracleGrid grid{kind, models, 2, 4, 2, 3, 2, 12, seed};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(-4.0, 4.0);
  const prob::StepScale random_scale = [&](prob::Pass, std::size_t, double) {
    return std::pow(10.0, exponent(rng));
  };
  for (std::size_t k = 0; k < models; ++k) {
    const Draw d = draw(grid, rng);
    const auto e = prob::derive_entropic(d.params);
    prob::PosteriorMatrix base, scaled;
    switch (kind) {
      case ModelKind::kHmm:
        base = prob::combine(prob::efb_tables(e, d.obs, prob::normalize_each_step()));
        scaled = prob::combine(prob::efb_tables(e, d.obs, random_scale));
        break;
      case ModelKind::kHmm2:
        base = prob::combine(
            prob::efb2_tables(e, *d.params.order2, d.obs, prob::normalize_each_step()));
        scaled = prob::combine(prob::efb2_tables(e, *d.params.order2, d.obs, random_scale));
        break;
      case ModelKind::kHmmCn:
        base = prob::combine(prob::efb_cn_tables(e, d.obs, prob::normalize_each_step()));
        scaled = prob::combine(prob::efb_cn_tables(e, d.obs, random_scale));
        break;
    }
    record(r, max_abs(base.values, scaled.values), describe(d));
  }
  return r;
}

CheckResult gradient_check(std::size_t T, std::size_t D, std::size_t N, double tolerance) {
  CheckResult r = start("gradients vs central differences (all models, arch 1-3)", tolerance);
  Timer timer(r);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> xs(T * D);
  for (double& v : xs) v = normal(rng);
  const ad::Tensor x = ad::Tensor::matrix(T, D, xs);
  std::vector<int> targets(T);
  for (std::size_t t = 0; t < T; ++t) targets[t] = static_cast<int>((t * 7 + 1) % N);
  for (auto type : {nn::ModelType::kRnn, nn::ModelType::kBirnn, nn::ModelType::kHnmc,
                    nn::ModelType::kHnmc2, nn::ModelType::kHnmcCn}) {
    for (int arch = 1; arch <= 3; ++arch) {
      nn::ArchitectureSpec spec;
      spec.type = type;
      spec.arch = arch;
      spec.hidden_size = N;
      spec.n_labels = N;
      spec.embedding_dim = D;
      const nn::LabeledModel m(spec, 100 + static_cast<std::uint64_t>(arch));
      std::vector<ad::Tensor> params;
      for (const auto& p : m.parameters()) params.push_back(p.tensor);
      ad::GradCheckOptions opt;
      opt.step = 1e-5;
      const auto g = ad::check_gradients(
          [&] { return ad::cross_entropy_sum(m.logits(x), targets); }, params, opt);
      std::ostringstream what;
      what << nn::to_string(type) << " arch " << arch << " (" << g.checked << " entries)";
      record(r, g.max_relative_error, what.str());
    }
  }
  return r;
}

CheckResult table_embedding_check(ModelKind kind, std::size_t models, std::uint64_t seed,
                                  double tolerance) {
  CheckResult r = start("table-embedded layer vs entropic posteriors (" +
                    std::string(prob::to_string(kind)) + ")", tolerance);
  Timer timer(r);
  OracleGrid grid{kind, models, 2, 3, 2, 3, 2, 8, seed};
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < models; ++k) {
    const Draw d = draw(grid, rng);
    const auto e = prob::derive_entropic(d.params);
    const ad::Tensor x = nn::one_hot_sequence(d.obs, d.n_obs);
    ad::Tensor out;
    switch (kind) {
      case ModelKind::kHmm: out = nn::embed_hmm(e).forward(x); break;
      case ModelKind::kHmm2: out = nn::embed_hmm2(e, *d.params.order2).forward(x); break;
      case ModelKind::kHmmCn: out = nn::embed_hmm_cn(e).forward(x); break;
    }
    const auto want = entropic(kind, d.params, e, d.obs);
    prob::Matrix got(out.dim(0), out.dim(1));
    for (std::size_t t = 0; t < out.dim(0); ++t) {
      for (std::size_t i = 0; i < out.dim(1); ++i) {
        got(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = out.at(t, i);
      }
    }
    record(r, max_abs(got, want.values), describe(d));
  }
  return r;
}

std::vector<CheckResult> run_verify(const VerifyOptions& o) {
  if (o.max_length > prob::kDefaultEnumerationCap) {
    throw CapExceededError("--max-length " + std::to_string(o.max_length) +
                           " exceeds the enumeration cap of " +
                           std::to_string(prob::kDefaultEnumerationCap));
  }
  if (o.max_states < 2 || o.max_length < 2 || o.seeds < 1) {
    throw ParameterError("verify needs max-states >= 2, max-length >= 2 and seeds >= 1");
  }
  std::vector<CheckResult> out;
  const OracleGrid hmm{ModelKind::kHmm, o.seeds, 2, o.max_states, 2, 3, 1, o.max_length, o.seed};
  OracleGrid hmm2 = hmm;
  hmm2.kind = ModelKind::kHmm2;
  hmm2.min_length = 2;
  hmm2.seed = o.seed + 1;
  OracleGrid cn = hmm;
  cn.kind = ModelKind::kHmmCn;
  cn.max_states = std::min<std::size_t>(o.max_states, 3);
  cn.max_obs = 2;
  cn.max_length = std::min<std::size_t>(o.max_length, 5);
  cn.seed = o.seed + 2;
  out.push_back(classic_check(hmm, 1e-10));
  out.push_back(oracle_check(hmm, 1e-10, o.inject_fault));
  out.push_back(oracle_check(hmm2, 1e-10, o.inject_fault));
  out.push_back(oracle_check(cn, 1e-10, o.inject_fault));
  const std::size_t few = std::max<std::size_t>(1, o.seeds / 5);
  for (auto kind : {ModelKind::kHmm, ModelKind::kHmm2, ModelKind::kHmmCn}) {
    out.push_back(scale_relation_check(kind, few, o.seed + 10, 1e-10));
  }
  for (auto kind : {ModelKind::kHmm, ModelKind::kHmm2, ModelKind::kHmmCn}) {
    out.push_back(scaling_check(kind, few, o.seed + 20, 1e-12));
  }
  for (auto kind : {ModelKind::kHmm, ModelKind::kHmm2, ModelKind::kHmmCn}) {
    out.push_back(table_embedding_check(kind, few, o.seed + 30, 1e-8));
  }
  out.push_back(gradient_check(5, 4, 3, 1e-4));
  return out;
}

}  // namespace hnmc::cli
