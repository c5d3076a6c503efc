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

#include "hnmc/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hnmc/cli/manifest.hpp"
#include "hnmc/cli/verify.hpp"
#include "hnmc/data/corpus.hpp"
#include "hnmc/data/embeddings.hpp"
#include "hnmc/data/synthetic.hpp"
#include "hnmc/errors.hpp"
#include "hnmc/train/checkpoint.hpp"
#include "hnmc/train/trainer.hpp"

namespace hnmc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flag combinations found after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string percent(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * x);
  return buf;
}

struct TrainFlags {
  std::string model;
  int arch = 1;
  std::size_t hidden_size = 0;
  std::vector<std::size_t> kernel_hidden;
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  std::optional<double> lr;
  std::vector<double> lr_layers;
  std::string optimizer = "adam";
  double clip_norm = 0.0;
  bool no_shuffle = false;
  std::string metric = "accuracy";
  std::string train_path, dev_path;
  std::string synthetic;
  std::size_t synthetic_train = 500, synthetic_dev = 200;
  std::uint64_t data_seed = 0;
  std::string embeddings;
  bool one_hot = false;
  bool lowercase = false;
  std::uint64_t seed = 1;
  std::size_t repeats = 1;
  std::string out;
};

struct Datasets {
  data::Corpus train;
  std::optional<data::Corpus> dev;
  data::EmbeddingTable table;
  json embedding;  // how to rebuild `table` later
  json source;
};

std::vector<std::string> vocabulary(const data::Corpus& corpus) {
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  for (const auto& s : corpus.sentences) {
    for (const auto& w : s.tokens) {
      if (seen.insert(w).second) words.push_back(w);
    }
  }
  return words;
}

Datasets synthetic_data(const std::string& kind_name, std::uint64_t data_seed,
                        std::size_t n_train, std::size_t n_dev) {
  const auto kind = data::parse_synth_kind(kind_name);
  auto all = data::synth_corpus(kind, data_seed, n_train + n_dev);
  Datasets d{data::slice(all.corpus, 0, n_train, data::Split::kTrain), std::nullopt,
             std::move(all.embeddings), {}, {}};
  if (n_dev > 0) d.dev = data::slice(all.corpus, n_train, n_train + n_dev, data::Split::kDev);
  d.embedding = {{"kind", "one_hot"}, {"vocabulary", d.table.words()}};
  d.source = {{"synthetic", kind_name},
              {"data_seed", data_seed},
              {"train_size", n_train},
              {"dev_size", n_dev}};
  return d;
}

Datasets file_data(const TrainFlags& f) {
  Datasets d{data::read_conll(f.train_path), std::nullopt, data::EmbeddingTable(), {}, {}};
  if (!f.dev_path.empty()) {
    d.dev = data::read_conll(f.dev_path, {}, &d.train.labels, data::Split::kDev);
  }
  if (f.one_hot) {
    d.table = data::EmbeddingTable::one_hot(vocabulary(d.train));
    d.embedding = {{"kind", "one_hot"}, {"vocabulary", d.table.words()}};
  } else {
    d.table = data::load_embeddings(f.embeddings, f.lowercase);
    d.embedding = {{"kind", "file"},
                   {"path", fs::absolute(f.embeddings).string()},
                   {"dim", d.table.dim()},
                   {"lowercase", f.lowercase}};
  }
  d.source = {{"train", fs::absolute(f.train_path).string()},
              {"dev", f.dev_path.empty() ? json(nullptr)
                                         : json(fs::absolute(f.dev_path).string())}};
  return d;
}

data::EmbeddingTable embedding_from(const json& desc, const std::string& override_path,
                                    std::size_t expected_dim) {
  data::EmbeddingTable table;
  if (!override_path.empty()) {
    table = data::load_embeddings(override_path, desc.value("lowercase", false));
  } else if (desc.at("kind") == "one_hot") {
    table = data::EmbeddingTable::one_hot(desc.at("vocabulary").get<std::vector<std::string>>());
  } else {
    table = data::load_embeddings(desc.at("path").get<std::string>(),
                                  desc.value("lowercase", false));
  }
  if (table.dim() != expected_dim) {
    throw ShapeError("embedding dimension " + std::to_string(table.dim()) +
                     " does not match the checkpoint's " + std::to_string(expected_dim));
  }
  return table;
}

void validate_train_flags(const TrainFlags& f) {
  if (f.synthetic.empty() == f.train_path.empty()) {
    throw UsageError("give exactly one of --train or --synthetic");
  }
  if (!f.synthetic.empty() && (!f.dev_path.empty() || !f.embeddings.empty())) {
    throw UsageError("--synthetic generates its own dev split and one-hot embeddings; "
                     "drop --dev/--embeddings");
  }
  if (!f.train_path.empty() && f.embeddings.empty() == !f.one_hot) {
    throw UsageError("file input needs exactly one of --embeddings or --one-hot");
  }
  if (f.arch == 1) {
    if (!f.lr_layers.empty()) throw UsageError("--lr-layers is for --arch 2 and 3; use --lr");
  } else {
    if (f.hidden_size == 0) {
      throw UsageError("--arch " + std::to_string(f.arch) + " needs --hidden-size");
    }
    if (f.lr) throw UsageError("--arch " + std::to_string(f.arch) + " takes --lr-layers, not --lr");
    if (!f.lr_layers.empty() && f.lr_layers.size() != 2) {
      throw UsageError("--arch " + std::to_string(f.arch) + " needs 2 --lr-layers values, got " +
                       std::to_string(f.lr_layers.size()));
    }
  }
  if (f.repeats < 1) throw UsageError("--repeats must be >= 1");
}

int cmd_train(const TrainFlags& f, std::ostream& out) {
  validate_train_flags(f);
  Datasets d = f.synthetic.empty()
                   ? file_data(f)
                   : synthetic_data(f.synthetic, f.data_seed, f.synthetic_train, f.synthetic_dev);

  nn::ArchitectureSpec spec;
  spec.type = nn::parse_model_type(f.model);
  spec.arch = f.arch;
  spec.hidden_size = f.arch == 1 ? 0 : f.hidden_size;
  spec.n_labels = d.train.labels.size();
  spec.embedding_dim = d.table.dim();
  spec.kernel.hidden = f.kernel_hidden;
  nn::validate(spec);

  train::TrainConfig cfg;
  cfg.epochs = f.epochs;
  cfg.batch_size = f.batch_size;
  if (f.lr) cfg.lr_model = *f.lr;
  if (!f.lr_layers.empty()) cfg.lr_layers = f.lr_layers;
  cfg.optimizer = train::parse_optimizer(f.optimizer);
  cfg.clip_norm = f.clip_norm;
  cfg.shuffle = !f.no_shuffle;
  cfg.metric = train::parse_metric(f.metric);
  train::validate(cfg, f.arch == 1 ? 1 : 2);

  const auto train_set = data::embed(d.train, d.table);
  std::optional<data::SequenceBatch> dev_set;
  if (d.dev && d.dev->size() > 0) dev_set = data::embed(*d.dev, d.table);
  const auto& label_names = d.train.labels.names();

  fs::create_directories(f.out);
  RunManifest manifest;
  manifest.metric = std::string(train::to_string(cfg.metric));
  manifest.score_source = dev_set ? "dev" : "train";

  std::vector<double> scores;
  for (std::size_t r = 0; r < f.repeats; ++r) {
    const std::uint64_t seed = f.seed + r;
    cfg.seed = seed;
    const json echo{{"format", "hnmc-checkpoint"},
                    {"architecture", train::to_json(spec)},
                    {"train", train::to_json(cfg)},
                    {"labels", label_names},
                    {"embedding", d.embedding},
                    {"data", d.source}};
    if (r == 0) {
      manifest.config = echo;
      manifest.config["train"].erase("seed");
      manifest.config["repeats"] = f.repeats;
    }
    nn::LabeledModel model(spec, seed);
    const auto result = train::train(model, train_set, dev_set ? &*dev_set : nullptr, cfg,
                                     label_names, echo);

    const std::string stem = "seed-" + std::to_string(seed);
    train::save_checkpoint((fs::path(f.out) / (stem + ".ckpt")).string(), result.best);
    std::ofstream log(fs::path(f.out) / (stem + ".log.tsv"));
    log << "epoch\tmean_loss\tdev_score\n";
    for (const auto& e : result.log) {
      log << e.epoch << '\t' << e.mean_loss << '\t';
      if (e.dev_score) log << *e.dev_score;
      log << '\n';
    }

    const double score = result.best_dev_score
                             ? *result.best_dev_score
                             : train::evaluate(model, train_set, cfg.metric, label_names);
    scores.push_back(score);
    manifest.runs.push_back({seed, score, result.best_epoch, stem + ".ckpt", stem + ".log.tsv"});
    out << "seed " << seed << ": " << manifest.score_source << ' ' << manifest.metric << ' '
        << percent(score) << " (best epoch " << result.best_epoch << ", final loss "
        << result.log.back().mean_loss << ")\n";
  }
  const std::string manifest_path = (fs::path(f.out) / "manifest.json").string();
  write_manifest(manifest_path, manifest);
  out << f.model << " arch " << f.arch << ": " << format_cell(scores) << " over " << f.repeats
      << (f.repeats == 1 ? " run" : " runs") << "; manifest " << manifest_path << '\n';
  return kExitOk;
}

struct Loaded {
  nn::LabeledModel model;
  train::Checkpoint checkpoint;
  std::vector<std::string> labels;
};

Loaded load_model(const std::string& path) {
  auto ckpt = train::load_checkpoint(path);
  try {
    const auto spec = train::architecture_from_json(ckpt.config.at("architecture"));
    nn::LabeledModel model(spec, 0);
    train::restore(model, ckpt);
    auto labels = ckpt.config.at("labels").get<std::vector<std::string>>();
    if (labels.size() != spec.n_labels) throw FormatError("checkpoint label list has wrong size");
    return {std::move(model), std::move(ckpt), std::move(labels)};
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint config incomplete: ") + e.what());
  }
}

struct EvalFlags {
  std::string checkpoint;
  std::string data_path;
  std::string synthetic;
  std::uint64_t data_seed = 0;
  std::size_t size = 200;
  std::string embeddings;
  std::string metric;
};

int cmd_evaluate(const EvalFlags& f, std::ostream& out) {
  if (f.data_path.empty() == f.synthetic.empty()) {
    throw UsageError("give exactly one of --data or --synthetic");
  }
  Loaded l = load_model(f.checkpoint);
  const auto& spec = l.model.spec();
  const data::EmbeddingTable table =
      f.synthetic.empty()
          ? embedding_from(l.checkpoint.config.at("embedding"), f.embeddings, spec.embedding_dim)
          : data::synth_corpus(data::parse_synth_kind(f.synthetic), f.data_seed, 1).embeddings;
  if (table.dim() != spec.embedding_dim) {
    throw ShapeError("synthetic vocabulary does not match the checkpoint's embedding width");
  }
  const data::LabelMap labels(l.labels);
  const data::Corpus corpus =
      f.synthetic.empty()
          ? data::read_conll(f.data_path, {}, &labels, data::Split::kTest)
          : data::synth_corpus(data::parse_synth_kind(f.synthetic), f.data_seed, f.size).corpus;
  if (corpus.labels.names() != l.labels) {
    throw FormatError("data labels do not match the checkpoint's label set");
  }
  const auto metric = f.metric.empty()
                          ? train::parse_metric(
                                l.checkpoint.config.at("train").at("metric").get<std::string>())
                          : train::parse_metric(f.metric);
  const double score = train::evaluate(l.model, data::embed(corpus, table), metric, l.labels);
  out << train::to_string(metric) << ' ' << percent(score) << '\n';
  return kExitOk;
}

struct PredictFlags {
  std::string checkpoint, input, output, embeddings;
  std::size_t token_column = 0;
};

// Keeps every input line and appends the predicted label to token lines.
int cmd_predict(const PredictFlags& f, std::ostream& out) {
  Loaded l = load_model(f.checkpoint);
  const auto table =
      embedding_from(l.checkpoint.config.at("embedding"), f.embeddings, l.model.spec().embedding_dim);
  std::ifstream in(f.input);
  if (!in) throw FormatError("cannot open '" + f.input + "'");
  std::ofstream dst(f.output);
  if (!dst) throw FormatError("cannot write '" + f.output + "'");

  std::vector<std::string> lines, tokens;
  std::size_t n_sentences = 0;
  auto flush = [&] {
    if (lines.empty()) return;
    const auto pred = train::predict(l.model, data::embed_tokens(tokens, table));
    for (std::size_t t = 0; t < lines.size(); ++t) {
      dst << lines[t] << ' ' << l.labels[static_cast<std::size_t>(pred[t])] << '\n';
    }
    lines.clear();
    tokens.clear();
    ++n_sentences;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream cols(line);
    std::vector<std::string> fields;
    for (std::string c; cols >> c;) fields.push_back(c);
    if (fields.empty() || fields[0] == "-DOCSTART-") {
      flush();
      dst << line << '\n';
      continue;
    }
    if (f.token_column >= fields.size()) {
      throw FormatError(f.input + ":" + std::to_string(line_no) + ": no column " +
                        std::to_string(f.token_column));
    }
    lines.push_back(line);
    tokens.push_back(fields[f.token_column]);
  }
  flush();
  out << "labelled " << n_sentences << " sentences into " << f.output << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const auto results = run_verify(o);
  bool ok = true;
  for (const auto& r : results) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "worst %.3e  tol %.0e  cases %zu  %.2fs", r.worst,
                  r.tolerance, r.cases, r.seconds);
    out << (r.passed() ? "PASS  " : "FAIL  ") << r.name << "  " << buf;
    if (!r.passed()) out << "  [worst case: " << r.worst_case << ']';
    out << '\n';
    ok &= r.passed();
  }
  out << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hidden neural Markov chain sequence labelling"};
  app.name("hnmc");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  TrainFlags tf;
  auto* train_cmd = app.add_subcommand("train", "train models and write checkpoints + manifest");
  train_cmd->add_option("--model", tf.model, "rnn|birnn|hnmc|hnmc2|hnmc-cn")
      ->required()
      ->check(CLI::IsMember({"rnn", "birnn", "hnmc", "hnmc2", "hnmc-cn"}));
  train_cmd->add_option("--arch", tf.arch, "1, 2 or 3")->check(CLI::Range(1, 3));
  train_cmd->add_option("--hidden-size", tf.hidden_size, "first-layer width for arch 2/3");
  train_cmd->add_option("--kernel-hidden", tf.kernel_hidden, "hidden widths inside EFB kernels")
      ->delimiter(',');
  train_cmd->add_option("--epochs", tf.epochs)->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch-size", tf.batch_size)->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", tf.lr, "learning rate, arch 1 (default 0.005)");
  train_cmd->add_option("--lr-layers", tf.lr_layers, "two rates, arch 2/3 (default 0.05,0.005)")
      ->delimiter(',');
  train_cmd->add_option("--optimizer", tf.optimizer)->check(CLI::IsMember({"adam", "sgd"}));
  train_cmd->add_option("--clip-norm", tf.clip_norm, "gradient norm cap, 0 = off")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_flag("--no-shuffle", tf.no_shuffle);
  train_cmd->add_option("--metric", tf.metric)->check(CLI::IsMember({"accuracy", "span_f1"}));
  train_cmd->add_option("--train", tf.train_path, "CoNLL training file");
  train_cmd->add_option("--dev", tf.dev_path, "CoNLL dev file");
  train_cmd->add_option("--synthetic", tf.synthetic, "hmm_sampled|lookahead")
      ->check(CLI::IsMember({"hmm_sampled", "lookahead"}));
  train_cmd->add_option("--synthetic-train", tf.synthetic_train)->check(CLI::PositiveNumber);
  train_cmd->add_option("--synthetic-dev", tf.synthetic_dev);
  train_cmd->add_option("--data-seed", tf.data_seed, "seed of the synthetic corpus");
  train_cmd->add_option("--embeddings", tf.embeddings, "word vectors, text format");
  train_cmd->add_flag("--one-hot", tf.one_hot, "one-hot vectors over the training vocabulary");
  train_cmd->add_flag("--lowercase", tf.lowercase, "lower-case embedding lookups");
  train_cmd->add_option("--seed", tf.seed, "first run seed");
  train_cmd->add_option("--repeats", tf.repeats, "runs with seeds seed..seed+k-1");
  train_cmd->add_option("--out", tf.out, "output directory")->required();

  EvalFlags ef;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint on labelled data");
  eval_cmd->add_option("--checkpoint", ef.checkpoint)->required();
  eval_cmd->add_option("--data", ef.data_path, "CoNLL file");
  eval_cmd->add_option("--synthetic", ef.synthetic)
      ->check(CLI::IsMember({"hmm_sampled", "lookahead"}));
  eval_cmd->add_option("--data-seed", ef.data_seed);
  eval_cmd->add_option("--size", ef.size)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--embeddings", ef.embeddings, "override the checkpoint's vectors");
  eval_cmd->add_option("--metric", ef.metric)->check(CLI::IsMember({"accuracy", "span_f1"}));

  PredictFlags pf;
  auto* predict_cmd = app.add_subcommand("predict", "append predicted labels to a CoNLL file");
  predict_cmd->add_option("--checkpoint", pf.checkpoint)->required();
  predict_cmd->add_option("--input", pf.input)->required();
  predict_cmd->add_option("--output", pf.output)->required();
  predict_cmd->add_option("--embeddings", pf.embeddings, "override the checkpoint's vectors");
  predict_cmd->add_option("--token-column", pf.token_column);

  VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "oracle, scaling and gradient checks");
  verify_cmd->add_option("--seeds", vo.seeds, "random models per oracle grid")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--max-states", vo.max_states);
  verify_cmd->add_option("--max-length", vo.max_length);
  verify_cmd->add_option("--seed", vo.seed);
  verify_cmd->add_flag("--inject-fault", vo.inject_fault,
                       "shift one observation before the entropic pass (must fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train_cmd) return cmd_train(tf, out);
    if (*eval_cmd) return cmd_evaluate(ef, out);
    if (*predict_cmd) return cmd_predict(pf, out);
    return cmd_verify(vo, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.get_subcommands().front()->help();
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const InferenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace hnmc::cli
