// Copyright 2026 The Parley Authors.
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

// Command-line entry point: chat, serve, train, eval, synth and analytics.

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parley/analytics.h"
#include "parley/config.h"
#include "parley/engagement.h"
#include "parley/pipeline.h"
#include "parley/repl.h"
#include "parley/seq2seq.h"
#include "parley/server.h"
#include "parley/svm.h"
#include "parley/topic_forest.h"

namespace {

using parley::FeatureMode;

#ifndef PARLEY_DEFAULT_CONFIG
#define PARLEY_DEFAULT_CONFIG "data/parley.conf"
#endif

parley::ChatServer* g_server = nullptr;

void HandleSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

struct Loaded {
  parley::PipelineConfig config;
  std::unique_ptr<parley::SessionStore> store;
  parley::SystemClock clock;
  std::unique_ptr<parley::Pipeline> pipeline;
};

std::unique_ptr<Loaded> LoadPipeline(const std::string& config_path) {
  auto loaded = std::make_unique<Loaded>();
  loaded->config = parley::LoadConfig(config_path);
  parley::PipelineResources resources = parley::LoadResources(loaded->config);
  loaded->store = std::make_unique<parley::SessionStore>(loaded->config.log_dir);
  loaded->pipeline = std::make_unique<parley::Pipeline>(loaded->config, std::move(resources),
                                                       *loaded->store, loaded->clock);
  return loaded;
}

int Chat(const std::string& config_path) {
  auto loaded = LoadPipeline(config_path);
  return parley::RunRepl(*loaded->pipeline, std::cin, std::cout);
}

int Serve(const std::string& config_path, const std::string& host, int port) {
  auto loaded = LoadPipeline(config_path);
  parley::ChatServer server(*loaded->pipeline);
  const int bound = server.Bind(host, port);
  g_server = &server;
  std::signal(SIGINT, HandleSignal);
  std::signal(SIGTERM, HandleSignal);
  std::cout << "listening on http://" << host << ':' << bound << std::endl;
  server.Run();
  g_server = nullptr;
  return 0;
}

int TrainTopic(const std::string& data, const std::string& out, std::uint64_t seed) {
  const auto corpus = parley::LoadLabeledCorpus(data);
  parley::ForestConfig config;
  config.seed = seed;
  const parley::TopicModel model = parley::TrainTopicForest(corpus, config);
  parley::SaveTopicModel(model, out);
  std::cout << "trained " << model.trees.size() << " trees on " << corpus.size()
            << " documents -> " << out << '\n';
  return 0;
}

int TrainEngagement(const std::string& data, const std::string& out, std::uint64_t seed,
                    const std::string& mode_name) {
  const auto mode = parley::ParseFeatureMode(mode_name);
  if (!mode) throw std::invalid_argument("unknown mode " + mode_name);
  const auto examples = parley::LoadEngagementCorpus(data);
  const parley::LabeledFeatures training = parley::PrepareTrainingData(examples, *mode);
  parley::SvmConfig config;
  config.seed = seed;
  const parley::SvmModel model = parley::TrainSvm(training.features, training.labels, config, *mode);
  parley::SaveSvm(model, out);
  std::cout << "trained " << mode_name << " svm on " << training.labels.size()
            << " labeled examples, training accuracy "
            << parley::Accuracy(model, training.features, training.labels) << " -> " << out
            << '\n';
  return 0;
}

struct Seq2SeqOptions {
  std::string mode = "char";
  std::size_t hidden = 0;
  std::size_t layers = 2;
  std::size_t steps = 2000;
  std::size_t max_len = 0;
  double learning_rate = 0.1;
};

int TrainSeq2Seq(const std::string& data, const std::string& out, std::uint64_t seed,
                 const Seq2SeqOptions& options) {
  const parley::SymbolMode mode =
      options.mode == "word" ? parley::SymbolMode::kWord : parley::SymbolMode::kChar;
  if (options.mode != "word" && options.mode != "char") {
    throw std::invalid_argument("mode must be char or word");
  }
  const auto pairs = parley::LoadPairCorpus(data);
  if (pairs.empty()) throw std::invalid_argument("no training pairs in " + data);
  std::vector<std::string> texts;
  for (const auto& [source, target] : pairs) {
    texts.push_back(source);
    texts.push_back(target);
  }
  parley::Seq2SeqConfig config = parley::Seq2SeqConfig::Defaults(mode);
  config.vocab = parley::BuildVocab(texts, mode);
  config.layers = options.layers;
  if (options.hidden > 0) config.hidden = options.hidden;
  if (options.max_len > 0) config.max_len = options.max_len;
  config.learning_rate = options.learning_rate;
  config.seed = seed;
  parley::Seq2SeqModel model = parley::InitModel(config);

  std::vector<parley::TrainPair> train;
  for (const auto& [source, target] : pairs) train.push_back(parley::MakePair(model, source, target));
  double window = 0.0;
  const std::size_t report = std::max<std::size_t>(1, options.steps / 10);
  parley::TrainSteps(model, train, options.steps, config.learning_rate, seed,
                     [&](std::size_t step, double loss) {
                       window += loss;
                       if ((step + 1) % report == 0) {
                         std::cout << "step " << step + 1 << " mean loss "
                                   << window / static_cast<double>(report) << '\n';
                         window = 0.0;
                       }
                     });
  parley::SaveSeq2Seq(model, out);
  std::cout << "saved " << model.params.size() << " parameters -> " << out << '\n';
  return 0;
}

int EvalEngagement(const std::string& mode_name, const std::string& data, std::size_t count,
                   std::uint64_t seed) {
  const auto mode = parley::ParseFeatureMode(mode_name);
  if (!mode) throw std::invalid_argument("unknown mode " + mode_name);
  const std::vector<parley::EngagementExample> examples =
      data.empty() ? parley::SyntheticEngagementCorpus(count, seed)
                   : parley::LoadEngagementCorpus(data);
  const std::size_t half = examples.size() / 2;
  const std::span<const parley::EngagementExample> all(examples);
  parley::SvmConfig config;
  config.seed = seed;
  const parley::EngagementEvaluation eval =
      parley::EvaluateEngagement(all.first(half), all.subspan(half), *mode, config);
  std::cout << "mode " << mode_name << ": train " << eval.train_size << " examples, accuracy "
            << eval.train_accuracy << "; test " << eval.test_size << " examples, accuracy "
            << eval.test_accuracy << '\n';
  return 0;
}

int SynthEngagement(const std::string& out, std::size_t count, std::uint64_t seed) {
  const auto examples = parley::SyntheticEngagementCorpus(count, seed);
  parley::SaveEngagementCorpus(examples, out);
  std::cout << "wrote " << examples.size() << " examples -> " << out << '\n';
  return 0;
}

int SynthTopic(const std::string& out, std::size_t docs_per_class, std::size_t length,
               std::uint64_t seed) {
  std::ofstream file(out);
  const auto corpus = parley::SyntheticTopicCorpus(docs_per_class, length, seed);
  for (const parley::LabeledText& doc : corpus) {
    file << parley::TopicName(doc.topic) << '\t' << doc.text << '\n';
  }
  if (!file) throw std::runtime_error("failed to write " + out);
  std::cout << "wrote " << corpus.size() << " documents -> " << out << '\n';
  return 0;
}

int Analytics(const std::string& logs, const std::vector<std::string>& markers, bool json) {
  const parley::StatsTable table = parley::ComputeStatsFromLogs(logs, markers);
  if (json) {
    std::cout << parley::StatsToJson(table).dump(2) << '\n';
  } else {
    std::cout << parley::StatsToText(table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parley: an ensemble open-domain chatbot"};
  app.require_subcommand(1);

  std::string config_path = PARLEY_DEFAULT_CONFIG;
  auto* chat = app.add_subcommand("chat", "Interactive terminal chat");
  chat->add_option("--config", config_path, "Pipeline config file");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--config", config_path, "Pipeline config file");

  auto* train = app.add_subcommand("train", "Train a model");
  train->require_subcommand(1);
  std::string data;
  std::string out;
  std::uint64_t seed = 42;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--data", data, "Training data file")->required();
    sub->add_option("--out", out, "Output model file")->required();
    sub->add_option("--seed", seed, "Random seed");
  };
  auto* train_topic = train->add_subcommand("topic", "Topic forest from '<Topic>\\t<text>' lines");
  add_common(train_topic);
  auto* train_engagement = train->add_subcommand("engagement", "Engagement SVM from JSON lines");
  add_common(train_engagement);
  std::string train_mode = "lexical";
  train_engagement->add_option("--mode", train_mode, "lexical, external or full")
      ->check(CLI::IsMember({"lexical", "external", "full"}));
  auto* train_seq2seq = train->add_subcommand("seq2seq", "Seq2seq model from tab-separated pairs");
  add_common(train_seq2seq);
  Seq2SeqOptions seq2seq_options;
  train_seq2seq->add_option("--mode", seq2seq_options.mode, "char or word")
      ->check(CLI::IsMember({"char", "word"}));
  train_seq2seq->add_option("--hidden", seq2seq_options.hidden, "Hidden units (default by mode)");
  train_seq2seq->add_option("--layers", seq2seq_options.layers, "LSTM layers");
  train_seq2seq->add_option("--steps", seq2seq_options.steps, "Training steps");
  train_seq2seq->add_option("--max-len", seq2seq_options.max_len, "Maximum sequence length");
  train_seq2seq->add_option("--lr", seq2seq_options.learning_rate, "Learning rate");

  auto* eval = app.add_subcommand("eval", "Evaluate a model");
  eval->require_subcommand(1);
  auto* eval_engagement = eval->add_subcommand(
      "engagement", "Train on the first half of a corpus and test on the second");
  std::string eval_mode = "full";
  std::string eval_data;
  std::size_t eval_count = 6000;
  eval_engagement->add_option("--mode", eval_mode, "lexical, external or full")
      ->check(CLI::IsMember({"lexical", "external", "full"}));
  eval_engagement->add_option("--data", eval_data, "Corpus file (default: synthetic)");
  eval_engagement->add_option("--count", eval_count, "Synthetic corpus size");
  eval_engagement->add_option("--seed", seed, "Random seed");

  auto* analytics = app.add_subcommand("analytics", "Rating statistics over session logs");
  std::string logs;
  std::vector<std::string> markers = parley::DefaultMarkerWords();
  bool json = false;
  analytics->add_option("--logs", logs, "Log directory")->required();
  analytics->add_option("--markers", markers, "Marker words")->delimiter(',');
  analytics->add_flag("--json", json, "Print JSON instead of a table");

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->require_subcommand(1);
  std::string synth_out;
  std::size_t synth_count = 6000;
  std::size_t docs_per_class = 100;
  std::size_t doc_length = 12;
  auto* synth_engagement = synth->add_subcommand("engagement", "Engagement examples as JSON lines");
  synth_engagement->add_option("--out", synth_out, "Output file")->required();
  synth_engagement->add_option("--count", synth_count, "Number of examples");
  synth_engagement->add_option("--seed", seed, "Random seed");
  auto* synth_topic = synth->add_subcommand("topic", "Labeled topic documents as TSV");
  synth_topic->add_option("--out", synth_out, "Output file")->required();
  synth_topic->add_option("--docs-per-class", docs_per_class, "Documents per topic");
  synth_topic->add_option("--length", doc_length, "Words per document");
  synth_topic->add_option("--seed", seed, "Random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*chat) return Chat(config_path);
    if (*serve) return Serve(config_path, host, port);
    if (*train_topic) return TrainTopic(data, out, seed);
    if (*train_engagement) return TrainEngagement(data, out, seed, train_mode);
    if (*train_seq2seq) return TrainSeq2Seq(data, out, seed, seq2seq_options);
    if (*eval_engagement) return EvalEngagement(eval_mode, eval_data, eval_count, seed);
    if (*synth_engagement) return SynthEngagement(synth_out, synth_count, seed);
    if (*synth_topic) return SynthTopic(synth_out, docs_per_class, doc_length, seed);
    if (*analytics) return Analytics(logs, markers, json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
