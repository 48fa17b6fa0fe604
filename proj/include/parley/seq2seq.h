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

#ifndef PARLEY_SEQ2SEQ_H_
#define PARLEY_SEQ2SEQ_H_

// Sequence-to-sequence LSTM encoder/decoder with dot-product attention.
//
// Layout:
//   embedding      V x H, shared by encoder and decoder inputs
//   encoder[l]     weights 4H x 2H, bias 4H  (gate rows: input, forget,
//   decoder[l]                                 output, candidate)
//   output         weights V x 2H over [decoder top hidden ; context], bias V
//
// The decoder starts from the encoder's final (h, c) in every layer.
// Attention weights are softmax(s . e_j) over encoder top-layer states e_j,
// where s is the decoder's top hidden state; the context is their weighted
// sum. All arithmetic is double precision.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace parley {

enum class SymbolMode { kChar, kWord };

inline constexpr std::string_view kStartSymbol = "<s>";
inline constexpr std::string_view kEndSymbol = "</s>";
inline constexpr std::string_view kUnknownSymbol = "<unk>";

struct Seq2SeqConfig {
  SymbolMode mode = SymbolMode::kChar;
  std::size_t layers = 2;
  std::size_t hidden = 128;
  // Must contain the three marker symbols.
  std::vector<std::string> vocab;
  std::size_t max_len = 128;
  double learning_rate = 0.1;
  double clip_norm = 5.0;
  std::uint64_t seed = 1;

  // Defaults per mode: 128 hidden units for characters, 500 for words.
  static Seq2SeqConfig Defaults(SymbolMode mode);
  // Throws std::invalid_argument when a structural field is invalid.
  void Validate() const;
  bool operator==(const Seq2SeqConfig&) const = default;
};

struct LstmLayer {
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;

  bool operator==(const LstmLayer& other) const {
    return weights == other.weights && bias == other.bias;
  }
};

// Trainable parameters. Also used, zero-initialized, as a gradient holder.
struct Seq2SeqParams {
  Eigen::MatrixXd embedding;
  std::vector<LstmLayer> encoder;
  std::vector<LstmLayer> decoder;
  Eigen::MatrixXd output_weights;
  Eigen::VectorXd output_bias;

  // Contiguous storage blocks in a fixed order, for flat parameter access.
  std::vector<std::span<double>> Blocks();
  std::vector<std::span<const double>> Blocks() const;
  std::size_t size() const;

  static Seq2SeqParams ZerosLike(const Seq2SeqParams& shape);
  bool operator==(const Seq2SeqParams& other) const;
};

struct Seq2SeqModel {
  Seq2SeqConfig config;
  Seq2SeqParams params;

  std::size_t vocab_size() const { return config.vocab.size(); }
  std::size_t SymbolId(std::string_view symbol) const;
  std::size_t start_id() const { return SymbolId(kStartSymbol); }
  std::size_t end_id() const { return SymbolId(kEndSymbol); }
  std::size_t unknown_id() const { return SymbolId(kUnknownSymbol); }

  bool operator==(const Seq2SeqModel&) const = default;
};

struct TrainPair {
  std::vector<std::size_t> source;
  // Terminated by the end marker.
  std::vector<std::size_t> target;
};

struct LstmState {
  std::vector<Eigen::VectorXd> h;
  std::vector<Eigen::VectorXd> c;
};

struct EncoderOutput {
  // Top-layer hidden state per source position.
  std::vector<Eigen::VectorXd> states;
  // Final (h, c) of every layer; the decoder's initial state.
  LstmState final_state;
};

struct DecodeOutput {
  Eigen::VectorXd logits;
  Eigen::VectorXd distribution;
  Eigen::VectorXd attention;
  LstmState state;
};

// Marker symbols first (<s>, </s>, <unk>), then the sorted symbol set of `texts`.
std::vector<std::string> BuildVocab(std::span<const std::string> texts, SymbolMode mode);
// Characters (whole UTF-8 sequences) or whitespace-separated lowercase words.
std::vector<std::string> SplitSymbols(std::string_view text, SymbolMode mode);

// Parameters uniform in [-0.08, 0.08] drawn from Lcg64(config.seed).
Seq2SeqModel InitModel(const Seq2SeqConfig& config);

// Symbol ids for `text` (unknowns mapped to <unk>) truncated to max_len - 1,
// followed by the end marker.
std::vector<std::size_t> EncodeText(const Seq2SeqModel& model, std::string_view text);
TrainPair MakePair(const Seq2SeqModel& model, std::string_view source, std::string_view target);
std::string DecodeSymbols(const Seq2SeqModel& model, std::span<const std::size_t> ids);

// Throws std::invalid_argument for an empty source or an out-of-range id.
EncoderOutput Encode(const Seq2SeqModel& model, std::span<const std::size_t> source);

DecodeOutput DecodeStep(const Seq2SeqModel& model, const LstmState& state,
                        std::size_t prev_symbol, std::span<const Eigen::VectorXd> encoder_states);

// Teacher-forced mean cross-entropy per target symbol.
double SequenceLoss(const Seq2SeqModel& model, const TrainPair& pair);

// Loss and exact gradients by backpropagation through time (unclipped).
std::pair<double, Seq2SeqParams> ComputeGradients(const Seq2SeqModel& model, const TrainPair& pair);

// One plain gradient-descent step with global-norm clipping at
// config.clip_norm. Returns the loss before the update.
double TrainStep(Seq2SeqModel& model, const TrainPair& pair, double learning_rate);

// Runs `steps` train steps, visiting pairs in a seeded shuffled order each
// epoch. Returns the per-step losses.
std::vector<double> TrainSteps(Seq2SeqModel& model, std::span<const TrainPair> pairs,
                               std::size_t steps, double learning_rate, std::uint64_t seed,
                               const std::function<void(std::size_t, double)>& on_step = {});

// Decodes until the end marker or max_len symbols. temperature == 0 takes the
// argmax (lowest id on ties); otherwise samples from softmax(logits / T).
std::vector<std::size_t> GenerateIds(const Seq2SeqModel& model, std::span<const std::size_t> source,
                                     double temperature, std::size_t max_len, std::uint64_t seed);
std::string Generate(const Seq2SeqModel& model, std::string_view source, double temperature,
                     std::size_t max_len, std::uint64_t seed);

// Text format: header lines, JSON-quoted vocabulary, then each matrix as
// "matrix <name> <rows> <cols>" followed by rows of shortest round-trip
// decimals.
std::string SerializeSeq2Seq(const Seq2SeqModel& model);
Seq2SeqModel ParseSeq2Seq(std::string_view text);
void SaveSeq2Seq(const Seq2SeqModel& model, const std::filesystem::path& path);
Seq2SeqModel LoadSeq2Seq(const std::filesystem::path& path);

// Training corpus: one "source<TAB>target" pair per line.
std::vector<std::pair<std::string, std::string>> LoadPairCorpus(const std::filesystem::path& path);

}  // namespace parley

#endif  // PARLEY_SEQ2SEQ_H_
