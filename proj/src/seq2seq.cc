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

#include "parley/seq2seq.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "parley/prng.h"
#include "parley/text.h"

namespace parley {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInitRange = 0.08;

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

VectorXd Softmax(const VectorXd& scores) {
  const double max = scores.maxCoeff();
  VectorXd out = (scores.array() - max).exp().matrix();
  return out / out.sum();
}

// Values kept from an LSTM forward step for backpropagation.
struct StepCache {
  VectorXd xh;  // [input ; h_prev]
  VectorXd input_gate;
  VectorXd forget_gate;
  VectorXd output_gate;
  VectorXd candidate;
  VectorXd c_prev;
  VectorXd tanh_c;
};

using LayerCaches = std::vector<StepCache>;

void LstmForward(const LstmLayer& layer, const VectorXd& x, const VectorXd& h_prev,
                 const VectorXd& c_prev, VectorXd& h, VectorXd& c, StepCache* cache) {
  const Eigen::Index hidden = h_prev.size();
  VectorXd xh(x.size() + hidden);
  xh << x, h_prev;
  const VectorXd z = layer.weights * xh + layer.bias;
  VectorXd input_gate = z.segment(0, hidden).unaryExpr(&Sigmoid);
  VectorXd forget_gate = z.segment(hidden, hidden).unaryExpr(&Sigmoid);
  VectorXd output_gate = z.segment(2 * hidden, hidden).unaryExpr(&Sigmoid);
  VectorXd candidate = z.segment(3 * hidden, hidden).array().tanh().matrix();
  c = forget_gate.cwiseProduct(c_prev) + input_gate.cwiseProduct(candidate);
  VectorXd tanh_c = c.array().tanh().matrix();
  h = output_gate.cwiseProduct(tanh_c);
  if (cache != nullptr) {
    cache->xh = std::move(xh);
    cache->input_gate = std::move(input_gate);
    cache->forget_gate = std::move(forget_gate);
    cache->output_gate = std::move(output_gate);
    cache->candidate = std::move(candidate);
    cache->c_prev = c_prev;
    cache->tanh_c = std::move(tanh_c);
  }
}

void LstmBackward(const LstmLayer& layer, LstmLayer& grad, const StepCache& cache,
                  const VectorXd& dh, const VectorXd& dc, VectorXd& dx, VectorXd& dh_prev,
                  VectorXd& dc_prev) {
  const Eigen::Index hidden = dh.size();
  const auto ones = VectorXd::Ones(hidden).array();
  const VectorXd d_output = dh.cwiseProduct(cache.tanh_c);
  const VectorXd dc_total =
      dc + (dh.array() * cache.output_gate.array() * (ones - cache.tanh_c.array().square()))
               .matrix();
  const VectorXd d_input = dc_total.cwiseProduct(cache.candidate);
  const VectorXd d_candidate = dc_total.cwiseProduct(cache.input_gate);
  const VectorXd d_forget = dc_total.cwiseProduct(cache.c_prev);
  dc_prev = dc_total.cwiseProduct(cache.forget_gate);

  VectorXd dz(4 * hidden);
  dz.segment(0, hidden) =
      (d_input.array() * cache.input_gate.array() * (ones - cache.input_gate.array())).matrix();
  dz.segment(hidden, hidden) =
      (d_forget.array() * cache.forget_gate.array() * (ones - cache.forget_gate.array())).matrix();
  dz.segment(2 * hidden, hidden) =
      (d_output.array() * cache.output_gate.array() * (ones - cache.output_gate.array())).matrix();
  dz.segment(3 * hidden, hidden) =
      (d_candidate.array() * (ones - cache.candidate.array().square())).matrix();

  grad.weights.noalias() += dz * cache.xh.transpose();
  grad.bias += dz;
  const VectorXd dxh = layer.weights.transpose() * dz;
  dx = dxh.head(dxh.size() - hidden);
  dh_prev = dxh.tail(hidden);
}

LstmState ZeroState(const Seq2SeqModel& model) {
  const auto hidden = static_cast<Eigen::Index>(model.config.hidden);
  LstmState state;
  state.h.assign(model.config.layers, VectorXd::Zero(hidden));
  state.c.assign(model.config.layers, VectorXd::Zero(hidden));
  return state;
}

void CheckSymbol(const Seq2SeqModel& model, std::size_t id) {
  if (id >= model.vocab_size()) {
    throw std::invalid_argument("symbol id " + std::to_string(id) + " out of range");
  }
}

EncoderOutput EncodeImpl(const Seq2SeqModel& model, std::span<const std::size_t> source,
                         std::vector<LayerCaches>* caches) {
  if (source.empty()) throw std::invalid_argument("encoder source is empty");
  const Seq2SeqParams& p = model.params;
  EncoderOutput out;
  out.final_state = ZeroState(model);
  LstmState& state = out.final_state;
  for (std::size_t id : source) {
    CheckSymbol(model, id);
    VectorXd x = p.embedding.row(static_cast<Eigen::Index>(id)).transpose();
    LayerCaches* step = nullptr;
    if (caches != nullptr) step = &caches->emplace_back(model.config.layers);
    for (std::size_t l = 0; l < model.config.layers; ++l) {
      VectorXd h;
      VectorXd c;
      LstmForward(p.encoder[l], x, state.h[l], state.c[l], h, c,
                  step != nullptr ? &(*step)[l] : nullptr);
      state.h[l] = h;
      state.c[l] = std::move(c);
      x = std::move(h);
    }
    out.states.push_back(std::move(x));
  }
  return out;
}

// `top` and `context` receive the decoder top hidden state and the attention
// context when non-null.
DecodeOutput DecodeImpl(const Seq2SeqModel& model, const LstmState& state,
                        std::size_t prev_symbol, std::span<const VectorXd> encoder_states,
                        LayerCaches* caches, VectorXd* top, VectorXd* context) {
  if (encoder_states.empty()) throw std::invalid_argument("decoder needs encoder states");
  CheckSymbol(model, prev_symbol);
  const Seq2SeqParams& p = model.params;
  const auto hidden = static_cast<Eigen::Index>(model.config.hidden);

  DecodeOutput out;
  out.state = state;
  VectorXd x = p.embedding.row(static_cast<Eigen::Index>(prev_symbol)).transpose();
  for (std::size_t l = 0; l < model.config.layers; ++l) {
    VectorXd h;
    VectorXd c;
    LstmForward(p.decoder[l], x, state.h[l], state.c[l], h, c,
                caches != nullptr ? &(*caches)[l] : nullptr);
    out.state.h[l] = h;
    out.state.c[l] = std::move(c);
    x = std::move(h);
  }

  VectorXd scores(static_cast<Eigen::Index>(encoder_states.size()));
  for (std::size_t j = 0; j < encoder_states.size(); ++j) {
    scores(static_cast<Eigen::Index>(j)) = x.dot(encoder_states[j]);
  }
  out.attention = Softmax(scores);
  VectorXd ctx = VectorXd::Zero(hidden);
  for (std::size_t j = 0; j < encoder_states.size(); ++j) {
    ctx += out.attention(static_cast<Eigen::Index>(j)) * encoder_states[j];
  }
  VectorXd joined(2 * hidden);
  joined << x, ctx;
  out.logits = p.output_weights * joined + p.output_bias;
  out.distribution = Softmax(out.logits);
  if (top != nullptr) *top = std::move(x);
  if (context != nullptr) *context = std::move(ctx);
  return out;
}

bool IsUtf8Continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }

std::string FormatDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double ParseDouble(std::string_view token) {
  double value = 0.0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw std::invalid_argument("bad number in model file: " + std::string(token));
  }
  return value;
}

void WriteMatrix(std::ostringstream& out, std::string_view name, const MatrixXd& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ' ';
      out << FormatDouble(m(r, c));
    }
    out << '\n';
  }
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::string_view Next() {
    if (pos_ >= text_.size()) throw std::invalid_argument("model file truncated");
    const std::size_t end = text_.find('\n', pos_);
    const std::size_t stop = end == std::string_view::npos ? text_.size() : end;
    std::string_view line = text_.substr(pos_, stop - pos_);
    pos_ = stop + 1;
    return line;
  }

  // Reads "key value" and returns value.
  std::string_view Field(std::string_view key) {
    std::string_view line = Next();
    if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != ' ') {
      throw std::invalid_argument("expected field '" + std::string(key) + "'");
    }
    return line.substr(key.size() + 1);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > begin) parts.push_back(line.substr(begin, i - begin));
  }
  return parts;
}

std::size_t ParseSize(std::string_view token) {
  std::size_t value = 0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw std::invalid_argument("bad integer in model file: " + std::string(token));
  }
  return value;
}

MatrixXd ReadMatrix(LineReader& reader, std::string_view name) {
  const auto header = SplitSpaces(reader.Next());
  if (header.size() != 4 || header[0] != "matrix" || header[1] != name) {
    throw std::invalid_argument("expected matrix " + std::string(name));
  }
  const auto rows = static_cast<Eigen::Index>(ParseSize(header[2]));
  const auto cols = static_cast<Eigen::Index>(ParseSize(header[3]));
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto values = SplitSpaces(reader.Next());
    if (static_cast<Eigen::Index>(values.size()) != cols) {
      throw std::invalid_argument("matrix " + std::string(name) + " row has wrong width");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = ParseDouble(values[static_cast<std::size_t>(c)]);
  }
  return m;
}

void CheckShapes(const Seq2SeqModel& model) {
  const auto v = static_cast<Eigen::Index>(model.vocab_size());
  const auto h = static_cast<Eigen::Index>(model.config.hidden);
  const Seq2SeqParams& p = model.params;
  bool ok = p.embedding.rows() == v && p.embedding.cols() == h &&
            p.encoder.size() == model.config.layers && p.decoder.size() == model.config.layers &&
            p.output_weights.rows() == v && p.output_weights.cols() == 2 * h &&
            p.output_bias.size() == v;
  for (const auto* stack : {&p.encoder, &p.decoder}) {
    for (const LstmLayer& layer : *stack) {
      ok = ok && layer.weights.rows() == 4 * h && layer.weights.cols() == 2 * h &&
           layer.bias.size() == 4 * h;
    }
  }
  if (!ok) throw std::invalid_argument("seq2seq parameter shapes do not match config");
  for (std::span<const double> block : p.Blocks()) {
    for (double value : block) {
      if (!std::isfinite(value)) throw std::invalid_argument("non-finite seq2seq parameter");
    }
  }
}

}  // namespace

// Config ---------------------------------------------------------------------

Seq2SeqConfig Seq2SeqConfig::Defaults(SymbolMode mode) {
  Seq2SeqConfig config;
  config.mode = mode;
  config.hidden = mode == SymbolMode::kChar ? 128 : 500;
  return config;
}

void Seq2SeqConfig::Validate() const {
  if (layers < 1) throw std::invalid_argument("seq2seq needs at least one layer");
  if (hidden < 1) throw std::invalid_argument("seq2seq needs at least one hidden unit");
  if (max_len < 2) throw std::invalid_argument("seq2seq max_len must be at least 2");
  for (std::string_view marker : {kStartSymbol, kEndSymbol, kUnknownSymbol}) {
    if (std::find(vocab.begin(), vocab.end(), marker) == vocab.end()) {
      throw std::invalid_argument("vocabulary lacks marker " + std::string(marker));
    }
  }
}

// Params ---------------------------------------------------------------------

std::vector<std::span<double>> Seq2SeqParams::Blocks() {
  std::vector<std::span<double>> blocks;
  const auto add = [&](auto& m) { blocks.emplace_back(m.data(), static_cast<std::size_t>(m.size())); };
  add(embedding);
  for (LstmLayer& layer : encoder) {
    add(layer.weights);
    add(layer.bias);
  }
  for (LstmLayer& layer : decoder) {
    add(layer.weights);
    add(layer.bias);
  }
  add(output_weights);
  add(output_bias);
  return blocks;
}

std::vector<std::span<const double>> Seq2SeqParams::Blocks() const {
  std::vector<std::span<const double>> blocks;
  for (std::span<double> block : const_cast<Seq2SeqParams*>(this)->Blocks()) {
    blocks.emplace_back(block.data(), block.size());
  }
  return blocks;
}

std::size_t Seq2SeqParams::size() const {
  std::size_t total = 0;
  for (std::span<const double> block : Blocks()) total += block.size();
  return total;
}

Seq2SeqParams Seq2SeqParams::ZerosLike(const Seq2SeqParams& shape) {
  Seq2SeqParams zeros;
  zeros.embedding = MatrixXd::Zero(shape.embedding.rows(), shape.embedding.cols());
  for (const LstmLayer& layer : shape.encoder) {
    zeros.encoder.push_back({MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                             VectorXd::Zero(layer.bias.size())});
  }
  for (const LstmLayer& layer : shape.decoder) {
    zeros.decoder.push_back({MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                             VectorXd::Zero(layer.bias.size())});
  }
  zeros.output_weights = MatrixXd::Zero(shape.output_weights.rows(), shape.output_weights.cols());
  zeros.output_bias = VectorXd::Zero(shape.output_bias.size());
  return zeros;
}

bool Seq2SeqParams::operator==(const Seq2SeqParams& other) const {
  const auto mine = Blocks();
  const auto theirs = other.Blocks();
  if (mine.size() != theirs.size()) return false;
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (!std::equal(mine[i].begin(), mine[i].end(), theirs[i].begin(), theirs[i].end())) {
      return false;
    }
  }
  return embedding.rows() == other.embedding.rows() &&
         output_weights.cols() == other.output_weights.cols();
}

std::size_t Seq2SeqModel::SymbolId(std::string_view symbol) const {
  const auto it = std::find(config.vocab.begin(), config.vocab.end(), symbol);
  if (it == config.vocab.end()) return config.vocab.size();
  return static_cast<std::size_t>(it - config.vocab.begin());
}

// Vocabulary -----------------------------------------------------------------

std::vector<std::string> SplitSymbols(std::string_view text, SymbolMode mode) {
  std::vector<std::string> symbols;
  if (mode == SymbolMode::kWord) {
    std::istringstream in{std::string(text)};
    std::string word;
    while (in >> word) symbols.push_back(ToLower(word));
    return symbols;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t end = i + 1;
    while (end < text.size() && IsUtf8Continuation(text[end])) ++end;
    symbols.emplace_back(text.substr(i, end - i));
    i = end;
  }
  return symbols;
}

std::vector<std::string> BuildVocab(std::span<const std::string> texts, SymbolMode mode) {
  std::vector<std::string> symbols;
  for (const std::string& text : texts) {
    for (std::string& symbol : SplitSymbols(text, mode)) symbols.push_back(std::move(symbol));
  }
  std::sort(symbols.begin(), symbols.end());
  symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
  std::vector<std::string> vocab = {std::string(kStartSymbol), std::string(kEndSymbol),
                                    std::string(kUnknownSymbol)};
  for (std::string& symbol : symbols) {
    if (symbol == kStartSymbol || symbol == kEndSymbol || symbol == kUnknownSymbol) continue;
    vocab.push_back(std::move(symbol));
  }
  return vocab;
}

// Model ----------------------------------------------------------------------

Seq2SeqModel InitModel(const Seq2SeqConfig& config) {
  config.Validate();
  Seq2SeqModel model;
  model.config = config;
  const auto v = static_cast<Eigen::Index>(config.vocab.size());
  const auto h = static_cast<Eigen::Index>(config.hidden);
  Seq2SeqParams& p = model.params;
  p.embedding.resize(v, h);
  for (std::size_t l = 0; l < config.layers; ++l) {
    p.encoder.push_back({MatrixXd(4 * h, 2 * h), VectorXd(4 * h)});
    p.decoder.push_back({MatrixXd(4 * h, 2 * h), VectorXd(4 * h)});
  }
  p.output_weights.resize(v, 2 * h);
  p.output_bias.resize(v);

  Lcg64 rng(config.seed);
  for (std::span<double> block : p.Blocks()) {
    for (double& value : block) value = rng.Uniform(-kInitRange, kInitRange);
  }
  return model;
}

std::vector<std::size_t> EncodeText(const Seq2SeqModel& model, std::string_view text) {
  std::vector<std::size_t> ids;
  for (const std::string& symbol : SplitSymbols(text, model.config.mode)) {
    if (ids.size() + 1 >= model.config.max_len) break;
    const std::size_t id = model.SymbolId(symbol);
    ids.push_back(id < model.vocab_size() ? id : model.unknown_id());
  }
  ids.push_back(model.end_id());
  return ids;
}

TrainPair MakePair(const Seq2SeqModel& model, std::string_view source, std::string_view target) {
  return TrainPair{EncodeText(model, source), EncodeText(model, target)};
}

std::string DecodeSymbols(const Seq2SeqModel& model, std::span<const std::size_t> ids) {
  std::string out;
  const std::size_t start = model.start_id();
  const std::size_t end = model.end_id();
  const std::size_t unknown = model.unknown_id();
  for (std::size_t id : ids) {
    if (id == start || id == end || id == unknown || id >= model.vocab_size()) continue;
    if (model.config.mode == SymbolMode::kWord && !out.empty()) out.push_back(' ');
    out += model.config.vocab[id];
  }
  return out;
}

EncoderOutput Encode(const Seq2SeqModel& model, std::span<const std::size_t> source) {
  return EncodeImpl(model, source, nullptr);
}

DecodeOutput DecodeStep(const Seq2SeqModel& model, const LstmState& state,
                        std::size_t prev_symbol, std::span<const VectorXd> encoder_states) {
  return DecodeImpl(model, state, prev_symbol, encoder_states, nullptr, nullptr, nullptr);
}

double SequenceLoss(const Seq2SeqModel& model, const TrainPair& pair) {
  if (pair.target.empty()) throw std::invalid_argument("empty target sequence");
  const EncoderOutput encoded = Encode(model, pair.source);
  LstmState state = encoded.final_state;
  std::size_t prev = model.start_id();
  double loss = 0.0;
  for (std::size_t y : pair.target) {
    CheckSymbol(model, y);
    DecodeOutput out = DecodeStep(model, state, prev, encoded.states);
    loss -= std::log(out.distribution(static_cast<Eigen::Index>(y)));
    state = std::move(out.state);
    prev = y;
  }
  return loss / static_cast<double>(pair.target.size());
}

std::pair<double, Seq2SeqParams> ComputeGradients(const Seq2SeqModel& model,
                                                  const TrainPair& pair) {
  if (pair.target.empty()) throw std::invalid_argument("empty target sequence");
  const Seq2SeqParams& p = model.params;
  const std::size_t layers = model.config.layers;
  const auto hidden = static_cast<Eigen::Index>(model.config.hidden);
  const std::size_t steps = pair.target.size();
  const double scale = 1.0 / static_cast<double>(steps);

  // Forward.
  std::vector<LayerCaches> encoder_caches;
  const EncoderOutput encoded = EncodeImpl(model, pair.source, &encoder_caches);
  const std::size_t n = encoded.states.size();

  std::vector<LayerCaches> decoder_caches(steps, LayerCaches(layers));
  std::vector<VectorXd> tops(steps);
  std::vector<VectorXd> contexts(steps);
  std::vector<VectorXd> attentions(steps);
  std::vector<VectorXd> distributions(steps);
  LstmState state = encoded.final_state;
  std::size_t prev = model.start_id();
  double loss = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t y = pair.target[t];
    CheckSymbol(model, y);
    DecodeOutput out = DecodeImpl(model, state, prev, encoded.states, &decoder_caches[t],
                                  &tops[t], &contexts[t]);
    loss -= std::log(out.distribution(static_cast<Eigen::Index>(y)));
    attentions[t] = std::move(out.attention);
    distributions[t] = std::move(out.distribution);
    state = std::move(out.state);
    prev = y;
  }
  loss *= scale;

  // Backward through the decoder.
  Seq2SeqParams grads = Seq2SeqParams::ZerosLike(p);
  std::vector<VectorXd> d_encoder(n, VectorXd::Zero(hidden));
  std::vector<VectorXd> dh_next(layers, VectorXd::Zero(hidden));
  std::vector<VectorXd> dc_next(layers, VectorXd::Zero(hidden));
  VectorXd dx;
  VectorXd dh_prev;
  VectorXd dc_prev;

  for (std::size_t t = steps; t-- > 0;) {
    VectorXd d_logits = distributions[t];
    d_logits(static_cast<Eigen::Index>(pair.target[t])) -= 1.0;
    d_logits *= scale;

    VectorXd joined(2 * hidden);
    joined << tops[t], contexts[t];
    grads.output_weights.noalias() += d_logits * joined.transpose();
    grads.output_bias += d_logits;
    const VectorXd d_joined = p.output_weights.transpose() * d_logits;
    VectorXd d_top = d_joined.head(hidden);
    const VectorXd d_context = d_joined.tail(hidden);

    const VectorXd& attention = attentions[t];
    VectorXd d_attention(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      d_attention(jj) = encoded.states[j].dot(d_context);
      d_encoder[j] += attention(jj) * d_context;
    }
    const double weighted = attention.dot(d_attention);
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double d_score = attention(jj) * (d_attention(jj) - weighted);
      d_top += d_score * encoded.states[j];
      d_encoder[j] += d_score * tops[t];
    }

    VectorXd d_from_above = std::move(d_top);
    for (std::size_t l = layers; l-- > 0;) {
      const VectorXd dh = d_from_above + dh_next[l];
      LstmBackward(p.decoder[l], grads.decoder[l], decoder_caches[t][l], dh, dc_next[l], dx,
                   dh_prev, dc_prev);
      dh_next[l] = dh_prev;
      dc_next[l] = dc_prev;
      d_from_above = dx;
    }
    const std::size_t input = t == 0 ? model.start_id() : pair.target[t - 1];
    grads.embedding.row(static_cast<Eigen::Index>(input)) += d_from_above.transpose();
  }

  // dh_next / dc_next now hold the gradient of the decoder's initial state,
  // which is the encoder's final state.
  for (std::size_t j = n; j-- > 0;) {
    VectorXd d_from_above = d_encoder[j];
    for (std::size_t l = layers; l-- > 0;) {
      const VectorXd dh = d_from_above + dh_next[l];
      LstmBackward(p.encoder[l], grads.encoder[l], encoder_caches[j][l], dh, dc_next[l], dx,
                   dh_prev, dc_prev);
      dh_next[l] = dh_prev;
      dc_next[l] = dc_prev;
      d_from_above = dx;
    }
    grads.embedding.row(static_cast<Eigen::Index>(pair.source[j])) += d_from_above.transpose();
  }
  return {loss, std::move(grads)};
}

double TrainStep(Seq2SeqModel& model, const TrainPair& pair, double learning_rate) {
  auto [loss, grads] = ComputeGradients(model, pair);
  double squared = 0.0;
  for (std::span<const double> block : std::as_const(grads).Blocks()) {
    for (double g : block) squared += g * g;
  }
  const double norm = std::sqrt(squared);
  double step = learning_rate;
  if (norm > model.config.clip_norm && norm > 0.0) step *= model.config.clip_norm / norm;

  auto params = model.params.Blocks();
  auto gradient_blocks = grads.Blocks();
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t i = 0; i < params[b].size(); ++i) params[b][i] -= step * gradient_blocks[b][i];
  }
  return loss;
}

std::vector<double> TrainSteps(Seq2SeqModel& model, std::span<const TrainPair> pairs,
                               std::size_t steps, double learning_rate, std::uint64_t seed,
                               const std::function<void(std::size_t, double)>& on_step) {
  if (pairs.empty()) throw std::invalid_argument("no training pairs");
  Lcg64 rng(seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> losses;
  losses.reserve(steps);
  std::size_t cursor = order.size();
  for (std::size_t step = 0; step < steps; ++step) {
    if (cursor == order.size()) {
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.UniformIndex(i)]);
      cursor = 0;
    }
    const double loss = TrainStep(model, pairs[order[cursor++]], learning_rate);
    losses.push_back(loss);
    if (on_step) on_step(step, loss);
  }
  return losses;
}

std::vector<std::size_t> GenerateIds(const Seq2SeqModel& model, std::span<const std::size_t> source,
                                     double temperature, std::size_t max_len, std::uint64_t seed) {
  if (temperature < 0.0) throw std::invalid_argument("temperature must be nonnegative");
  const EncoderOutput encoded = Encode(model, source);
  LstmState state = encoded.final_state;
  std::size_t prev = model.start_id();
  Lcg64 rng(seed);
  std::vector<std::size_t> ids;
  while (ids.size() < max_len) {
    DecodeOutput out = DecodeStep(model, state, prev, encoded.states);
    std::size_t chosen = 0;
    if (temperature == 0.0) {
      out.logits.maxCoeff(&chosen);
    } else {
      const VectorXd probs = Softmax(out.logits / temperature);
      const double u = rng.UniformDouble();
      double cumulative = 0.0;
      chosen = static_cast<std::size_t>(probs.size() - 1);
      for (Eigen::Index k = 0; k < probs.size(); ++k) {
        cumulative += probs(k);
        if (u < cumulative) {
          chosen = static_cast<std::size_t>(k);
          break;
        }
      }
    }
    if (chosen == model.end_id()) break;
    ids.push_back(chosen);
    prev = chosen;
    state = std::move(out.state);
  }
  return ids;
}

std::string Generate(const Seq2SeqModel& model, std::string_view source, double temperature,
                     std::size_t max_len, std::uint64_t seed) {
  const std::vector<std::size_t> ids =
      GenerateIds(model, EncodeText(model, source), temperature, max_len, seed);
  return DecodeSymbols(model, ids);
}

// Serialization ----------------------------------------------------------------

std::string SerializeSeq2Seq(const Seq2SeqModel& model) {
  const Seq2SeqConfig& c = model.config;
  std::ostringstream out;
  out << "parley-seq2seq 1\n";
  out << "mode " << (c.mode == SymbolMode::kChar ? "char" : "word") << '\n';
  out << "layers " << c.layers << '\n';
  out << "hidden " << c.hidden << '\n';
  out << "max_len " << c.max_len << '\n';
  out << "learning_rate " << FormatDouble(c.learning_rate) << '\n';
  out << "clip_norm " << FormatDouble(c.clip_norm) << '\n';
  out << "seed " << c.seed << '\n';
  out << "vocab " << c.vocab.size() << '\n';
  for (const std::string& symbol : c.vocab) out << nlohmann::json(symbol).dump() << '\n';
  const Seq2SeqParams& p = model.params;
  WriteMatrix(out, "embedding", p.embedding);
  for (std::size_t l = 0; l < p.encoder.size(); ++l) {
    WriteMatrix(out, "encoder." + std::to_string(l) + ".weights", p.encoder[l].weights);
    WriteMatrix(out, "encoder." + std::to_string(l) + ".bias", p.encoder[l].bias);
  }
  for (std::size_t l = 0; l < p.decoder.size(); ++l) {
    WriteMatrix(out, "decoder." + std::to_string(l) + ".weights", p.decoder[l].weights);
    WriteMatrix(out, "decoder." + std::to_string(l) + ".bias", p.decoder[l].bias);
  }
  WriteMatrix(out, "output.weights", p.output_weights);
  WriteMatrix(out, "output.bias", p.output_bias);
  return out.str();
}

Seq2SeqModel ParseSeq2Seq(std::string_view text) {
  LineReader reader(text);
  if (reader.Next() != "parley-seq2seq 1") throw std::invalid_argument("not a seq2seq model file");
  Seq2SeqModel model;
  Seq2SeqConfig& c = model.config;
  const std::string_view mode = reader.Field("mode");
  if (mode == "char") {
    c.mode = SymbolMode::kChar;
  } else if (mode == "word") {
    c.mode = SymbolMode::kWord;
  } else {
    throw std::invalid_argument("unknown symbol mode " + std::string(mode));
  }
  c.layers = ParseSize(reader.Field("layers"));
  c.hidden = ParseSize(reader.Field("hidden"));
  c.max_len = ParseSize(reader.Field("max_len"));
  c.learning_rate = ParseDouble(reader.Field("learning_rate"));
  c.clip_norm = ParseDouble(reader.Field("clip_norm"));
  c.seed = ParseSize(reader.Field("seed"));
  const std::size_t vocab_size = ParseSize(reader.Field("vocab"));
  for (std::size_t i = 0; i < vocab_size; ++i) {
    c.vocab.push_back(nlohmann::json::parse(reader.Next()).get<std::string>());
  }
  c.Validate();

  Seq2SeqParams& p = model.params;
  p.embedding = ReadMatrix(reader, "embedding");
  for (std::size_t l = 0; l < c.layers; ++l) {
    LstmLayer layer;
    layer.weights = ReadMatrix(reader, "encoder." + std::to_string(l) + ".weights");
    layer.bias = ReadMatrix(reader, "encoder." + std::to_string(l) + ".bias");
    p.encoder.push_back(std::move(layer));
  }
  for (std::size_t l = 0; l < c.layers; ++l) {
    LstmLayer layer;
    layer.weights = ReadMatrix(reader, "decoder." + std::to_string(l) + ".weights");
    layer.bias = ReadMatrix(reader, "decoder." + std::to_string(l) + ".bias");
    p.decoder.push_back(std::move(layer));
  }
  p.output_weights = ReadMatrix(reader, "output.weights");
  p.output_bias = ReadMatrix(reader, "output.bias");
  CheckShapes(model);
  return model;
}

void SaveSeq2Seq(const Seq2SeqModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << SerializeSeq2Seq(model);
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

Seq2SeqModel LoadSeq2Seq(const std::filesystem::path& path) { return ParseSeq2Seq(ReadFile(path)); }

std::vector<std::pair<std::string, std::string>> LoadPairCorpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw std::invalid_argument("missing tab in pair: " + line);
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return pairs;
}

}  // namespace parley
