#include "nli/encoder.hpp"

#include "error.hpp"

namespace eae::nli {

void to_json(nlohmann::json& j, const EncoderConfig& c) {
  j = nlohmann::json{{"identifier", c.identifier},
                     {"layers", c.layers},
                     {"dim", c.dim},
                     {"heads", c.heads},
                     {"ffn_dim", c.ffn_dim},
                     {"max_seq_len", c.max_seq_len},
                     {"vocab_buckets", c.vocab_buckets},
                     {"init_stddev", c.init_stddev}};
}

void from_json(const nlohmann::json& j, EncoderConfig& c) {
  const EncoderConfig d;
  c.identifier = j.value("identifier", d.identifier);
  c.layers = j.value("layers", d.layers);
  c.dim = j.value("dim", d.dim);
  c.heads = j.value("heads", d.heads);
  c.ffn_dim = j.value("ffn_dim", d.ffn_dim);
  c.max_seq_len = j.value("max_seq_len", d.max_seq_len);
  c.vocab_buckets = j.value("vocab_buckets", d.vocab_buckets);
  c.init_stddev = j.value("init_stddev", d.init_stddev);
}

struct TransformerEncoder::TransformerTape : EncoderBackend::Tape {
  EncodedPair input;
  LayerNorm::Cache embedding_norm;
  std::vector<TransformerBlock::Cache> blocks;
  Eigen::Index length = 0;
};

TransformerEncoder::TransformerEncoder(const EncoderConfig& config,
                                       std::uint64_t seed)
    : config_(config), tokenizer_(config.vocab_buckets, config.max_seq_len) {
  if (config.layers < 1 || config.dim < 1 || config.ffn_dim < 1) {
    throw Error(ErrorCode::kConfig, "encoder dimensions must be positive");
  }
  Rng rng(seed);
  token_embedding_.Init("embeddings.token", config.vocab_buckets, config.dim);
  token_embedding_.FillNormal(rng, config.init_stddev);
  position_embedding_.Init("embeddings.position", config.max_seq_len,
                           config.dim);
  position_embedding_.FillNormal(rng, config.init_stddev);
  segment_embedding_.Init("embeddings.segment", 2, config.dim);
  segment_embedding_.FillNormal(rng, config.init_stddev);
  embedding_norm_ = LayerNorm("embeddings.norm", config.dim);
  for (int i = 0; i < config.layers; ++i) {
    blocks_.emplace_back("layer" + std::to_string(i), config.dim, config.heads,
                         config.ffn_dim, rng, config.init_stddev);
  }
}

Vector TransformerEncoder::Run(const EncodedPair& input,
                               TransformerTape* tape) const {
  const auto length = static_cast<Eigen::Index>(input.ids.size());
  Matrix x(length, config_.dim);
  for (Eigen::Index t = 0; t < length; ++t) {
    x.row(t) = token_embedding_.value.row(input.ids[t]) +
               position_embedding_.value.row(t) +
               segment_embedding_.value.row(input.segments[t]);
  }
  x = embedding_norm_.Forward(x, tape ? &tape->embedding_norm : nullptr);
  if (tape != nullptr) tape->blocks.resize(blocks_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    x = blocks_[b].Forward(x, tape ? &tape->blocks[b] : nullptr);
  }
  return x.row(0).transpose();
}

Vector TransformerEncoder::Encode(std::string_view premise,
                                  std::string_view hypothesis) const {
  return Run(tokenizer_.Encode(premise, hypothesis), nullptr);
}

Vector TransformerEncoder::Forward(std::string_view premise,
                                   std::string_view hypothesis,
                                   std::unique_ptr<Tape>& tape) const {
  auto t = std::make_unique<TransformerTape>();
  t->input = tokenizer_.Encode(premise, hypothesis);
  t->length = static_cast<Eigen::Index>(t->input.ids.size());
  Vector pooled = Run(t->input, t.get());
  tape = std::move(t);
  return pooled;
}

void TransformerEncoder::Backward(const Tape& base, const Vector& dpooled) {
  const auto& tape = static_cast<const TransformerTape&>(base);
  Matrix dx = Matrix::Zero(tape.length, config_.dim);
  dx.row(0) = dpooled.transpose();
  for (std::size_t b = blocks_.size(); b-- > 0;) {
    dx = blocks_[b].Backward(tape.blocks[b], dx);
  }
  dx = embedding_norm_.Backward(tape.embedding_norm, dx);
  for (Eigen::Index t = 0; t < tape.length; ++t) {
    token_embedding_.grad.row(tape.input.ids[t]) += dx.row(t);
    position_embedding_.grad.row(t) += dx.row(t);
    segment_embedding_.grad.row(tape.input.segments[t]) += dx.row(t);
  }
}

void TransformerEncoder::CollectParams(ParamRefs& out) {
  out.push_back(&token_embedding_);
  out.push_back(&position_embedding_);
  out.push_back(&segment_embedding_);
  embedding_norm_.Collect(out);
  for (auto& block : blocks_) block.Collect(out);
}

std::unique_ptr<EncoderBackend> TransformerEncoder::Clone() const {
  return std::make_unique<TransformerEncoder>(*this);
}

std::unique_ptr<EncoderBackend> MakeEncoder(const EncoderConfig& config,
                                            std::uint64_t seed) {
  if (config.identifier == kTinyRandomEncoder) {
    return std::make_unique<TransformerEncoder>(config, seed);
  }
  throw Error(ErrorCode::kUnsupported,
              "encoder '" + config.identifier +
                  "' is not available in this build; use '" +
                  std::string(kTinyRandomEncoder) + "'");
}

}  // namespace eae::nli
