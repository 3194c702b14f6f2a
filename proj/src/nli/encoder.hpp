#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "json.hpp"
#include "nli/layers.hpp"
#include "nli/tokenizer.hpp"

namespace eae::nli {

inline constexpr std::string_view kTinyRandomEncoder = "tiny-random";
inline constexpr std::string_view kDefaultEncoder = "UBC-NLP/ARBERTv2";

struct EncoderConfig {
  std::string identifier = std::string(kTinyRandomEncoder);
  int layers = 2;
  int dim = 64;
  int heads = 4;
  int ffn_dim = 128;
  int max_seq_len = 128;
  int vocab_buckets = 8192;
  double init_stddev = 0.02;
};

void to_json(nlohmann::json& j, const EncoderConfig& c);
void from_json(const nlohmann::json& j, EncoderConfig& c);

// Sentence-pair encoder producing one pooled vector per (premise,
// hypothesis). Training goes through Forward/Backward with an opaque tape.
class EncoderBackend {
 public:
  struct Tape {
    virtual ~Tape() = default;
  };

  virtual ~EncoderBackend() = default;

  virtual const EncoderConfig& config() const = 0;
  int dim() const { return config().dim; }

  // Evaluation mode; deterministic for fixed weights.
  virtual Vector Encode(std::string_view premise,
                        std::string_view hypothesis) const = 0;

  virtual Vector Forward(std::string_view premise, std::string_view hypothesis,
                         std::unique_ptr<Tape>& tape) const = 0;
  // Accumulates parameter gradients given d(loss)/d(pooled).
  virtual void Backward(const Tape& tape, const Vector& dpooled) = 0;

  virtual void CollectParams(ParamRefs& out) = 0;
  virtual std::unique_ptr<EncoderBackend> Clone() const = 0;
};

// BERT-style post-norm transformer over hashed tokens, randomly initialised.
// The pooled vector is the final hidden state at [CLS].
class TransformerEncoder final : public EncoderBackend {
 public:
  TransformerEncoder(const EncoderConfig& config, std::uint64_t seed);

  const EncoderConfig& config() const override { return config_; }
  Vector Encode(std::string_view premise,
                std::string_view hypothesis) const override;
  Vector Forward(std::string_view premise, std::string_view hypothesis,
                 std::unique_ptr<Tape>& tape) const override;
  void Backward(const Tape& tape, const Vector& dpooled) override;
  void CollectParams(ParamRefs& out) override;
  std::unique_ptr<EncoderBackend> Clone() const override;

  const HashTokenizer& tokenizer() const { return tokenizer_; }

 private:
  struct TransformerTape;

  Vector Run(const EncodedPair& input, TransformerTape* tape) const;

  EncoderConfig config_;
  HashTokenizer tokenizer_;
  Param token_embedding_;
  Param position_embedding_;
  Param segment_embedding_;
  LayerNorm embedding_norm_;
  std::vector<TransformerBlock> blocks_;
};

// Resolves `config.identifier` to a backend. Only the built-in tiny random
// encoder is available; other identifiers raise kUnsupported.
std::unique_ptr<EncoderBackend> MakeEncoder(const EncoderConfig& config,
                                            std::uint64_t seed);

}  // namespace eae::nli
