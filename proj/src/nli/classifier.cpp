#include "nli/classifier.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>

#include "error.hpp"
#include "nli/loss.hpp"

namespace eae::nli {
namespace {

constexpr char kWeightsMagic[8] = {'E', 'A', 'E', 'W', '0', '0', '0', '1'};
constexpr std::string_view kCheckpointFormat = "eae-nli-checkpoint";

template <typename T>
void WritePod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw Error(ErrorCode::kParse, "truncated weights file");
  return v;
}

}  // namespace

NliModel::NliModel(std::unique_ptr<EncoderBackend> encoder,
                   std::uint64_t head_seed)
    : encoder_(std::move(encoder)) {
  Rng rng(head_seed);
  head_ = Linear("head", encoder_->dim(), 2, rng, encoder_->config().init_stddev);
}

NliModel::NliModel(const NliModel& other)
    : encoder_(other.encoder_->Clone()),
      head_(other.head_),
      threshold_(other.threshold_) {}

NliModel& NliModel::operator=(const NliModel& other) {
  if (this != &other) {
    encoder_ = other.encoder_->Clone();
    head_ = other.head_;
    threshold_ = other.threshold_;
  }
  return *this;
}

NliModel NliModel::Create(const EncoderConfig& config, std::uint64_t seed) {
  return NliModel(MakeEncoder(config, DeriveSeed(seed, 0)), DeriveSeed(seed, 1));
}

Vector NliModel::EncodePair(std::string_view premise,
                            std::string_view hypothesis) const {
  return encoder_->Encode(premise, hypothesis);
}

RowVector NliModel::Logits(std::string_view premise,
                           std::string_view hypothesis) const {
  return head_.Forward(EncodePair(premise, hypothesis).transpose()).row(0);
}

double NliModel::Predict(std::string_view premise,
                         std::string_view hypothesis) const {
  const RowVector l = Logits(premise, hypothesis);
  return PositiveProbability(l(0), l(1));
}

std::vector<double> NliModel::Score(std::span<const PairQuery> queries) const {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(Predict(q.premise, q.hypothesis));
  return out;
}

Matrix NliModel::ForwardBatch(
    std::span<const std::pair<std::string_view, std::string_view>> pairs,
    BatchTape& tape) const {
  const auto n = static_cast<Eigen::Index>(pairs.size());
  tape.encoder.clear();
  tape.encoder.resize(pairs.size());
  tape.pooled.resize(n, encoder_->dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    tape.pooled.row(i) =
        encoder_->Forward(pairs[i].first, pairs[i].second, tape.encoder[i])
            .transpose();
  }
  return head_.Forward(tape.pooled);
}

void NliModel::BackwardBatch(const BatchTape& tape, const Matrix& dlogits) {
  const Matrix dpooled = head_.Backward(tape.pooled, dlogits);
  for (Eigen::Index i = 0; i < dpooled.rows(); ++i) {
    encoder_->Backward(*tape.encoder[i], dpooled.row(i).transpose());
  }
}

ParamRefs NliModel::Params() {
  ParamRefs out;
  encoder_->CollectParams(out);
  head_.Collect(out);
  return out;
}

void NliModel::ZeroGrad() {
  for (Param* p : Params()) p->grad.setZero();
}

void NliModel::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json config;
  config["format"] = kCheckpointFormat;
  config["version"] = 1;
  config["encoder"] = encoder_->config();
  config["head"] = {{"outputs", 2}};
  config["threshold"] = threshold_;
  {
    std::ofstream out(dir / "config.json");
    if (!out) {
      throw Error(ErrorCode::kIo, "cannot write " + (dir / "config.json").string());
    }
    out << config.dump(2) << '\n';
  }
  std::ofstream out(dir / "weights.bin", std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + (dir / "weights.bin").string());
  }
  auto params = const_cast<NliModel*>(this)->Params();
  out.write(kWeightsMagic, sizeof(kWeightsMagic));
  WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const Param* p : params) {
    WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.rows()));
    WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(p->value.cols()));
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
}

NliModel NliModel::Load(const std::filesystem::path& dir) {
  std::ifstream cfg_in(dir / "config.json");
  if (!cfg_in) {
    throw Error(ErrorCode::kIo, "no checkpoint at '" + dir.string() + "'");
  }
  nlohmann::json config;
  try {
    cfg_in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError((dir / "config.json").string(), e.what());
  }
  if (config.value("format", "") != kCheckpointFormat) {
    throw Error(ErrorCode::kConfig,
                "'" + dir.string() + "' is not an NLI checkpoint");
  }
  NliModel model = Create(config.at("encoder").get<EncoderConfig>(), 0);
  model.threshold_ = config.value("threshold", 0.5);

  std::ifstream in(dir / "weights.bin", std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "missing weights.bin in " + dir.string());
  char magic[sizeof(kWeightsMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kWeightsMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kParse, "bad weights file magic");
  }
  std::map<std::string, Param*> by_name;
  for (Param* p : model.Params()) by_name[p->name] = p;
  const auto count = ReadPod<std::uint32_t>(in);
  if (count != by_name.size()) {
    throw Error(ErrorCode::kConfig, "weights file has " + std::to_string(count) +
                                        " tensors, model expects " +
                                        std::to_string(by_name.size()));
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(ReadPod<std::uint32_t>(in), '\0');
    in.read(name.data(), static_cast<std::streamsize>(name.size()));
    const auto rows = ReadPod<std::uint32_t>(in);
    const auto cols = ReadPod<std::uint32_t>(in);
    auto it = by_name.find(name);
    if (it == by_name.end() || it->second->value.rows() != rows ||
        it->second->value.cols() != cols) {
      throw Error(ErrorCode::kConfig, "unexpected tensor '" + name + "'");
    }
    in.read(reinterpret_cast<char*>(it->second->value.data()),
            static_cast<std::streamsize>(std::size_t{rows} * cols * sizeof(double)));
    if (!in) throw Error(ErrorCode::kParse, "truncated weights file");
  }
  return model;
}

AdamW::AdamW(ParamRefs params, Options options)
    : params_(std::move(params)), options_(options) {
  for (const Param* p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void AdamW::Step() {
  ++step_;
  const double bc1 = 1.0 - std::pow(options_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(options_.beta2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Param& p = *params_[i];
    p.value *= 1.0 - options_.learning_rate * options_.weight_decay;
    m_[i] = options_.beta1 * m_[i] + (1.0 - options_.beta1) * p.grad;
    v_[i] = options_.beta2 * v_[i] +
            (1.0 - options_.beta2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= options_.learning_rate * (m_[i].array() / bc1) /
                       ((v_[i].array() / bc2).sqrt() + options_.epsilon);
  }
}

}  // namespace eae::nli
