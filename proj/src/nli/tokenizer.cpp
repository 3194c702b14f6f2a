#include "nli/tokenizer.hpp"

#include "error.hpp"
#include "utf8.hpp"

namespace eae::nli {

std::uint64_t Fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

HashTokenizer::HashTokenizer(int vocab_buckets, int max_seq_len)
    : vocab_buckets_(vocab_buckets), max_seq_len_(max_seq_len) {
  if (vocab_buckets <= kReserved) {
    throw Error(ErrorCode::kConfig, "vocab_buckets must exceed 4");
  }
  if (max_seq_len < 4) {
    throw Error(ErrorCode::kConfig, "max_seq_len must be at least 4");
  }
}

std::vector<std::string> HashTokenizer::Split(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = utf8::Next(text, pos);
    if (utf8::IsSpace(cp)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else if (utf8::IsPunct(cp)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
      std::string mark;
      utf8::Append(mark, cp);
      out.push_back(std::move(mark));
    } else {
      utf8::Append(current, cp);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

int HashTokenizer::PieceId(std::string_view piece) const {
  if (piece.empty()) return kUnk;
  const auto buckets = static_cast<std::uint64_t>(vocab_buckets_ - kReserved);
  return kReserved + static_cast<int>(Fnv1a(piece) % buckets);
}

EncodedPair HashTokenizer::Encode(std::string_view premise,
                                  std::string_view hypothesis) const {
  const auto p = Split(premise);
  const auto h = Split(hypothesis);
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "empty premise");
  if (h.empty()) throw Error(ErrorCode::kInvalidArgument, "empty hypothesis");
  const std::size_t budget = static_cast<std::size_t>(max_seq_len_) - 3;
  if (h.size() >= budget) {
    throw Error(ErrorCode::kInvalidArgument,
                "hypothesis of " + std::to_string(h.size()) +
                    " tokens leaves no room for the premise (max_seq_len " +
                    std::to_string(max_seq_len_) + ")");
  }
  const std::size_t keep = std::min(p.size(), budget - h.size());

  EncodedPair out;
  out.truncated = keep < p.size();
  out.premise_tokens = keep;
  out.ids.reserve(keep + h.size() + 3);
  out.ids.push_back(kCls);
  for (std::size_t i = 0; i < keep; ++i) out.ids.push_back(PieceId(p[i]));
  out.ids.push_back(kSep);
  out.segments.assign(out.ids.size(), 0);
  for (const auto& piece : h) out.ids.push_back(PieceId(piece));
  out.ids.push_back(kSep);
  out.segments.resize(out.ids.size(), 1);
  return out;
}

}  // namespace eae::nli
