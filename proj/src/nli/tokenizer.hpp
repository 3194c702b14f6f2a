#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace eae::nli {

struct EncodedPair {
  std::vector<int> ids;
  std::vector<int> segments;  // 0 for [CLS] premise [SEP], 1 for the rest
  std::size_t premise_tokens = 0;
  bool truncated = false;
};

// Vocabulary-free tokenizer: words and punctuation marks are hashed into a
// fixed number of buckets. Ids 0..3 are reserved for special tokens.
class HashTokenizer {
 public:
  static constexpr int kPad = 0;
  static constexpr int kCls = 1;
  static constexpr int kSep = 2;
  static constexpr int kUnk = 3;
  static constexpr int kReserved = 4;

  HashTokenizer(int vocab_buckets, int max_seq_len);

  int vocab_size() const { return vocab_buckets_; }
  int max_seq_len() const { return max_seq_len_; }

  // Whitespace-separated words, punctuation split off as separate pieces.
  static std::vector<std::string> Split(std::string_view text);

  int PieceId(std::string_view piece) const;

  // [CLS] premise [SEP] hypothesis [SEP]. When too long, the premise is cut
  // from its end; the hypothesis is never truncated. Throws on empty input or
  // a hypothesis that cannot fit.
  EncodedPair Encode(std::string_view premise,
                     std::string_view hypothesis) const;

 private:
  int vocab_buckets_;
  int max_seq_len_;
};

std::uint64_t Fnv1a(std::string_view bytes);

}  // namespace eae::nli
