#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pardoc/errors.hpp"

namespace pardoc {

using Token = std::int32_t;
using Sequence = std::vector<Token>;

// Ordinary tokens are [0, size); the four reserved specials sit in a
// contiguous block immediately above them.
struct Vocabulary {
  Token size = 0;
  Token mask = 0;
  Token sep = 0;
  Token eos = 0;
  Token pipe = 0;

  bool is_special(Token t) const { return t >= size && t <= pipe; }
  bool is_ordinary(Token t) const { return t >= 0 && t < size; }
};

Vocabulary make_vocab(Token size);

// context must be mask-free and unterminated; returns context with n
// trailing mask slots appended.
Sequence append_masks(const Sequence& context, std::size_t n, const Vocabulary& vocab);

bool is_terminated(const Sequence& seq, const Vocabulary& vocab);
bool contains(const Sequence& seq, Token t);

// Human-readable dump: ordinary tokens as decimal, specials as
// "<mask>", "<sep>", "<eos>", "|".
std::string render_sequence(const Sequence& seq, const Vocabulary& vocab);

// Newline-delimited space-separated integer corpus files.
std::vector<Sequence> load_corpus(const std::string& path);
void save_corpus(const std::string& path, const std::vector<Sequence>& corpus);

}  // namespace pardoc
