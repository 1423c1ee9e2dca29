#include "pardoc/tokens.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pardoc {

Vocabulary make_vocab(Token size) {
  if (size < 2) {
    throw ValidationError("vocabulary size must be at least 2, got " + std::to_string(size));
  }
  Vocabulary v;
  v.size = size;
  v.mask = size;
  v.sep = size + 1;
  v.eos = size + 2;
  v.pipe = size + 3;
  return v;
}

Sequence append_masks(const Sequence& context, std::size_t n, const Vocabulary& vocab) {
  if (is_terminated(context, vocab)) {
    throw ValidationError("cannot append mask slots to a terminated sequence");
  }
  if (contains(context, vocab.mask)) {
    throw ValidationError("context already contains mask tokens");
  }
  Sequence out = context;
  out.insert(out.end(), n, vocab.mask);
  return out;
}

bool is_terminated(const Sequence& seq, const Vocabulary& vocab) {
  return contains(seq, vocab.eos);
}

bool contains(const Sequence& seq, Token t) {
  return std::find(seq.begin(), seq.end(), t) != seq.end();
}

std::string render_sequence(const Sequence& seq, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    Token t = seq[i];
    if (t == vocab.mask)
      out += "<mask>";
    else if (t == vocab.sep)
      out += "<sep>";
    else if (t == vocab.eos)
      out += "<eos>";
    else if (t == vocab.pipe)
      out += "|";
    else
      out += std::to_string(t);
  }
  return out;
}

std::vector<Sequence> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file: " + path);
  std::vector<Sequence> corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Sequence seq;
    std::istringstream ss(line);
    long long tok;
    while (ss >> tok) seq.push_back(static_cast<Token>(tok));
    if (!ss.eof()) throw ParseError("non-integer token in corpus", lineno);
    corpus.push_back(std::move(seq));
  }
  return corpus;
}

void save_corpus(const std::string& path, const std::vector<Sequence>& corpus) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write corpus file: " + path);
  for (const auto& seq : corpus) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out << ' ';
      out << seq[i];
    }
    out << '\n';
  }
}

}  // namespace pardoc
