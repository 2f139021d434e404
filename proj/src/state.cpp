#include "nng/state.hpp"

#include <limits>

#include "nng/error.hpp"

namespace nng {

Alphabet::Alphabet(int k) : k_(k) {
  if (k < 2 || k > max_words) {
    throw InvalidInput("alphabet size must be in 2.." + std::to_string(max_words) + ", got " +
                       std::to_string(k));
  }
}

WordList WordList::from_bits(std::uint32_t bits) {
  if (bits == 0 || bits > 0xFFFFu) throw InvalidInput("word list must be a nonempty subset");
  return WordList(static_cast<std::uint16_t>(bits));
}

Word WordList::nth(int n) const {
  std::uint32_t b = bits_;
  for (int i = 0; i < n; ++i) b &= b - 1;
  return std::countr_zero(b);
}

std::string format_list(WordList x) {
  std::string out;
  for (Word w = 0; w < Alphabet::max_words; ++w) {
    if (x.contains(w)) out.push_back(Alphabet::letter(w));
  }
  return out;
}

WordList parse_list(std::string_view label, const Alphabet& a) {
  if (label.empty()) throw InvalidInput("empty word list label");
  std::uint32_t bits = 0;
  for (char ch : label) {
    const Word w = ch - 'A';
    if (!a.contains(w)) {
      throw InvalidInput(std::string("unknown word '") + ch + "' for an alphabet of " +
                         std::to_string(a.size()) + " words");
    }
    bits |= 1u << w;
  }
  return WordList::from_bits(bits);
}

Configuration::Configuration(const Alphabet& a, std::vector<WordList> labels)
    : alphabet_(a), labels_(std::move(labels)) {
  if (labels_.empty()) throw InvalidInput("configuration needs at least one site");
  for (WordList x : labels_) {
    if ((x.bits() & ~a.list_count()) != 0) {
      throw InvalidInput("word list " + format_list(x) + " is outside the alphabet");
    }
  }
}

Configuration Configuration::uniform(const Alphabet& a, int n, WordList x) {
  return Configuration(a, std::vector<WordList>(static_cast<std::size_t>(n), x));
}

WordList Configuration::support() const {
  std::uint32_t bits = 0;
  for (WordList x : labels_) bits |= x.bits();
  return WordList::from_bits(bits);
}

bool Configuration::is_single_name() const {
  const WordList first = labels_.front();
  if (!first.is_single()) return false;
  for (WordList x : labels_) {
    if (x != first) return false;
  }
  return true;
}

std::string encode(const Configuration& c) {
  std::string out;
  for (int i = 0; i < c.size(); ++i) {
    if (i) out.push_back('-');
    out += format_list(c[i]);
  }
  return out;
}

Configuration decode(std::string_view text, const Alphabet& a, int expected_sites) {
  std::vector<WordList> labels;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dash = text.find('-', pos);
    const std::string_view part =
        text.substr(pos, dash == std::string_view::npos ? std::string_view::npos : dash - pos);
    labels.push_back(parse_list(part, a));
    if (dash == std::string_view::npos) break;
    pos = dash + 1;
  }
  if (expected_sites >= 0 && static_cast<int>(labels.size()) != expected_sites) {
    throw InvalidInput("configuration has " + std::to_string(labels.size()) +
                       " sites, graph has " + std::to_string(expected_sites));
  }
  return Configuration(a, std::move(labels));
}

int strict_count(const Configuration& c, Word w) {
  const WordList target = WordList::single(w);
  int n = 0;
  for (WordList x : c.labels()) n += (x == target);
  return n;
}

int boundary_count(const Configuration& c) {
  int n = 0;
  for (WordList x : c.labels()) n += !x.is_single();
  return n;
}

std::uint64_t state_count(const Alphabet& a, int n) {
  std::uint64_t total = 1;
  const std::uint64_t radix = a.list_count();
  for (int i = 0; i < n; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / radix) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= radix;
  }
  return total;
}

std::uint64_t state_index(const Configuration& c) {
  if (state_count(c.alphabet(), c.size()) == UINT64_MAX) {
    throw InvalidInput("state space too large for a 64-bit index");
  }
  const std::uint64_t radix = c.alphabet().list_count();
  std::uint64_t idx = 0;
  for (WordList x : c.labels()) idx = idx * radix + x.digit();
  return idx;
}

Configuration state_from_index(std::uint64_t index, const Alphabet& a, int n) {
  const std::uint64_t radix = a.list_count();
  std::vector<WordList> labels(static_cast<std::size_t>(n), WordList::full(a));
  for (int i = n - 1; i >= 0; --i) {
    labels[static_cast<std::size_t>(i)] = WordList::from_bits(static_cast<std::uint32_t>(index % radix) + 1u);
    index /= radix;
  }
  return Configuration(a, std::move(labels));
}

}  // namespace nng
