#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nng {

using Word = int;  // 0 -> 'A', 1 -> 'B', ...

// The allowed word set. Words are the letters 'A', 'B', ... in order.
class Alphabet {
public:
  static constexpr int max_words = 16;

  explicit Alphabet(int k);

  int size() const { return k_; }
  // Number of nonempty word lists, 2^k - 1.
  std::uint32_t list_count() const { return (1u << k_) - 1u; }
  bool contains(Word w) const { return w >= 0 && w < k_; }
  static char letter(Word w) { return static_cast<char>('A' + w); }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
  int k_;
};

// A nonempty subset of the alphabet, as a bit set (bit w set iff word w present).
class WordList {
public:
  static WordList single(Word w) { return WordList(static_cast<std::uint16_t>(1u << w)); }
  static WordList full(const Alphabet& a) { return WordList(static_cast<std::uint16_t>(a.list_count())); }
  // Throws InvalidInput for 0 (the empty list is not a state).
  static WordList from_bits(std::uint32_t bits);

  std::uint16_t bits() const { return bits_; }
  bool contains(Word w) const { return (bits_ >> w) & 1u; }
  int count() const { return std::popcount(bits_); }
  bool is_single() const { return count() == 1; }
  // n-th present word in ascending order, n < count().
  Word nth(int n) const;

  // Index in 0..2^k-2, used as the mixed-radix digit of a site.
  std::uint32_t digit() const { return static_cast<std::uint32_t>(bits_) - 1u; }

  friend bool operator==(WordList, WordList) = default;
  friend auto operator<=>(WordList, WordList) = default;

private:
  explicit WordList(std::uint16_t bits) : bits_(bits) {}
  std::uint16_t bits_;
};

// Listener update on receiving w: add it if absent, collapse to {w} if present.
inline WordList apply_word(WordList x, Word w) {
  return x.contains(w) ? WordList::single(w)
                       : WordList::from_bits(x.bits() | (1u << w));
}

// Sorted letters, e.g. {A,B} -> "AB".
std::string format_list(WordList x);
WordList parse_list(std::string_view label, const Alphabet& a);

// One word list per site. The support (union of all lists) is kept in sync.
class Configuration {
public:
  Configuration(const Alphabet& a, std::vector<WordList> labels);
  // Every site holding the same list.
  static Configuration uniform(const Alphabet& a, int n, WordList x);

  const Alphabet& alphabet() const { return alphabet_; }
  int size() const { return static_cast<int>(labels_.size()); }
  WordList operator[](int site) const { return labels_[static_cast<std::size_t>(site)]; }
  const std::vector<WordList>& labels() const { return labels_; }
  WordList support() const;

  void set(int site, WordList x) { labels_[static_cast<std::size_t>(site)] = x; }

  // Support has at least two words.
  bool is_multi_name() const { return support().count() >= 2; }
  // Every site holds the same single word.
  bool is_single_name() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.labels_ == b.labels_;
  }

private:
  Alphabet alphabet_;
  std::vector<WordList> labels_;
};

// "A-AB-B" codec. decode throws InvalidInput on empty labels, letters outside
// the alphabet, or (when expected_sites >= 0) a wrong site count.
std::string encode(const Configuration& c);
Configuration decode(std::string_view text, const Alphabet& a, int expected_sites = -1);

// Number of sites whose list is exactly {w}.
int strict_count(const Configuration& c, Word w);
// Number of sites holding more than one word.
int boundary_count(const Configuration& c);

// Mixed-radix index over all configurations: site 0 is the most significant
// digit, each digit is WordList::digit().
std::uint64_t state_count(const Alphabet& a, int n);  // (2^k-1)^n, saturating at UINT64_MAX
// state_index throws InvalidInput when state_count saturates.
std::uint64_t state_index(const Configuration& c);
Configuration state_from_index(std::uint64_t index, const Alphabet& a, int n);

}  // namespace nng
