#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monrank/error.hpp"

namespace monrank {

/// Sorted 0-based element indices.
using IndexSet = std::vector<std::size_t>;

enum class Sign : std::int8_t { Minus = -1, Zero = 0, Plus = 1 };

inline char sign_char(Sign s) {
  switch (s) {
    case Sign::Plus:
      return '+';
    case Sign::Minus:
      return '-';
    default:
      return '0';
  }
}

/// Element of {+,0,-}^n stored as a positive-part and a negative-part bitmask.
///
/// Every binary operation requires operands of equal length and throws
/// DimensionError otherwise.
class SignVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  SignVector() = default;
  explicit SignVector(std::size_t n) : size_(n), pos_(word_count(n), 0), neg_(word_count(n), 0) {}

  static SignVector from_string(std::string_view text) {
    SignVector v(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      switch (text[i]) {
        case '+':
          v.set(i, Sign::Plus);
          break;
        case '-':
          v.set(i, Sign::Minus);
          break;
        case '0':
          break;
        default:
          throw FormatError("invalid sign character '" + std::string(1, text[i]) + "' at position " +
                            std::to_string(i + 1));
      }
    }
    return v;
  }

  static SignVector from_signs(std::span<const int> signs) {
    SignVector v(signs.size());
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] > 0) {
        v.set(i, Sign::Plus);
      } else if (signs[i] < 0) {
        v.set(i, Sign::Minus);
      }
    }
    return v;
  }

  /// Builds a vector from explicit positive/negative index sets.
  static SignVector from_parts(std::size_t n, const IndexSet& plus, const IndexSet& minus) {
    SignVector v(n);
    for (auto i : plus) v.set(i, Sign::Plus);
    for (auto i : minus) v.set(i, Sign::Minus);
    return v;
  }

  static SignVector all(std::size_t n, Sign s) {
    SignVector v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, s);
    return v;
  }

  std::size_t size() const { return size_; }
  std::size_t words() const { return pos_.size(); }

  Sign operator[](std::size_t i) const {
    const Word bit = Word{1} << (i % kWordBits);
    if (pos_[i / kWordBits] & bit) return Sign::Plus;
    if (neg_[i / kWordBits] & bit) return Sign::Minus;
    return Sign::Zero;
  }

  Sign at(std::size_t i) const {
    if (i >= size_) throw IndexError("sign vector index " + std::to_string(i) + " out of range");
    return (*this)[i];
  }

  void set(std::size_t i, Sign s) {
    if (i >= size_) throw IndexError("sign vector index " + std::to_string(i) + " out of range");
    const Word bit = Word{1} << (i % kWordBits);
    pos_[i / kWordBits] &= ~bit;
    neg_[i / kWordBits] &= ~bit;
    if (s == Sign::Plus) pos_[i / kWordBits] |= bit;
    if (s == Sign::Minus) neg_[i / kWordBits] |= bit;
  }

  std::span<const Word> positive_words() const { return pos_; }
  std::span<const Word> negative_words() const { return neg_; }

  /// Low 64 bits of the positive part; meaningful only when size() <= 64.
  Word positive_mask() const { return pos_.empty() ? 0 : pos_[0]; }
  Word negative_mask() const { return neg_.empty() ? 0 : neg_[0]; }

  IndexSet positive_part() const { return bits_of(pos_); }
  IndexSet negative_part() const { return bits_of(neg_); }
  IndexSet support() const {
    std::vector<Word> s(pos_.size());
    for (std::size_t w = 0; w < s.size(); ++w) s[w] = pos_[w] | neg_[w];
    return bits_of(s);
  }

  std::size_t support_size() const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < pos_.size(); ++w) c += std::popcount(pos_[w] | neg_[w]);
    return c;
  }

  bool is_zero() const { return support_size() == 0; }
  bool is_zero_free() const { return support_size() == size_; }

  SignVector operator-() const {
    SignVector r = *this;
    std::swap(r.pos_, r.neg_);
    return r;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) s[i] = sign_char((*this)[i]);
    return s;
  }

  friend bool operator==(const SignVector& a, const SignVector& b) = default;

  /// Lexicographic on (positive mask, negative mask), each read as an unsigned
  /// integer whose bit i is element i.
  friend std::strong_ordering operator<=>(const SignVector& a, const SignVector& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    if (auto c = compare_words(a.pos_, b.pos_); c != 0) return c;
    return compare_words(a.neg_, b.neg_);
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::size_t>{}(size_);
    for (std::size_t w = 0; w < pos_.size(); ++w) {
      h ^= std::hash<Word>{}(pos_[w]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<Word>{}(neg_[w] * 0xff51afd7ed558ccdULL) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  static std::strong_ordering compare_words(std::span<const Word> a, std::span<const Word> b) {
    for (std::size_t w = a.size(); w-- > 0;) {
      if (a[w] != b[w]) return a[w] <=> b[w];
    }
    return std::strong_ordering::equal;
  }

 private:
  friend SignVector compose(const SignVector&, const SignVector&);
  friend IndexSet separator(const SignVector&, const SignVector&);
  friend std::size_t separator_size(const SignVector&, const SignVector&);
  friend bool orthogonal(const SignVector&, const SignVector&);

  static std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

  static IndexSet bits_of(std::span<const Word> words) {
    IndexSet out;
    for (std::size_t w = 0; w < words.size(); ++w) {
      Word x = words[w];
      while (x) {
        out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(x)));
        x &= x - 1;
      }
    }
    return out;
  }

  std::size_t size_ = 0;
  std::vector<Word> pos_;
  std::vector<Word> neg_;
};

inline void require_same_length(const SignVector& x, const SignVector& y) {
  if (x.size() != y.size()) {
    throw DimensionError("sign vectors of length " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
  }
}

/// X o Y: X's entry where X is nonzero, Y's entry elsewhere.
inline SignVector compose(const SignVector& x, const SignVector& y) {
  require_same_length(x, y);
  SignVector r(x.size());
  for (std::size_t w = 0; w < x.pos_.size(); ++w) {
    const auto free = ~(x.pos_[w] | x.neg_[w]);
    r.pos_[w] = x.pos_[w] | (y.pos_[w] & free);
    r.neg_[w] = x.neg_[w] | (y.neg_[w] & free);
  }
  return r;
}

/// Indices where X and Y carry strictly opposite signs.
inline IndexSet separator(const SignVector& x, const SignVector& y) {
  require_same_length(x, y);
  std::vector<SignVector::Word> s(x.pos_.size());
  for (std::size_t w = 0; w < s.size(); ++w) s[w] = (x.pos_[w] & y.neg_[w]) | (x.neg_[w] & y.pos_[w]);
  return SignVector::bits_of(s);
}

inline std::size_t separator_size(const SignVector& x, const SignVector& y) {
  require_same_length(x, y);
  std::size_t c = 0;
  for (std::size_t w = 0; w < x.pos_.size(); ++w) {
    c += std::popcount((x.pos_[w] & y.neg_[w]) | (x.neg_[w] & y.pos_[w]));
  }
  return c;
}

/// True when the supports are disjoint or X and Y both agree and disagree
/// somewhere on their common support.
inline bool orthogonal(const SignVector& x, const SignVector& y) {
  require_same_length(x, y);
  bool agree = false;
  bool oppose = false;
  bool common = false;
  for (std::size_t w = 0; w < x.pos_.size(); ++w) {
    const auto xs = x.pos_[w] | x.neg_[w];
    const auto ys = y.pos_[w] | y.neg_[w];
    common = common || (xs & ys);
    agree = agree || (x.pos_[w] & y.pos_[w]) || (x.neg_[w] & y.neg_[w]);
    oppose = oppose || (x.pos_[w] & y.neg_[w]) || (x.neg_[w] & y.pos_[w]);
  }
  return !common || (agree && oppose);
}

inline SignVector negate(const SignVector& x) { return -x; }

inline std::ostream& operator<<(std::ostream& os, const SignVector& v) { return os << v.to_string(); }

struct SignVectorHash {
  std::size_t operator()(const SignVector& v) const { return v.hash(); }
};

/// Deduplicated set of sign vectors over a fixed ground set, iterated in
/// SignVector order.
class SignVectorSet {
 public:
  using const_iterator = std::vector<SignVector>::const_iterator;

  SignVectorSet() = default;
  explicit SignVectorSet(std::size_t ground_size) : ground_size_(ground_size) {}

  SignVectorSet(std::size_t ground_size, std::vector<SignVector> members) : ground_size_(ground_size) {
    for (const auto& m : members) check_length(m);
    members_ = std::move(members);
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  static SignVectorSet from_strings(std::initializer_list<std::string_view> texts) {
    std::vector<SignVector> v;
    for (auto t : texts) v.push_back(SignVector::from_string(t));
    const std::size_t n = v.empty() ? 0 : v.front().size();
    return SignVectorSet(n, std::move(v));
  }

  std::size_t ground_size() const { return ground_size_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const_iterator begin() const { return members_.begin(); }
  const_iterator end() const { return members_.end(); }
  const SignVector& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<SignVector>& members() const { return members_; }

  /// Returns true when X was not already present.
  bool insert(SignVector x) {
    check_length(x);
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it != members_.end() && *it == x) return false;
    members_.insert(it, std::move(x));
    negation_closed_flag_ = false;
    return true;
  }

  bool contains(const SignVector& x) const {
    return x.size() == ground_size_ && std::binary_search(members_.begin(), members_.end(), x);
  }

  std::size_t index_of(const SignVector& x) const {
    auto it = std::lower_bound(members_.begin(), members_.end(), x);
    if (it == members_.end() || *it != x) return size();
    return static_cast<std::size_t>(it - members_.begin());
  }

  bool is_negation_closed() const {
    return std::all_of(members_.begin(), members_.end(), [&](const SignVector& x) { return contains(-x); });
  }

  bool is_zero_free() const {
    return std::all_of(members_.begin(), members_.end(), [](const SignVector& x) { return x.is_zero_free(); });
  }

  /// Verifies closure under negation and records it; throws DomainError otherwise.
  void flag_negation_closed() {
    for (const auto& x : members_) {
      if (!contains(-x)) throw DomainError("set is not closed under negation: missing -" + x.to_string());
    }
    negation_closed_flag_ = true;
  }
  bool negation_closed_flag() const { return negation_closed_flag_; }

  SignVectorSet with_negations() const {
    std::vector<SignVector> all = members_;
    all.reserve(2 * members_.size());
    for (const auto& x : members_) all.push_back(-x);
    SignVectorSet out(ground_size_, std::move(all));
    out.negation_closed_flag_ = true;
    return out;
  }

  bool is_subset_of(const SignVectorSet& other) const {
    return std::all_of(members_.begin(), members_.end(), [&](const SignVector& x) { return other.contains(x); });
  }

  friend bool operator==(const SignVectorSet& a, const SignVectorSet& b) {
    return a.ground_size_ == b.ground_size_ && a.members_ == b.members_;
  }

 private:
  void check_length(const SignVector& x) const {
    if (x.size() != ground_size_) {
      throw DimensionError("sign vector of length " + std::to_string(x.size()) + " in a set over ground size " +
                           std::to_string(ground_size_));
    }
  }

  std::size_t ground_size_ = 0;
  std::vector<SignVector> members_;
  bool negation_closed_flag_ = false;
};

/// Reads the "+-0" line format: one vector per line, blank lines and `#`
/// comments skipped, every vector of the same length.
inline std::vector<SignVector> read_sign_vectors(std::istream& in) {
  std::vector<SignVector> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string_view body(line.data() + first, last - first + 1);
    SignVector v;
    try {
      v = SignVector::from_string(body);
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!out.empty() && v.size() != out.front().size()) {
      throw FormatError("line " + std::to_string(lineno) + ": length " + std::to_string(v.size()) +
                        " differs from " + std::to_string(out.front().size()));
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline SignVectorSet read_sign_vector_set(std::istream& in) {
  auto vs = read_sign_vectors(in);
  const std::size_t n = vs.empty() ? 0 : vs.front().size();
  return SignVectorSet(n, std::move(vs));
}

template <typename Range>
void write_sign_vectors(std::ostream& out, const Range& vectors) {
  for (const auto& v : vectors) out << v.to_string() << '\n';
}

}  // namespace monrank
