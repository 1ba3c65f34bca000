// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBM_BITVEC_HPP_
#define RBM_BITVEC_HPP_

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbm/errors.hpp"

namespace rbm {

// Fixed-length bit vector over GF(2), packed little-endian into 64-bit words.
// Bits past size() in the last word are always zero.
class BitVec {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  BitVec() = default;
  explicit BitVec(std::size_t length)
      : length_(length), words_(word_count(length), 0) {}

  template <typename Index>
  static BitVec from_indices(std::size_t length, std::span<const Index> ones) {
    BitVec v(length);
    for (Index i : ones) v.set(static_cast<std::size_t>(i));
    return v;
  }
  static BitVec from_indices(std::size_t length,
                             std::initializer_list<std::size_t> ones) {
    BitVec v(length);
    for (std::size_t i : ones) v.set(i);
    return v;
  }
  // Parses a string of '0'/'1' characters, index 0 first.
  static BitVec from_string(std::string_view bits);

  static std::size_t word_count(std::size_t length) {
    return (length + kWordBits - 1) / kWordBits;
  }

  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }

  bool test(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value = true) {
    check_index(i);
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t i) {
    check_index(i);
    words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
  }
  void reset() { std::fill(words_.begin(), words_.end(), Word{0}); }

  std::size_t count() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (Word w : words_) {
      if (w != 0) return true;
    }
    return false;
  }
  bool none() const { return !any(); }

  // Index of the lowest set bit at or after `from`, or npos.
  std::size_t next_set(std::size_t from) const {
    if (from >= length_) return npos;
    std::size_t w = from / kWordBits;
    Word bits = words_[w] & (~Word{0} << (from % kWordBits));
    while (true) {
      if (bits != 0) {
        return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
      }
      if (++w == words_.size()) return npos;
      bits = words_[w];
    }
  }
  std::size_t first_set() const { return next_set(0); }

  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t i = first_set(); i != npos; i = next_set(i + 1)) {
      out.push_back(i);
    }
    return out;
  }

  BitVec& operator^=(const BitVec& other) {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }
  BitVec& operator&=(const BitVec& other) {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  BitVec& operator|=(const BitVec& other) {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }

  // Complement within [0, size()).
  BitVec complement() const {
    BitVec out(*this);
    for (Word& w : out.words_) w = ~w;
    out.clear_tail();
    return out;
  }

  // Inner product over GF(2).
  bool dot(const BitVec& other) const {
    check_same(other);
    Word acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
    return (std::popcount(acc) & 1) != 0;
  }
  // popcount(this & other) without materializing the intersection.
  std::size_t intersection_count(const BitVec& other) const {
    check_same(other);
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      c += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
    }
    return c;
  }

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
      if (test(i)) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const BitVec&, const BitVec&) = default;

  // Lexicographic order on the bit string (index 0 most significant).
  friend bool lexicographic_less(const BitVec& a, const BitVec& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.test(i) != b.test(i)) return b.test(i);
    }
    return a.size() < b.size();
  }

 private:
  void check_index(std::size_t i) const {
    if (i >= length_) {
      throw InvalidArgument("bit index " + std::to_string(i) +
                            " out of range for length " +
                            std::to_string(length_));
    }
  }
  void check_same(const BitVec& other) const {
    if (other.length_ != length_) {
      throw DimensionMismatch("bit vector lengths differ: " +
                              std::to_string(length_) + " vs " +
                              std::to_string(other.length_));
    }
  }
  void clear_tail() {
    if (length_ % kWordBits != 0) {
      words_.back() &= (Word{1} << (length_ % kWordBits)) - 1;
    }
  }

  std::size_t length_ = 0;
  std::vector<Word> words_;
};

inline BitVec BitVec::from_string(std::string_view bits) {
  BitVec v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw ParseError("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

inline std::ostream& operator<<(std::ostream& os, const BitVec& v) {
  return os << v.to_string();
}

}  // namespace rbm

#endif  // RBM_BITVEC_HPP_
