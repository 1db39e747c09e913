// Copyright 2026 The cmispread Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmispread {

/// Packed bit-vector over GF(2). Bit i lives in word i / 64 at position i % 64.
/// Bits past size() in the last word are always zero.
class BitVector {
  public:
    using word_t = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitVector() = default;
    explicit BitVector(std::size_t num_bits) : num_bits_(num_bits), words_(num_words_for(num_bits), 0) {}

    static constexpr std::size_t num_words_for(std::size_t num_bits) {
        return (num_bits + kWordBits - 1) / kWordBits;
    }

    std::size_t size() const { return num_bits_; }
    std::size_t num_words() const { return words_.size(); }
    std::span<word_t> words() { return words_; }
    std::span<const word_t> words() const { return words_; }

    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
    void set(std::size_t i, bool value) {
        word_t mask = word_t{1} << (i % kWordBits);
        if (value) {
            words_[i / kWordBits] |= mask;
        } else {
            words_[i / kWordBits] &= ~mask;
        }
    }
    void flip(std::size_t i) { words_[i / kWordBits] ^= word_t{1} << (i % kWordBits); }

    bool any() const {
        for (word_t w : words_) {
            if (w) return true;
        }
        return false;
    }
    bool none() const { return !any(); }

    std::size_t popcount() const {
        std::size_t total = 0;
        for (word_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }

    /// Lowest set index, if any.
    std::optional<std::size_t> first_set() const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            if (words_[k]) return k * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[k]));
        }
        return std::nullopt;
    }

    /// Highest set index, if any.
    std::optional<std::size_t> last_set() const {
        for (std::size_t k = words_.size(); k-- > 0;) {
            if (words_[k]) return k * kWordBits + (kWordBits - 1) - static_cast<std::size_t>(std::countl_zero(words_[k]));
        }
        return std::nullopt;
    }

    BitVector &operator^=(const BitVector &other) {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= other.words_[k];
        return *this;
    }
    BitVector &operator&=(const BitVector &other) {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
        return *this;
    }
    BitVector &operator|=(const BitVector &other) {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector &b) { return a ^= b; }
    friend BitVector operator&(BitVector a, const BitVector &b) { return a &= b; }
    friend BitVector operator|(BitVector a, const BitVector &b) { return a |= b; }

    /// XOR `other` into this vector, touching only words at index >= first_word.
    void xor_from_word(const BitVector &other, std::size_t first_word) {
        for (std::size_t k = first_word; k < words_.size(); ++k) words_[k] ^= other.words_[k];
    }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    bool dot(const BitVector &other) const {
        require_same_size(other);
        word_t acc = 0;
        for (std::size_t k = 0; k < words_.size(); ++k) acc ^= words_[k] & other.words_[k];
        return std::popcount(acc) & 1;
    }

    bool intersects(const BitVector &other) const {
        require_same_size(other);
        for (std::size_t k = 0; k < words_.size(); ++k) {
            if (words_[k] & other.words_[k]) return true;
        }
        return false;
    }

    void clear() {
        for (word_t &w : words_) w = 0;
    }

    /// Bits [begin, end) set to one.
    static BitVector range(std::size_t num_bits, std::size_t begin, std::size_t end) {
        BitVector v(num_bits);
        for (std::size_t i = begin; i < end; ++i) v.set(i, true);
        return v;
    }

    std::string to_string() const {
        std::string s(num_bits_, '0');
        for (std::size_t i = 0; i < num_bits_; ++i) {
            if (get(i)) s[i] = '1';
        }
        return s;
    }

    /// Parses a string of '0'/'1' characters, index 0 first.
    static BitVector from_string(std::string_view text) {
        BitVector v(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '1') {
                v.set(i, true);
            } else if (text[i] != '0') {
                throw std::invalid_argument("bit string may only contain '0' and '1'");
            }
        }
        return v;
    }

    bool operator==(const BitVector &other) const = default;

  private:
    void require_same_size(const BitVector &other) const {
        if (other.num_bits_ != num_bits_) {
            throw std::invalid_argument("bit-vector length mismatch");
        }
    }

    std::size_t num_bits_ = 0;
    std::vector<word_t> words_;
};

}  // namespace cmispread
