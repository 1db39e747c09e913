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
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cmispread/bits.hpp"
#include "cmispread/region.hpp"

namespace cmispread {

/// Phaseless N-qubit Pauli operator. Qubit i carries X iff xs[i], Z iff zs[i],
/// Y iff both and I iff neither.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::size_t n) : xs_(n), zs_(n) {}
    PauliString(BitVector xs, BitVector zs) : xs_(std::move(xs)), zs_(std::move(zs)) {
        if (xs_.size() != zs_.size()) throw std::invalid_argument("x and z bit-vectors differ in length");
    }

    static PauliString identity(std::size_t n) { return PauliString(n); }

    /// Single-qubit letter `letter` on qubit q of an n-qubit string.
    static PauliString single(std::size_t n, std::size_t q, char letter) {
        PauliString p(n);
        p.set_letter(q, letter);
        return p;
    }

    /// Parses a string over {I,X,Y,Z}; '_' is accepted as I.
    static PauliString from_string(std::string_view text) {
        PauliString p(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) p.set_letter(i, text[i]);
        return p;
    }

    std::size_t num_qubits() const { return xs_.size(); }
    const BitVector &xs() const { return xs_; }
    const BitVector &zs() const { return zs_; }
    BitVector &xs() { return xs_; }
    BitVector &zs() { return zs_; }

    bool x(std::size_t q) const { return xs_.get(q); }
    bool z(std::size_t q) const { return zs_.get(q); }

    /// 0 = I, 1 = X, 2 = Z, 3 = Y.
    unsigned code(std::size_t q) const { return static_cast<unsigned>(xs_.get(q)) | (static_cast<unsigned>(zs_.get(q)) << 1); }

    char letter(std::size_t q) const {
        static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
        return kLetters[code(q)];
    }

    void set_letter(std::size_t q, char letter) {
        switch (letter) {
            case 'I':
            case '_':
                xs_.set(q, false);
                zs_.set(q, false);
                break;
            case 'X':
                xs_.set(q, true);
                zs_.set(q, false);
                break;
            case 'Y':
                xs_.set(q, true);
                zs_.set(q, true);
                break;
            case 'Z':
                xs_.set(q, false);
                zs_.set(q, true);
                break;
            default:
                throw std::invalid_argument(std::string("invalid Pauli letter '") + letter + "'");
        }
    }

    bool nontrivial(std::size_t q) const { return xs_.get(q) || zs_.get(q); }

    bool is_identity() const { return xs_.none() && zs_.none(); }

    std::size_t weight() const {
        std::size_t total = 0;
        auto x = xs_.words();
        auto z = zs_.words();
        for (std::size_t k = 0; k < x.size(); ++k) total += static_cast<std::size_t>(std::popcount(x[k] | z[k]));
        return total;
    }

    /// First qubit with a non-identity letter.
    std::optional<std::size_t> left_endpoint() const {
        auto x = xs_.words();
        auto z = zs_.words();
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (auto w = x[k] | z[k]) return k * BitVector::kWordBits + static_cast<std::size_t>(std::countr_zero(w));
        }
        return std::nullopt;
    }

    /// Last qubit with a non-identity letter.
    std::optional<std::size_t> right_endpoint() const {
        auto x = xs_.words();
        auto z = zs_.words();
        for (std::size_t k = x.size(); k-- > 0;) {
            if (auto w = x[k] | z[k]) {
                return k * BitVector::kWordBits + (BitVector::kWordBits - 1) - static_cast<std::size_t>(std::countl_zero(w));
            }
        }
        return std::nullopt;
    }

    /// Phaseless product: componentwise XOR.
    PauliString &operator*=(const PauliString &other) {
        require_same_size(other);
        xs_ ^= other.xs_;
        zs_ ^= other.zs_;
        return *this;
    }
    friend PauliString operator*(PauliString a, const PauliString &b) { return a *= b; }

    /// Product that only touches words at or after `first_word`; valid when
    /// `other` is identity on every earlier word.
    void multiply_from_word(const PauliString &other, std::size_t first_word) {
        xs_.xor_from_word(other.xs_, first_word);
        zs_.xor_from_word(other.zs_, first_word);
    }

    /// Product over words [first_word, last_word] only; valid when `other` is
    /// identity outside that word range.
    void multiply_words(const PauliString &other, std::size_t first_word, std::size_t last_word) {
        auto x = xs_.words();
        auto z = zs_.words();
        auto ox = other.xs_.words();
        auto oz = other.zs_.words();
        for (std::size_t k = first_word; k <= last_word; ++k) {
            x[k] ^= ox[k];
            z[k] ^= oz[k];
        }
    }

    /// Same length, identity outside `mask`.
    PauliString masked(const BitVector &mask) const { return PauliString(xs_ & mask, zs_ & mask); }

    /// The |region|-qubit string read off at the region's qubits.
    PauliString restricted(const Region &region) const {
        region.require_within(num_qubits());
        PauliString out(region.size());
        for (std::size_t i = 0; i < region.size(); ++i) {
            out.xs_.set(i, xs_.get(region[i]));
            out.zs_.set(i, zs_.get(region[i]));
        }
        return out;
    }

    /// Inverse of restricted(): an n-qubit string equal to `local` on the region.
    static PauliString embedded(const PauliString &local, const Region &region, std::size_t n) {
        if (local.num_qubits() != region.size()) throw std::invalid_argument("embedding size mismatch");
        region.require_within(n);
        PauliString out(n);
        for (std::size_t i = 0; i < region.size(); ++i) {
            out.xs_.set(region[i], local.xs_.get(i));
            out.zs_.set(region[i], local.zs_.get(i));
        }
        return out;
    }

    std::string to_string() const {
        std::string s(num_qubits(), 'I');
        for (std::size_t q = 0; q < num_qubits(); ++q) s[q] = letter(q);
        return s;
    }

    bool operator==(const PauliString &other) const = default;

    friend std::ostream &operator<<(std::ostream &out, const PauliString &p) { return out << p.to_string(); }

  private:
    void require_same_size(const PauliString &other) const {
        if (other.num_qubits() != num_qubits()) throw std::invalid_argument("Pauli string length mismatch");
    }

    BitVector xs_;
    BitVector zs_;
};

/// Symplectic form <a,b> = a.x.b.z + a.z.b.x mod 2; true iff a and b anticommute.
inline bool symplectic_product(const PauliString &a, const PauliString &b) {
    if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("Pauli string length mismatch");
    auto ax = a.xs().words();
    auto az = a.zs().words();
    auto bx = b.xs().words();
    auto bz = b.zs().words();
    BitVector::word_t acc = 0;
    for (std::size_t k = 0; k < ax.size(); ++k) acc ^= (ax[k] & bz[k]) ^ (az[k] & bx[k]);
    return std::popcount(acc) & 1;
}

/// Symplectic form restricted to the qubits selected by `mask`.
inline bool symplectic_product_on(const PauliString &a, const PauliString &b, const BitVector &mask) {
    auto ax = a.xs().words();
    auto az = a.zs().words();
    auto bx = b.xs().words();
    auto bz = b.zs().words();
    auto m = mask.words();
    BitVector::word_t acc = 0;
    for (std::size_t k = 0; k < ax.size(); ++k) acc ^= ((ax[k] & bz[k]) ^ (az[k] & bx[k])) & m[k];
    return std::popcount(acc) & 1;
}

inline bool commute(const PauliString &a, const PauliString &b) { return !symplectic_product(a, b); }

}  // namespace cmispread
