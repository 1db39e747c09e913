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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmispread/bits.hpp"
#include "cmispread/rng.hpp"

namespace cmispread {

/// Symplectic form on 2k-bit vectors laid out as (x_0, z_0, x_1, z_1, ...).
inline bool symplectic_form(const BitVector &a, const BitVector &b) {
    constexpr BitVector::word_t kEven = 0x5555555555555555ull;
    auto aw = a.words();
    auto bw = b.words();
    BitVector::word_t acc = 0;
    for (std::size_t i = 0; i < aw.size(); ++i) {
        BitVector::word_t swapped = ((bw[i] & kEven) << 1) | ((bw[i] >> 1) & kEven);
        acc ^= aw[i] & swapped;
    }
    return std::popcount(acc) & 1;
}

/// Phaseless Clifford on k qubits, i.e. an element of Sp(2k, GF(2)).
///
/// Stored column-wise: image(j) is where the basis vector e_j is sent, with
/// e_{2q} = X_q and e_{2q+1} = Z_q. A 2k-bit vector v maps to the XOR of
/// image(j) over the set bits j of v.
class SymplecticMatrix {
  public:
    SymplecticMatrix() = default;
    explicit SymplecticMatrix(std::vector<BitVector> images) : images_(std::move(images)) {
        if (images_.size() % 2 != 0) throw std::invalid_argument("symplectic matrix needs an even dimension");
        k_ = images_.size() / 2;
        for (const auto &v : images_) {
            if (v.size() != 2 * k_) throw std::invalid_argument("symplectic matrix must be square");
        }
    }

    static SymplecticMatrix identity(std::size_t k) {
        std::vector<BitVector> images;
        for (std::size_t j = 0; j < 2 * k; ++j) {
            BitVector v(2 * k);
            v.set(j, true);
            images.push_back(std::move(v));
        }
        return SymplecticMatrix(std::move(images));
    }

    static SymplecticMatrix hadamard() {
        return SymplecticMatrix({BitVector::from_string("01"), BitVector::from_string("10")});
    }

    /// S gate: X -> Y, Z -> Z.
    static SymplecticMatrix phase() {
        return SymplecticMatrix({BitVector::from_string("11"), BitVector::from_string("01")});
    }

    /// CNOT with control qubit 0 and target qubit 1: X0 -> X0 X1, Z0 -> Z0,
    /// X1 -> X1, Z1 -> Z0 Z1.
    static SymplecticMatrix cnot() {
        return SymplecticMatrix({BitVector::from_string("1010"), BitVector::from_string("0100"),
                                 BitVector::from_string("0010"), BitVector::from_string("0101")});
    }

    std::size_t num_qubits() const { return k_; }
    const BitVector &image(std::size_t j) const { return images_[j]; }
    const std::vector<BitVector> &images() const { return images_; }

    /// Matrix entry m[row][col]: component `row` of image(col).
    bool entry(std::size_t row, std::size_t col) const { return images_[col].get(row); }

    BitVector apply(const BitVector &v) const {
        if (v.size() != 2 * k_) throw std::invalid_argument("vector length does not match symplectic matrix");
        BitVector out(2 * k_);
        for (std::size_t j = 0; j < 2 * k_; ++j) {
            if (v.get(j)) out ^= images_[j];
        }
        return out;
    }

    /// (this * other)(v) = this(other(v)).
    SymplecticMatrix compose(const SymplecticMatrix &other) const {
        if (other.k_ != k_) throw std::invalid_argument("symplectic dimension mismatch");
        std::vector<BitVector> images;
        for (const auto &v : other.images_) images.push_back(apply(v));
        return SymplecticMatrix(std::move(images));
    }

    /// Checks m^T J m = J, i.e. images of X_j/Z_j pair up like the originals.
    bool is_symplectic() const {
        for (std::size_t a = 0; a < 2 * k_; ++a) {
            for (std::size_t b = a + 1; b < 2 * k_; ++b) {
                bool expected = (a % 2 == 0) && b == a + 1;
                if (symplectic_form(images_[a], images_[b]) != expected) return false;
            }
        }
        return true;
    }

    /// Concatenated image bits; a canonical key for counting distinct elements.
    std::string key() const {
        std::string s;
        for (const auto &v : images_) s += v.to_string();
        return s;
    }

    bool operator==(const SymplecticMatrix &other) const = default;

  private:
    std::size_t k_ = 0;
    std::vector<BitVector> images_;
};

/// Uniformly random element of Sp(2k, GF(2)).
///
/// Builds the images of X_0, Z_0, X_1, Z_1, ... one symplectic pair at a time.
/// At step i the pair (v, w) is drawn uniformly from the symplectic complement W
/// of the pairs already chosen: v uniform over W \ {0}, then w uniform over
/// {w in W : <v,w> = 1}. Every group element arises from exactly one sequence of
/// choices, so the result is uniform. A basis of W is carried along; after each
/// pair the two basis vectors displaced by v and w are dropped and the rest are
/// projected onto the complement of span{v, w}, so no elimination is needed.
inline SymplecticMatrix sample_random_clifford(std::size_t k, Rng &rng) {
    if (k == 0) throw std::invalid_argument("random Clifford needs at least one qubit");
    const std::size_t dim = 2 * k;
    std::vector<BitVector> basis;
    basis.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        BitVector e(dim);
        e.set(j, true);
        basis.push_back(std::move(e));
    }
    std::vector<BitVector> images(dim);

    auto random_coefficients = [&](std::size_t count) {
        BitVector c(count);
        auto words = c.words();
        for (std::size_t w = 0; w < words.size(); ++w) words[w] = rng();
        if (count % BitVector::kWordBits) words.back() &= (BitVector::word_t{1} << (count % BitVector::kWordBits)) - 1;
        return c;
    };
    auto combine = [&](const BitVector &coeffs) {
        BitVector out(dim);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (coeffs.get(j)) out ^= basis[j];
        }
        return out;
    };

    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t d = basis.size();
        BitVector a;
        do {
            a = random_coefficients(d);
        } while (a.none());
        BitVector v = combine(a);
        std::size_t drop_v = *a.first_set();
        // {v} together with basis minus basis[drop_v] is again a basis of W.
        basis[drop_v] = v;

        BitVector b;
        BitVector w;
        do {
            b = random_coefficients(d);
            w = combine(b);
        } while (!symplectic_form(v, w));
        // <v,w> = 1 forces a coefficient on some basis vector other than v.
        std::size_t drop_w = d;
        for (std::size_t j = 0; j < d; ++j) {
            if (j != drop_v && b.get(j)) {
                drop_w = j;
                break;
            }
        }

        images[2 * i] = v;
        images[2 * i + 1] = w;

        std::vector<BitVector> next;
        next.reserve(d - 2);
        for (std::size_t j = 0; j < d; ++j) {
            if (j == drop_v || j == drop_w) continue;
            BitVector u = basis[j];
            bool uw = symplectic_form(u, w);
            bool uv = symplectic_form(u, v);
            if (uw) u ^= v;
            if (uv) u ^= w;
            next.push_back(std::move(u));
        }
        basis = std::move(next);
    }
    return SymplecticMatrix(std::move(images));
}

}  // namespace cmispread
