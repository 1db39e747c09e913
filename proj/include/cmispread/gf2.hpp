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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cmispread/bits.hpp"
#include "cmispread/pauli.hpp"

namespace cmispread {

/// Rectangular matrix over GF(2), stored as packed rows.
class Gf2Matrix {
  public:
    Gf2Matrix() = default;
    Gf2Matrix(std::size_t num_rows, std::size_t num_cols) : num_cols_(num_cols), rows_(num_rows, BitVector(num_cols)) {}
    explicit Gf2Matrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
        if (!rows_.empty()) num_cols_ = rows_.front().size();
        for (const auto &r : rows_) {
            if (r.size() != num_cols_) throw std::invalid_argument("GF(2) matrix rows must have uniform length");
        }
    }

    /// Each Pauli string becomes one row laid out as (x bits, z bits).
    static Gf2Matrix from_paulis(std::span<const PauliString> paulis) {
        if (paulis.empty()) return Gf2Matrix();
        std::size_t n = paulis.front().num_qubits();
        Gf2Matrix m(paulis.size(), 2 * n);
        for (std::size_t r = 0; r < paulis.size(); ++r) {
            if (paulis[r].num_qubits() != n) throw std::invalid_argument("Pauli rows must share a qubit count");
            for (std::size_t q = 0; q < n; ++q) {
                if (paulis[r].x(q)) m.rows_[r].set(q, true);
                if (paulis[r].z(q)) m.rows_[r].set(n + q, true);
            }
        }
        return m;
    }

    std::size_t num_rows() const { return rows_.size(); }
    std::size_t num_cols() const { return num_cols_; }
    const BitVector &row(std::size_t r) const { return rows_[r]; }
    BitVector &row(std::size_t r) { return rows_[r]; }
    const std::vector<BitVector> &rows() const { return rows_; }

    void append_row(BitVector row) {
        if (rows_.empty() && num_cols_ == 0) num_cols_ = row.size();
        if (row.size() != num_cols_) throw std::invalid_argument("GF(2) matrix rows must have uniform length");
        rows_.push_back(std::move(row));
    }

    /// Row echelon form in place; returns the rank.
    std::size_t eliminate() {
        std::size_t rank = 0;
        for (std::size_t col = 0; col < num_cols_ && rank < rows_.size(); ++col) {
            std::size_t pivot = rank;
            while (pivot < rows_.size() && !rows_[pivot].get(col)) ++pivot;
            if (pivot == rows_.size()) continue;
            std::swap(rows_[rank], rows_[pivot]);
            std::size_t word = col / BitVector::kWordBits;
            for (std::size_t r = rank + 1; r < rows_.size(); ++r) {
                if (rows_[r].get(col)) rows_[r].xor_from_word(rows_[rank], word);
            }
            ++rank;
        }
        return rank;
    }

  private:
    std::size_t num_cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Rank over GF(2). The argument is taken by value and consumed.
inline std::size_t gf2_rank(Gf2Matrix m) { return m.eliminate(); }

/// Rank of Pauli strings viewed as 2n-bit vectors.
inline std::size_t pauli_rank(std::span<const PauliString> paulis) {
    // Eliminating directly on the strings avoids a copy into (x|z) layout.
    std::vector<PauliString> rows(paulis.begin(), paulis.end());
    if (rows.empty()) return 0;
    std::size_t n = rows.front().num_qubits();
    std::size_t rank = 0;
    for (std::size_t q = 0; q < n && rank < rows.size(); ++q) {
        for (int half = 0; half < 2 && rank < rows.size(); ++half) {
            auto bit = [&](const PauliString &p) { return half == 0 ? p.x(q) : p.z(q); };
            std::size_t pivot = rank;
            while (pivot < rows.size() && !bit(rows[pivot])) ++pivot;
            if (pivot == rows.size()) continue;
            std::swap(rows[rank], rows[pivot]);
            std::size_t word = q / BitVector::kWordBits;
            for (std::size_t r = rank + 1; r < rows.size(); ++r) {
                if (bit(rows[r])) rows[r].multiply_from_word(rows[rank], word);
            }
            ++rank;
        }
    }
    return rank;
}

/// Incrementally built row-reduced basis of a GF(2) subspace, used for
/// membership and independence queries.
class Gf2Basis {
  public:
    explicit Gf2Basis(std::size_t num_bits) : num_bits_(num_bits) {}

    std::size_t dimension() const { return rows_.size(); }

    /// Reduces v against the basis; the result is zero iff v is in the span.
    BitVector reduce(BitVector v) const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (v.get(pivots_[i])) v ^= rows_[i];
        }
        return v;
    }

    bool contains(const BitVector &v) const { return reduce(v).none(); }

    /// Adds v; returns false if it was already in the span.
    bool insert(const BitVector &v) {
        if (v.size() != num_bits_) throw std::invalid_argument("basis vector length mismatch");
        BitVector r = reduce(v);
        auto pivot = r.first_set();
        if (!pivot) return false;
        // Keep the basis fully reduced on pivot columns.
        for (auto &row : rows_) {
            if (row.get(*pivot)) row ^= r;
        }
        rows_.push_back(std::move(r));
        pivots_.push_back(*pivot);
        return true;
    }

  private:
    std::size_t num_bits_;
    std::vector<BitVector> rows_;
    std::vector<std::size_t> pivots_;
};

/// Basis of the left kernel: coefficient vectors c (length = #rows) with
/// sum_i c_i rows[i] = 0.
inline std::vector<BitVector> left_kernel(const std::vector<BitVector> &rows) {
    std::size_t k = rows.size();
    if (k == 0) return {};
    std::size_t cols = rows.front().size();
    std::vector<BitVector> work = rows;
    std::vector<BitVector> coeffs;
    coeffs.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        BitVector e(k);
        e.set(i, true);
        coeffs.push_back(std::move(e));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < k; ++col) {
        std::size_t pivot = rank;
        while (pivot < k && !work[pivot].get(col)) ++pivot;
        if (pivot == k) continue;
        std::swap(work[rank], work[pivot]);
        std::swap(coeffs[rank], coeffs[pivot]);
        for (std::size_t r = rank + 1; r < k; ++r) {
            if (work[r].get(col)) {
                work[r] ^= work[rank];
                coeffs[r] ^= coeffs[rank];
            }
        }
        ++rank;
    }
    return std::vector<BitVector>(coeffs.begin() + static_cast<std::ptrdiff_t>(rank), coeffs.end());
}

}  // namespace cmispread
