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
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmispread/gf2.hpp"
#include "cmispread/pauli.hpp"
#include "cmispread/region.hpp"
#include "cmispread/rng.hpp"
#include "cmispread/symplectic.hpp"

namespace cmispread {

/// Thrown when an internal invariant (commuting, independent rows; clipped
/// gauge conditions; endpoint/rank agreement) is found broken.
class InvariantViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

enum class DepolarizeCase { kUntouched = 1, kOneRow = 2, kTwoRows = 3 };

enum class MeasureCase { kInGroup = 1, kCommuting = 2, kAnticommuting = 3 };

struct MeasurementResult {
    int outcome = +1;
    /// True in the in-group case, where the (untracked) sign fixes the outcome;
    /// reported as +1 there.
    bool deterministic = false;
    MeasureCase kind = MeasureCase::kInGroup;
};

/// Phaseless stabilizer tableau: K commuting, independent generators on n qubits.
/// The represented state is the uniform mixture over the joint +1 eigenspace.
class StabilizerTableau {
  public:
    StabilizerTableau() = default;
    explicit StabilizerTableau(std::size_t n) : n_(n) {}

    /// Builds from explicit rows and checks the tableau invariants.
    StabilizerTableau(std::size_t n, std::vector<PauliString> rows) : n_(n), rows_(std::move(rows)) {
        for (const auto &r : rows_) {
            if (r.num_qubits() != n_) throw std::invalid_argument("row length does not match qubit count");
        }
        if (auto problem = find_invariant_violation()) throw std::invalid_argument(*problem);
    }

    static StabilizerTableau from_strings(const std::vector<std::string> &rows) {
        if (rows.empty()) throw std::invalid_argument("from_strings needs at least one row to fix n");
        std::vector<PauliString> parsed;
        for (const auto &s : rows) parsed.push_back(PauliString::from_string(s));
        const std::size_t n = parsed.front().num_qubits();
        return StabilizerTableau(n, std::move(parsed));
    }

    /// |0...0>: row i is Z on qubit i.
    static StabilizerTableau from_product_state(std::size_t n) {
        StabilizerTableau t(n);
        t.rows_.reserve(n);
        for (std::size_t q = 0; q < n; ++q) t.rows_.push_back(PauliString::single(n, q, 'Z'));
        return t;
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t num_rows() const { return rows_.size(); }
    const PauliString &row(std::size_t i) const { return rows_[i]; }
    const std::vector<PauliString> &rows() const { return rows_; }

    /// Row access that bypasses invariant checks; callers restore them.
    std::vector<PauliString> &mutable_rows() { return rows_; }

    void truncate_rows(std::size_t k) {
        if (k > rows_.size()) throw std::invalid_argument("cannot truncate to more rows than present");
        rows_.resize(k);
    }

    /// Conjugates every row by the Clifford `u` acting on `support`.
    void apply_clifford(const SymplecticMatrix &u, const Region &support) {
        if (support.size() != u.num_qubits()) throw std::invalid_argument("support size does not match Clifford size");
        support.require_within(n_);
        const std::size_t k = support.size();
        BitVector mask = support.mask(n_);
        BitVector local(2 * k);
        for (auto &row : rows_) {
            if (!row.xs().intersects(mask) && !row.zs().intersects(mask)) continue;
            local.clear();
            for (std::size_t j = 0; j < k; ++j) {
                if (row.x(support[j])) local.set(2 * j, true);
                if (row.z(support[j])) local.set(2 * j + 1, true);
            }
            BitVector image = u.apply(local);
            for (std::size_t j = 0; j < k; ++j) {
                row.xs().set(support[j], image.get(2 * j));
                row.zs().set(support[j], image.get(2 * j + 1));
            }
        }
        debug_check();
    }

    /// rho -> Tr_q(rho) (x) I_q / 2. Pivots are the lowest-index rows.
    DepolarizeCase depolarize_qubit(std::size_t q) {
        require_qubit(q);
        std::optional<std::size_t> first;
        std::optional<std::size_t> second;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            unsigned c = rows_[r].code(q);
            if (!c) continue;
            if (!first) {
                first = r;
            } else if (!second && c != rows_[*first].code(q)) {
                second = r;
                break;
            }
        }
        if (!first) return DepolarizeCase::kUntouched;

        const unsigned c1 = rows_[*first].code(q);
        const unsigned c2 = second ? rows_[*second].code(q) : 0;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (r == *first || (second && r == *second)) continue;
            unsigned c = rows_[r].code(q);
            if (!c) continue;
            // Letters multiply like the 2-bit codes XOR.
            if (c == c1) {
                rows_[r] *= rows_[*first];
            } else if (c == c2) {
                rows_[r] *= rows_[*second];
            } else {
                rows_[r] *= rows_[*first];
                rows_[r] *= rows_[*second];
            }
        }
        DepolarizeCase result = DepolarizeCase::kOneRow;
        if (second) {
            rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(*second));
            result = DepolarizeCase::kTwoRows;
        }
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(*first));
        debug_check();
        return result;
    }

    /// Measures the Pauli observable g; the tableau becomes the post-measurement
    /// stabilizer group.
    MeasurementResult measure(const PauliString &g, Rng &rng) {
        if (g.num_qubits() != n_) throw std::invalid_argument("observable length does not match tableau");
        if (g.is_identity()) throw std::invalid_argument("cannot measure the identity");
        MeasurementResult result;
        std::optional<std::size_t> pivot;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!symplectic_product(rows_[r], g)) continue;
            if (!pivot) {
                pivot = r;
            } else {
                rows_[r] *= rows_[*pivot];
            }
        }
        if (pivot) {
            rows_[*pivot] = g;
            result.kind = MeasureCase::kAnticommuting;
            result.outcome = coin(rng) ? -1 : +1;
        } else if (contains(g)) {
            result.kind = MeasureCase::kInGroup;
            result.deterministic = true;
        } else {
            rows_.push_back(g);
            result.kind = MeasureCase::kCommuting;
            result.outcome = coin(rng) ? -1 : +1;
        }
        debug_check();
        return result;
    }

    /// Whether g (up to sign) belongs to the stabilizer group.
    bool contains(const PauliString &g) const {
        std::vector<PauliString> stacked = rows_;
        stacked.push_back(g);
        return pauli_rank(stacked) == rows_.size();
    }

    /// S(A) in bits: |A| - dim(subgroup supported inside A).
    std::size_t entropy(const Region &a) const {
        a.require_within(n_);
        if (a.empty()) return 0;
        BitVector outside = a.complement(n_).mask(n_);
        std::vector<PauliString> restricted;
        restricted.reserve(rows_.size());
        for (const auto &r : rows_) restricted.push_back(r.masked(outside));
        std::size_t supported_inside = rows_.size() - pauli_rank(restricted);
        return a.size() - supported_inside;
    }

    long long mutual_information(const Region &a, const Region &b) const {
        require_disjoint(a, b);
        return static_cast<long long>(entropy(a)) + static_cast<long long>(entropy(b)) -
               static_cast<long long>(entropy(a | b));
    }

    /// I(A:C|B) = S(AB) + S(BC) - S(B) - S(ABC).
    long long cmi(const Region &a, const Region &b, const Region &c) const {
        require_disjoint(a, b);
        require_disjoint(b, c);
        require_disjoint(a, c);
        Region ab = a | b;
        Region bc = b | c;
        return static_cast<long long>(entropy(ab)) + static_cast<long long>(entropy(bc)) -
               static_cast<long long>(entropy(b)) - static_cast<long long>(entropy(ab | c));
    }

    /// Description of the first broken invariant, if any.
    std::optional<std::string> find_invariant_violation() const {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i].num_qubits() != n_) return "row " + std::to_string(i) + " has the wrong length";
            for (std::size_t j = i + 1; j < rows_.size(); ++j) {
                if (symplectic_product(rows_[i], rows_[j])) {
                    return "rows " + std::to_string(i) + " and " + std::to_string(j) + " anticommute";
                }
            }
        }
        if (rows_.size() > n_) return "more rows than qubits";
        if (pauli_rank(rows_) != rows_.size()) return "rows are not independent";
        return std::nullopt;
    }

    void check_invariants() const {
        if (auto problem = find_invariant_violation()) throw InvariantViolation(*problem);
    }

    /// "n=<n> k=<K>" followed by one row per line.
    std::string to_text() const {
        std::ostringstream out;
        out << "n=" << n_ << " k=" << rows_.size() << "\n";
        for (const auto &r : rows_) out << r.to_string() << "\n";
        return out.str();
    }

    static StabilizerTableau from_text(std::istream &in) {
        std::string header;
        if (!std::getline(in, header)) throw std::invalid_argument("missing tableau header");
        std::size_t n = 0, k = 0;
        if (std::sscanf(header.c_str(), "n=%zu k=%zu", &n, &k) != 2) {
            throw std::invalid_argument("malformed tableau header: " + header);
        }
        std::vector<PauliString> rows;
        for (std::size_t i = 0; i < k; ++i) {
            std::string line;
            if (!std::getline(in, line)) throw std::invalid_argument("tableau ended early");
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.size() != n) throw std::invalid_argument("tableau row has the wrong length");
            rows.push_back(PauliString::from_string(line));
        }
        return StabilizerTableau(n, std::move(rows));
    }

    static StabilizerTableau from_text(const std::string &text) {
        std::istringstream in(text);
        return from_text(in);
    }

    bool operator==(const StabilizerTableau &other) const = default;

  private:
    void require_qubit(std::size_t q) const {
        if (q >= n_) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
    }

    void debug_check() const {
#ifdef CMISPREAD_CHECK_INVARIANTS
        check_invariants();
#endif
    }

    std::size_t n_ = 0;
    std::vector<PauliString> rows_;
};

/// True iff both tableaus generate the same group (up to signs).
inline bool same_group(const StabilizerTableau &a, const StabilizerTableau &b) {
    if (a.num_qubits() != b.num_qubits() || a.num_rows() != b.num_rows()) return false;
    std::vector<PauliString> stacked = a.rows();
    stacked.insert(stacked.end(), b.rows().begin(), b.rows().end());
    return pauli_rank(stacked) == a.num_rows();
}

}  // namespace cmispread
