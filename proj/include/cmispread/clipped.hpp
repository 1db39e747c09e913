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

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmispread/format.hpp"
#include "cmispread/parallel.hpp"
#include "cmispread/region.hpp"
#include "cmispread/rng.hpp"
#include "cmispread/symplectic.hpp"
#include "cmispread/tableau.hpp"

namespace cmispread {

/// A tableau in the clipped gauge together with its row endpoints.
///
/// Row k acts nontrivially on columns left[k] and right[k] and on nothing
/// outside [left[k], right[k]]. In the clipped gauge every column carries at
/// most two endpoints in total, two endpoints of the same kind at one column
/// carry different letters there, and rows are sorted by left + right.
struct ClippedTableau {
    StabilizerTableau base;
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    std::vector<std::size_t> lengths;

    /// Wraps `tab` as is, recording its endpoints. No gauge fixing happens.
    static ClippedTableau wrap(StabilizerTableau tab) {
        ClippedTableau ct;
        ct.base = std::move(tab);
        ct.recompute_endpoints();
        return ct;
    }

    std::size_t num_qubits() const { return base.num_qubits(); }
    std::size_t num_rows() const { return base.num_rows(); }

    void recompute_endpoints() {
        const std::size_t k = base.num_rows();
        left.assign(k, 0);
        right.assign(k, 0);
        lengths.assign(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            auto l = base.row(i).left_endpoint();
            auto r = base.row(i).right_endpoint();
            if (!l || !r) throw InvariantViolation("identity row in tableau");
            left[i] = *l;
            right[i] = *r;
            lengths[i] = *r - *l + 1;
        }
    }
};

/// Brings a tableau into the clipped gauge. The generated group is unchanged.
inline ClippedTableau clip(const StabilizerTableau &tab) {
    const std::size_t n = tab.num_qubits();
    const std::size_t k = tab.num_rows();
    std::vector<PauliString> rows = tab.rows();
    constexpr std::size_t W = BitVector::kWordBits;

    // Left pass: echelon form on left endpoints, X pivot before Z pivot.
    std::size_t pos = 0;
    std::vector<std::size_t> lefts(k, 0);
    for (std::size_t col = 0; col < n && pos < k; ++col) {
        const std::size_t word = col / W;
        for (int half = 0; half < 2 && pos < k; ++half) {
            auto bit = [&](const PauliString &p) { return half == 0 ? p.x(col) : p.z(col); };
            std::size_t pivot = pos;
            while (pivot < k && !bit(rows[pivot])) ++pivot;
            if (pivot == k) continue;
            std::swap(rows[pos], rows[pivot]);
            for (std::size_t r = pos + 1; r < k; ++r) {
                if (bit(rows[r])) rows[r].multiply_from_word(rows[pos], word);
            }
            lefts[pos] = col;
            ++pos;
        }
    }
    if (pos != k) throw InvariantViolation("clip: tableau rows are not independent");

    // Right pass: from the bottom up, cancel each row's right endpoint against
    // finalized rows ending at the same column. Finalized rows sit lower, so
    // their left endpoints are no smaller and left endpoints survive.
    std::vector<std::array<std::size_t, 2>> ending(n);
    std::vector<std::uint8_t> ending_count(n, 0);
    for (std::size_t j = k; j-- > 0;) {
        for (;;) {
            auto r = rows[j].right_endpoint();
            if (!r) throw InvariantViolation("clip: row reduced to the identity");
            const std::size_t col = *r;
            const unsigned letter = rows[j].code(col);
            const std::size_t last_word = col / W;
            auto absorb = [&](std::size_t f) { rows[j].multiply_words(rows[f], lefts[f] / W, last_word); };
            const std::uint8_t count = ending_count[col];
            if (count == 0) {
                ending[col][0] = j;
                ending_count[col] = 1;
                break;
            }
            const std::size_t f0 = ending[col][0];
            const unsigned c0 = rows[f0].code(col);
            if (count == 1) {
                if (letter == c0) {
                    absorb(f0);
                    continue;
                }
                ending[col][1] = j;
                ending_count[col] = 2;
                break;
            }
            const std::size_t f1 = ending[col][1];
            const unsigned c1 = rows[f1].code(col);
            if (letter == c0) {
                absorb(f0);
            } else if (letter == c1) {
                absorb(f1);
            } else {
                absorb(f0);
                absorb(f1);
            }
        }
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> rights(k);
    for (std::size_t i = 0; i < k; ++i) rights[i] = *rows[i].right_endpoint();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lefts[a] + rights[a] < lefts[b] + rights[b]; });

    ClippedTableau ct;
    std::vector<PauliString> sorted;
    sorted.reserve(k);
    ct.left.reserve(k);
    ct.right.reserve(k);
    ct.lengths.reserve(k);
    for (std::size_t i : order) {
        sorted.push_back(std::move(rows[i]));
        ct.left.push_back(lefts[i]);
        ct.right.push_back(rights[i]);
        ct.lengths.push_back(rights[i] - lefts[i] + 1);
    }
    ct.base = StabilizerTableau(n);
    ct.base.mutable_rows() = std::move(sorted);
#ifdef CMISPREAD_CHECK_INVARIANTS
    ct.base.check_invariants();
    if (!same_group(ct.base, tab)) throw InvariantViolation("clip changed the stabilizer group");
#endif
    return ct;
}

enum class GaugeCondition {
    /// More than two endpoints at one column.
    kEndpointCount,
    /// Two left (or two right) endpoints at a column with the same letter.
    kDistinctLetters,
    /// Rows not sorted by left + right.
    kSorting,
    /// Stored endpoints disagree with the rows.
    kEndpointRecord,
};

struct GaugeViolation {
    GaugeCondition condition;
    std::size_t column = 0;
    std::vector<std::size_t> rows;
    std::string message;
};

inline std::vector<GaugeViolation> validate_clipped(const ClippedTableau &ct) {
    std::vector<GaugeViolation> out;
    const std::size_t n = ct.num_qubits();
    const std::size_t k = ct.num_rows();
    if (ct.left.size() != k || ct.right.size() != k || ct.lengths.size() != k) {
        out.push_back({GaugeCondition::kEndpointRecord, 0, {}, "endpoint arrays do not match the row count"});
        return out;
    }
    for (std::size_t i = 0; i < k; ++i) {
        auto l = ct.base.row(i).left_endpoint();
        auto r = ct.base.row(i).right_endpoint();
        if (!l || *l != ct.left[i] || *r != ct.right[i] || ct.lengths[i] != *r - *l + 1) {
            out.push_back({GaugeCondition::kEndpointRecord, l.value_or(0), {i},
                           "row " + std::to_string(i) + " endpoints do not match its support"});
        }
    }
    if (!out.empty()) return out;

    std::vector<std::vector<std::size_t>> lefts_at(n), rights_at(n);
    for (std::size_t i = 0; i < k; ++i) {
        lefts_at[ct.left[i]].push_back(i);
        rights_at[ct.right[i]].push_back(i);
    }
    for (std::size_t col = 0; col < n; ++col) {
        const auto &ls = lefts_at[col];
        const auto &rs = rights_at[col];
        if (ls.size() + rs.size() > 2) {
            std::vector<std::size_t> involved = ls;
            involved.insert(involved.end(), rs.begin(), rs.end());
            out.push_back({GaugeCondition::kEndpointCount, col, involved,
                           "column " + std::to_string(col) + " carries " + std::to_string(ls.size() + rs.size()) +
                               " endpoints"});
        }
        for (const auto *group : {&ls, &rs}) {
            for (std::size_t a = 0; a < group->size(); ++a) {
                for (std::size_t b = a + 1; b < group->size(); ++b) {
                    std::size_t ra = (*group)[a], rb = (*group)[b];
                    if (ct.base.row(ra).code(col) == ct.base.row(rb).code(col)) {
                        out.push_back({GaugeCondition::kDistinctLetters, col, {ra, rb},
                                       "rows " + std::to_string(ra) + " and " + std::to_string(rb) +
                                           " share an endpoint letter at column " + std::to_string(col)});
                    }
                }
            }
        }
    }
    for (std::size_t i = 1; i < k; ++i) {
        if (ct.left[i - 1] + ct.right[i - 1] > ct.left[i] + ct.right[i]) {
            out.push_back({GaugeCondition::kSorting, ct.left[i], {i - 1, i},
                           "rows " + std::to_string(i - 1) + " and " + std::to_string(i) + " are out of midpoint order"});
        }
    }
    return out;
}

/// I(A:B) for A = [0, cut), B = [cut, n): rows with l < cut <= r.
inline long long mi_endpoints(const ClippedTableau &ct, std::size_t cut) {
    const std::size_t n = ct.num_qubits();
    if (cut < 1 || cut >= n) throw std::out_of_range("cut must lie in [1, n-1]");
    long long count = 0;
    for (std::size_t i = 0; i < ct.num_rows(); ++i) count += ct.left[i] < cut && ct.right[i] >= cut;
    return count;
}

/// I(A:C|B) for A = [0, x_left), B = [x_left, x_right), C = [x_right, n):
/// rows with l in A and r in C.
inline long long cmi_endpoints(const ClippedTableau &ct, std::size_t x_left, std::size_t x_right) {
    const std::size_t n = ct.num_qubits();
    if (x_left < 1 || x_right >= n || x_left >= x_right) {
        throw std::out_of_range("need 1 <= x_left < x_right <= n-1");
    }
    long long count = 0;
    for (std::size_t i = 0; i < ct.num_rows(); ++i) count += ct.left[i] < x_left && ct.right[i] >= x_right;
    return count;
}

/// A random Clifford applied to the first k rows of |0...0>.
inline StabilizerTableau sample_random_stabilizer_state(std::size_t n, std::size_t k, Rng &rng) {
    if (k > n) throw std::invalid_argument("cannot have more generators than qubits");
    StabilizerTableau tab = StabilizerTableau::from_product_state(n);
    tab.truncate_rows(k);
    if (k == 0) return tab;
    tab.apply_clifford(sample_random_clifford(n, rng), Region::all(n));
    return tab;
}

/// Histogram of delta = len - len_ideal over all rows of many clipped states.
struct LengthStats {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t samples = 0;
    /// n - k/2 + 1, rounded half up when k is odd.
    long long len_ideal = 0;
    std::map<long long, std::uint64_t> histogram;

    static long long ideal_length(std::size_t n, std::size_t k) {
        return (2 * static_cast<long long>(n) - static_cast<long long>(k) + 3) / 2;
    }

    std::uint64_t total_rows() const {
        std::uint64_t total = 0;
        for (const auto &[delta, count] : histogram) total += count;
        return total;
    }

    double mean_abs_delta() const {
        std::uint64_t total = total_rows();
        if (total == 0) return 0.0;
        double sum = 0.0;
        for (const auto &[delta, count] : histogram) sum += static_cast<double>(std::llabs(delta)) * count;
        return sum / static_cast<double>(total);
    }

    /// Fraction of rows with |delta| > threshold.
    double tail_fraction(long long threshold) const {
        std::uint64_t total = total_rows();
        if (total == 0) return 0.0;
        std::uint64_t tail = 0;
        for (const auto &[delta, count] : histogram) {
            if (std::llabs(delta) > threshold) tail += count;
        }
        return static_cast<double>(tail) / static_cast<double>(total);
    }

    void add(const ClippedTableau &ct) {
        for (std::size_t len : ct.lengths) ++histogram[static_cast<long long>(len) - len_ideal];
        ++samples;
    }

    void merge(const LengthStats &other) {
        if (other.n != n || other.k != k) throw std::invalid_argument("cannot merge statistics for different (n, k)");
        for (const auto &[delta, count] : other.histogram) histogram[delta] += count;
        samples += other.samples;
    }
};

/// Clips `samples` random stabilizer states; sample i draws from its own
/// stream derived from `seed`, so the result is independent of `threads`.
inline LengthStats length_deviation_stats(std::size_t samples, std::size_t n, std::size_t k, std::uint64_t seed,
                                          std::size_t threads = 1) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    if (k > n) throw std::invalid_argument("cannot have more generators than qubits");
    LengthStats empty;
    empty.n = n;
    empty.k = k;
    empty.len_ideal = LengthStats::ideal_length(n, k);
    std::vector<LengthStats> parts(samples, empty);
    parallel_for(samples, threads, [&](std::size_t i) {
        Rng rng = make_rng(seed, i);
        parts[i].add(clip(sample_random_stabilizer_state(n, k, rng)));
    });
    LengthStats total = empty;
    for (const auto &part : parts) total.merge(part);
    return total;
}

inline void write_length_stats_csv(std::ostream &out, const LengthStats &stats, std::uint64_t seed) {
    out << "# n=" << stats.n << "\n";
    out << "# k=" << stats.k << "\n";
    out << "# samples=" << stats.samples << "\n";
    out << "# seed=" << seed << "\n";
    out << "# len_ideal=" << stats.len_ideal << "\n";
    out << "delta,count\n";
    for (const auto &[delta, count] : stats.histogram) out << delta << "," << count << "\n";
}

}  // namespace cmispread
