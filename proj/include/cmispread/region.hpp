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
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <string>
#include <stdexcept>
#include <vector>

#include "cmispread/bits.hpp"

namespace cmispread {

/// A set of qubit indices, kept sorted and duplicate-free.
class Region {
  public:
    Region() = default;
    Region(std::initializer_list<std::size_t> qubits) : Region(std::vector<std::size_t>(qubits)) {}
    explicit Region(std::vector<std::size_t> qubits) : qubits_(std::move(qubits)) {
        std::sort(qubits_.begin(), qubits_.end());
        if (std::adjacent_find(qubits_.begin(), qubits_.end()) != qubits_.end()) {
            throw std::invalid_argument("region contains a duplicate qubit index");
        }
    }

    /// Qubits [begin, end).
    static Region interval(std::size_t begin, std::size_t end) {
        Region r;
        for (std::size_t q = begin; q < end; ++q) r.qubits_.push_back(q);
        return r;
    }

    static Region all(std::size_t n) { return interval(0, n); }

    const std::vector<std::size_t> &qubits() const { return qubits_; }
    std::size_t size() const { return qubits_.size(); }
    bool empty() const { return qubits_.empty(); }
    std::size_t operator[](std::size_t i) const { return qubits_[i]; }
    auto begin() const { return qubits_.begin(); }
    auto end() const { return qubits_.end(); }

    bool contains(std::size_t q) const { return std::binary_search(qubits_.begin(), qubits_.end(), q); }

    /// Throws if any index is >= n.
    void require_within(std::size_t n) const {
        if (!qubits_.empty() && qubits_.back() >= n) {
            throw std::out_of_range("region index " + std::to_string(qubits_.back()) + " out of range for " +
                                    std::to_string(n) + " qubits");
        }
    }

    BitVector mask(std::size_t n) const {
        require_within(n);
        BitVector m(n);
        for (std::size_t q : qubits_) m.set(q, true);
        return m;
    }

    Region complement(std::size_t n) const {
        require_within(n);
        Region r;
        std::size_t k = 0;
        for (std::size_t q = 0; q < n; ++q) {
            if (k < qubits_.size() && qubits_[k] == q) {
                ++k;
            } else {
                r.qubits_.push_back(q);
            }
        }
        return r;
    }

    bool disjoint_from(const Region &other) const {
        std::size_t i = 0, j = 0;
        while (i < qubits_.size() && j < other.qubits_.size()) {
            if (qubits_[i] == other.qubits_[j]) return false;
            if (qubits_[i] < other.qubits_[j]) {
                ++i;
            } else {
                ++j;
            }
        }
        return true;
    }

    friend Region operator|(const Region &a, const Region &b) {
        Region r;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r.qubits_));
        return r;
    }

    bool operator==(const Region &other) const = default;

  private:
    std::vector<std::size_t> qubits_;
};

inline void require_disjoint(const Region &a, const Region &b) {
    if (!a.disjoint_from(b)) throw std::invalid_argument("regions must be disjoint");
}

}  // namespace cmispread
