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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmispread/circuits.hpp"
#include "cmispread/gf2.hpp"
#include "cmispread/pauli.hpp"
#include "cmispread/region.hpp"
#include "cmispread/rng.hpp"
#include "cmispread/tableau.hpp"

namespace cmispread {

/// Two group elements whose A-parts anticommute and whose C-parts anticommute.
/// The coefficient vectors express each element in the tableau's rows.
struct BellPair {
    PauliString first;
    PauliString second;
    BitVector first_coeffs;
    BitVector second_coeffs;
};

struct BellPairPlan {
    std::vector<BellPair> pairs;
    /// Non-identity B-parts of the pair elements, embedded in the full system.
    std::vector<PauliString> observables;

    std::size_t n_bell() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

namespace internal {

/// A group element together with its coefficients in the tableau rows.
struct Element {
    PauliString pauli;
    BitVector coeffs;

    Element &operator^=(const Element &o) {
        pauli *= o.pauli;
        coeffs ^= o.coeffs;
        return *this;
    }
};

inline Element sum(Element a, const Element &b) { return a ^= b; }

/// Elements of span(basis) whose restrictions to `mask` vanish.
inline std::vector<Element> supported_off(const std::vector<Element> &basis, const BitVector &mask) {
    if (basis.empty()) return {};
    std::vector<BitVector> restricted;
    for (const auto &e : basis) {
        const std::size_t n = e.pauli.num_qubits();
        BitVector bits(2 * n);
        for (std::size_t q = 0; q < n; ++q) {
            if (!mask.get(q)) continue;
            bits.set(2 * q, e.pauli.x(q));
            bits.set(2 * q + 1, e.pauli.z(q));
        }
        restricted.push_back(std::move(bits));
    }
    std::vector<Element> out;
    for (const auto &c : left_kernel(restricted)) {
        Element e{PauliString(basis.front().pauli.num_qubits()), BitVector(basis.front().coeffs.size())};
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (c.get(i)) e ^= basis[i];
        }
        out.push_back(std::move(e));
    }
    return out;
}

inline BitVector pauli_bits(const PauliString &p) {
    const std::size_t n = p.num_qubits();
    BitVector bits(2 * n);
    for (std::size_t q = 0; q < n; ++q) {
        bits.set(2 * q, p.x(q));
        bits.set(2 * q + 1, p.z(q));
    }
    return bits;
}

/// Some i such that w_i anticommutes on `mask` with another basis element.
inline std::optional<std::size_t> outside_radical(const std::vector<Element> &w, const BitVector &mask) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (symplectic_product_on(w[i].pauli, w[j].pauli, mask)) return i;
        }
    }
    return std::nullopt;
}

inline bool in_radical(const Element &u, const std::vector<Element> &w, const BitVector &mask) {
    for (const auto &e : w) {
        if (symplectic_product_on(u.pauli, e.pauli, mask)) return false;
    }
    return true;
}

}  // namespace internal

/// Greedy Bell-pair search over the part of the group that carries I(A:C|B).
///
/// Candidates are restricted to a complement V of S_AB + S_BC in the group
/// (S_X is the subgroup supported inside X); dim V = I(A:C|B). Within the
/// current candidate space W a pair exists iff the A-form and the C-form are
/// both nonzero on W, and is found directly: u avoids both radicals and v
/// solves <u,v>_A = <u,v>_C = 1. W is then cut down to elements commuting with
/// u and v on A and on C, which also makes every B-part commute across pairs.
inline BellPairPlan find_bell_candidates(const StabilizerTableau &tab, const Region &a, const Region &b,
                                         const Region &c) {
    const std::size_t n = tab.num_qubits();
    require_disjoint(a, b);
    require_disjoint(b, c);
    require_disjoint(a, c);
    if (a.size() + b.size() + c.size() != n) throw std::invalid_argument("regions must cover the system");
    a.require_within(n);
    b.require_within(n);
    c.require_within(n);
    BellPairPlan plan;
    const std::size_t k = tab.num_rows();
    if (k == 0) return plan;

    using internal::Element;
    std::vector<Element> rows;
    for (std::size_t i = 0; i < k; ++i) {
        BitVector e(k);
        e.set(i, true);
        rows.push_back({tab.row(i), std::move(e)});
    }
    const BitVector a_mask = a.mask(n);
    const BitVector c_mask = c.mask(n);

    Gf2Basis local(2 * n);
    for (const auto &e : internal::supported_off(rows, c_mask)) local.insert(internal::pauli_bits(e.pauli));
    for (const auto &e : internal::supported_off(rows, a_mask)) local.insert(internal::pauli_bits(e.pauli));
    std::vector<Element> w;
    for (const auto &r : rows) {
        if (local.insert(internal::pauli_bits(r.pauli))) w.push_back(r);
    }

    while (true) {
        auto ia = internal::outside_radical(w, a_mask);
        auto ic = internal::outside_radical(w, c_mask);
        if (!ia || !ic) break;
        Element u = w[*ia];
        if (internal::in_radical(u, w, c_mask)) {
            u = w[*ic];
            if (internal::in_radical(u, w, a_mask)) u = internal::sum(w[*ia], w[*ic]);
        }

        std::optional<std::size_t> j_a;
        std::optional<std::size_t> j_c;
        std::optional<std::size_t> j_both;
        for (std::size_t j = 0; j < w.size(); ++j) {
            bool fa = symplectic_product_on(u.pauli, w[j].pauli, a_mask);
            bool fc = symplectic_product_on(u.pauli, w[j].pauli, c_mask);
            if (fa && fc && !j_both) j_both = j;
            if (fa && !fc && !j_a) j_a = j;
            if (!fa && fc && !j_c) j_c = j;
        }
        Element v;
        if (j_both) {
            v = w[*j_both];
        } else if (j_a && j_c) {
            v = internal::sum(w[*j_a], w[*j_c]);
        } else {
            throw InvariantViolation("Bell pair search: no partner for an element outside both radicals");
        }

        std::vector<BitVector> functionals;
        for (const auto &e : w) {
            BitVector f(4);
            f.set(0, symplectic_product_on(e.pauli, u.pauli, a_mask));
            f.set(1, symplectic_product_on(e.pauli, v.pauli, a_mask));
            f.set(2, symplectic_product_on(e.pauli, u.pauli, c_mask));
            f.set(3, symplectic_product_on(e.pauli, v.pauli, c_mask));
            functionals.push_back(std::move(f));
        }
        std::vector<Element> next;
        for (const auto &coeffs : left_kernel(functionals)) {
            Element e{PauliString(n), BitVector(k)};
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (coeffs.get(j)) e ^= w[j];
            }
            next.push_back(std::move(e));
        }
        plan.pairs.push_back({u.pauli, v.pauli, u.coeffs, v.coeffs});
        w = std::move(next);
    }

    const BitVector b_mask = b.mask(n);
    for (const auto &pair : plan.pairs) {
        for (const auto *g : {&pair.first, &pair.second}) {
            PauliString part = g->masked(b_mask);
            if (!part.is_identity()) plan.observables.push_back(std::move(part));
        }
    }
    return plan;
}

/// First pair of plan observables that anticommute, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> incompatible_observables(const BellPairPlan &plan) {
    for (std::size_t i = 0; i < plan.observables.size(); ++i) {
        for (std::size_t j = i + 1; j < plan.observables.size(); ++j) {
            if (symplectic_product(plan.observables[i], plan.observables[j])) return std::pair{i, j};
        }
    }
    return std::nullopt;
}

struct DistillResult {
    StabilizerTableau post;
    std::size_t n_bell = 0;
};

/// Measures every B-part observable of the plan.
inline DistillResult distill(const StabilizerTableau &tab, const BellPairPlan &plan, Rng &rng) {
    if (auto bad = incompatible_observables(plan)) {
        throw InvariantViolation("plan observables " + std::to_string(bad->first) + " and " +
                                 std::to_string(bad->second) + " anticommute");
    }
    DistillResult out{tab, plan.n_bell()};
    for (const auto &g : plan.observables) out.post.measure(g, rng);
    return out;
}

/// Rank of the A-restricted symplectic form on the subgroup supported in A∪C.
/// It is even, and half of it counts independent Bell pairs between A and C.
inline std::size_t bell_witness_rank(const StabilizerTableau &tab, const Region &a, const Region &c) {
    const std::size_t n = tab.num_qubits();
    const std::size_t k = tab.num_rows();
    if (k == 0) return 0;
    std::vector<internal::Element> rows;
    for (std::size_t i = 0; i < k; ++i) rows.push_back({tab.row(i), BitVector(1)});
    BitVector outside = (a | c).complement(n).mask(n);
    auto ac = internal::supported_off(rows, outside);
    const BitVector a_mask = a.mask(n);
    std::vector<BitVector> gram;
    for (const auto &x : ac) {
        BitVector row(ac.size());
        for (std::size_t j = 0; j < ac.size(); ++j) row.set(j, symplectic_product_on(x.pauli, ac[j].pauli, a_mask));
        gram.push_back(std::move(row));
    }
    return gram.empty() ? 0 : gf2_rank(Gf2Matrix(std::move(gram)));
}

struct DistillationCertificate {
    std::size_t n_bell = 0;
    long long cmi_pre = 0;
    long long mi_ac_post = 0;
    std::size_t witness_rank = 0;
    bool mutual_information_ok = false;
    bool witness_ok = false;
    bool bound_ok = false;

    bool passed() const { return mutual_information_ok && witness_ok && bound_ok; }

    /// Name of the first failing clause, or empty.
    std::string failing_clause() const {
        if (!mutual_information_ok) return "mutual_information";
        if (!witness_ok) return "witness";
        if (!bound_ok) return "bound";
        return {};
    }
};

/// B is everything outside A and C.
inline DistillationCertificate verify_distillation(const StabilizerTableau &pre, const StabilizerTableau &post,
                                                   const Region &a, const Region &c, std::size_t n_bell) {
    const std::size_t n = pre.num_qubits();
    if (post.num_qubits() != n) throw std::invalid_argument("pre and post tableaus differ in size");
    Region b = (a | c).complement(n);
    DistillationCertificate cert;
    cert.n_bell = n_bell;
    cert.cmi_pre = pre.cmi(a, b, c);
    cert.mi_ac_post = post.mutual_information(a, c);
    cert.witness_rank = bell_witness_rank(post, a, c);
    const auto twice = static_cast<long long>(2 * n_bell);
    cert.mutual_information_ok = cert.mi_ac_post >= twice;
    cert.witness_ok = cert.witness_rank >= 2 * n_bell;
    cert.bound_ok = twice <= cert.cmi_pre;
    return cert;
}

/// One distillation attempt on a circuit state.
struct BellTrial {
    std::uint64_t index = 0;
    std::size_t rows = 0;
    DistillationCertificate certificate;
};

/// Realization `index` of cfg after t layers, split as A = [0, x_left(x)),
/// B = [x_left(x), x_right(x)), C = the rest. Measurement outcomes come from
/// their own stream.
inline BellTrial run_bell_trial(const CircuitConfig &cfg, std::size_t t, std::size_t x, std::uint64_t index) {
    const std::size_t n = cfg.num_qubits();
    if (x < 1 || 2 * x >= cfg.n_blocks) throw std::invalid_argument("x outside [1, n_blocks/2)");
    auto tab = evolve_state(cfg, index, t);
    Region a = Region::interval(0, cfg.x_left(x));
    Region b = Region::interval(cfg.x_left(x), cfg.x_right(x));
    Region c = Region::interval(cfg.x_right(x), n);
    auto plan = find_bell_candidates(tab, a, b, c);
    Rng rng = make_rng(cfg.seed, index, static_cast<std::uint64_t>(Stream::kMeasurements));
    auto result = distill(tab, plan, rng);
    return {index, tab.num_rows(), verify_distillation(tab, result.post, a, c, result.n_bell)};
}

}  // namespace cmispread
