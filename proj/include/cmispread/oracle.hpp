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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cmispread/clipped.hpp"
#include "cmispread/dense.hpp"
#include "cmispread/rng.hpp"
#include "cmispread/tableau.hpp"

namespace cmispread {

/// Tallies from running the stabilizer engine and the dense simulator side by
/// side on random Clifford circuits with heralded depolarization.
struct OracleReport {
    std::size_t circuits = 0;
    std::size_t regions_checked = 0;
    std::size_t partitions_checked = 0;
    double max_entropy_error = 0;
    double max_renyi_error = 0;
    /// Rows g with |Tr(rho P_g)| != 1 in the dense state.
    std::size_t stabilizer_mismatches = 0;
    /// Endpoint-count MI/CMI differing from the rank-based value.
    std::size_t endpoint_mismatches = 0;
    std::size_t invalid_density_matrices = 0;

    bool passed(double tol = 1e-9) const {
        return circuits > 0 && max_entropy_error <= tol && max_renyi_error <= tol && stabilizer_mismatches == 0 &&
               endpoint_mismatches == 0 && invalid_density_matrices == 0;
    }

    void merge(const OracleReport &o) {
        circuits += o.circuits;
        regions_checked += o.regions_checked;
        partitions_checked += o.partitions_checked;
        max_entropy_error = std::max(max_entropy_error, o.max_entropy_error);
        max_renyi_error = std::max(max_renyi_error, o.max_renyi_error);
        stabilizer_mismatches += o.stabilizer_mismatches;
        endpoint_mismatches += o.endpoint_mismatches;
        invalid_density_matrices += o.invalid_density_matrices;
    }
};

/// Both representations after the same random H/S/CNOT sequence. Each step
/// depolarizes a random qubit with probability p.
struct PairedCircuit {
    StabilizerTableau tab;
    DensityMatrix rho;
};

/// Region sorts its qubits, so a CNOT with control > target needs the
/// Clifford with the roles of its two qubits swapped.
inline void apply_cnot(StabilizerTableau &tab, std::size_t control, std::size_t target) {
    if (control < target) {
        tab.apply_clifford(SymplecticMatrix::cnot(), Region{control, target});
        return;
    }
    const SymplecticMatrix c = SymplecticMatrix::cnot();
    std::vector<BitVector> images(4, BitVector(4));
    // Relabel local qubit 0 <-> 1 on both the inputs and the outputs.
    auto swap_bits = [](const BitVector &v) {
        BitVector w(4);
        w.set(0, v.get(2));
        w.set(1, v.get(3));
        w.set(2, v.get(0));
        w.set(3, v.get(1));
        return w;
    };
    for (std::size_t j = 0; j < 4; ++j) images[j ^ 2] = swap_bits(c.image(j));
    tab.apply_clifford(SymplecticMatrix(std::move(images)), Region{target, control});
}

inline PairedCircuit random_paired_circuit(std::size_t n, std::size_t steps, double p, Rng &rng) {
    PairedCircuit out{StabilizerTableau::from_product_state(n), DensityMatrix::zero_state(n)};
    for (std::size_t s = 0; s < steps; ++s) {
        std::size_t kind = rng() % 3;
        std::size_t q = rng() % n;
        if (kind == 0) {
            out.tab.apply_clifford(SymplecticMatrix::hadamard(), Region{q});
            out.rho.apply_h(q);
        } else if (kind == 1) {
            out.tab.apply_clifford(SymplecticMatrix::phase(), Region{q});
            out.rho.apply_s(q);
        } else if (n > 1) {
            std::size_t t = (q + 1 + rng() % (n - 1)) % n;
            apply_cnot(out.tab, q, t);
            out.rho.apply_cnot(q, t);
        }
        if (bernoulli(rng, p)) {
            std::size_t e = rng() % n;
            out.tab.depolarize_qubit(e);
            out.rho.depolarize(e, 1);
        }
    }
    return out;
}

/// Compares every region's entropy, every generator's expectation and every
/// contiguous MI/CMI.
inline OracleReport compare_with_dense(const PairedCircuit &c) {
    OracleReport r;
    r.circuits = 1;
    const std::size_t n = c.tab.num_qubits();
    if (c.rho.find_violation(1e-10)) ++r.invalid_density_matrices;
    for (const auto &g : c.tab.rows()) {
        Complex ev = DensityMatrix::apply_pauli_left(c.rho.matrix(), g).trace();
        if (std::abs(std::abs(ev) - 1) > 1e-9 || std::abs(ev.imag()) > 1e-9) ++r.stabilizer_mismatches;
    }
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
        std::vector<std::size_t> qs;
        for (std::size_t q = 0; q < n; ++q) {
            if (bits >> q & 1) qs.push_back(q);
        }
        Region region(qs);
        auto exact = static_cast<double>(c.tab.entropy(region));
        r.max_entropy_error = std::max(r.max_entropy_error, std::abs(von_neumann_entropy(c.rho, region) - exact));
        r.max_renyi_error = std::max(r.max_renyi_error, std::abs(renyi2_entropy(c.rho, region) - exact));
        ++r.regions_checked;
    }
    if (c.tab.num_rows() == 0 || n < 2) return r;
    ClippedTableau ct = clip(c.tab);
    for (std::size_t cut = 1; cut < n; ++cut) {
        if (mi_endpoints(ct, cut) != c.tab.mutual_information(Region::interval(0, cut), Region::interval(cut, n))) {
            ++r.endpoint_mismatches;
        }
        ++r.partitions_checked;
    }
    for (std::size_t xl = 1; xl < n; ++xl) {
        for (std::size_t xr = xl + 1; xr < n; ++xr) {
            long long ranked =
                c.tab.cmi(Region::interval(0, xl), Region::interval(xl, xr), Region::interval(xr, n));
            if (cmi_endpoints(ct, xl, xr) != ranked) ++r.endpoint_mismatches;
            ++r.partitions_checked;
        }
    }
    return r;
}

/// `circuits` random circuits on 2..max_qubits qubits; circuit i uses its own
/// stream under `seed`.
inline OracleReport run_oracle_check(std::size_t circuits, std::size_t max_qubits, double p, std::uint64_t seed) {
    if (max_qubits < 2 || max_qubits > kMaxDenseQubits) throw std::invalid_argument("max_qubits must be in [2, 10]");
    OracleReport total;
    for (std::size_t i = 0; i < circuits; ++i) {
        Rng rng = make_rng(seed, i);
        std::size_t n = 2 + rng() % (max_qubits - 1);
        total.merge(compare_with_dense(random_paired_circuit(n, 8 * n, p, rng)));
    }
    return total;
}

}  // namespace cmispread
