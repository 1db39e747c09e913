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

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmispread/pauli.hpp"
#include "cmispread/region.hpp"
#include "cmispread/rng.hpp"
#include "cmispread/tableau.hpp"

namespace cmispread {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxDenseQubits = 10;

namespace internal {

/// Bit j of the result is bit qubits[j] of `index`.
inline std::size_t gather_bits(std::size_t index, const std::vector<std::size_t> &qubits) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) out |= ((index >> qubits[j]) & 1u) << j;
    return out;
}

/// M -> (U on `qubits`) M, where bit j of U's index is qubits[j].
inline ComplexMatrix apply_left(const ComplexMatrix &m, const ComplexMatrix &u, const std::vector<std::size_t> &qubits) {
    const std::size_t dim = static_cast<std::size_t>(m.rows());
    const std::size_t local = std::size_t{1} << qubits.size();
    std::size_t mask = 0;
    for (auto q : qubits) mask |= std::size_t{1} << q;
    std::vector<std::size_t> offsets(local);
    for (std::size_t s = 0; s < local; ++s) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < qubits.size(); ++j) off |= ((s >> j) & 1u) << qubits[j];
        offsets[s] = off;
    }
    ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & mask) continue;
        for (std::size_t r = 0; r < local; ++r) {
            for (std::size_t s = 0; s < local; ++s) {
                Complex coeff = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
                if (coeff == Complex(0)) continue;
                out.row(static_cast<Eigen::Index>(base | offsets[r])) +=
                    coeff * m.row(static_cast<Eigen::Index>(base | offsets[s]));
            }
        }
    }
    return out;
}

}  // namespace internal

/// n-qubit density matrix; qubit i is bit i of the basis index.
class DensityMatrix {
  public:
    DensityMatrix() = default;

    DensityMatrix(std::size_t n, ComplexMatrix rho) : n_(n), rho_(std::move(rho)) {
        require_size(n_);
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_);
        if (rho_.rows() != dim || rho_.cols() != dim) throw std::invalid_argument("density matrix has the wrong shape");
    }

    /// |0...0><0...0|.
    static DensityMatrix zero_state(std::size_t n) {
        require_size(n);
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
        rho(0, 0) = 1;
        return DensityMatrix(n, std::move(rho));
    }

    static DensityMatrix maximally_mixed(std::size_t n) {
        require_size(n);
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        return DensityMatrix(n, ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    /// rho = 2^-n prod_g (I + P_g), every generator taken with sign +1.
    static DensityMatrix from_tableau(const StabilizerTableau &tab) {
        const std::size_t n = tab.num_qubits();
        require_size(n);
        const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
        ComplexMatrix rho = ComplexMatrix::Identity(dim, dim);
        for (const auto &g : tab.rows()) rho += apply_pauli_left(rho, g);
        rho /= static_cast<double>(dim);
        return DensityMatrix(n, std::move(rho));
    }

    /// P M for a phaseless Pauli P (Y = iXZ on each qubit).
    static ComplexMatrix apply_pauli_left(const ComplexMatrix &m, const PauliString &p) {
        std::size_t xmask = 0;
        std::size_t zmask = 0;
        std::size_t ys = 0;
        for (std::size_t q = 0; q < p.num_qubits(); ++q) {
            if (p.x(q)) xmask |= std::size_t{1} << q;
            if (p.z(q)) zmask |= std::size_t{1} << q;
            if (p.x(q) && p.z(q)) ++ys;
        }
        static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const Complex global = kIPow[ys % 4];
        ComplexMatrix out(m.rows(), m.cols());
        for (std::size_t j = 0; j < static_cast<std::size_t>(m.rows()); ++j) {
            double sign = (std::popcount(j & zmask) & 1) ? -1.0 : 1.0;
            out.row(static_cast<Eigen::Index>(j ^ xmask)) = (global * sign) * m.row(static_cast<Eigen::Index>(j));
        }
        return out;
    }

    static ComplexMatrix hadamard_matrix() {
        ComplexMatrix h(2, 2);
        const double s = 1 / std::sqrt(2.0);
        h << s, s, s, -s;
        return h;
    }

    static ComplexMatrix phase_matrix() {
        ComplexMatrix s = ComplexMatrix::Zero(2, 2);
        s(0, 0) = 1;
        s(1, 1) = Complex(0, 1);
        return s;
    }

    /// Control is local bit 0, target local bit 1.
    static ComplexMatrix cnot_matrix() {
        ComplexMatrix c = ComplexMatrix::Zero(4, 4);
        c(0, 0) = 1;
        c(3, 1) = 1;
        c(2, 2) = 1;
        c(1, 3) = 1;
        return c;
    }

    std::size_t num_qubits() const { return n_; }
    const ComplexMatrix &matrix() const { return rho_; }

    /// rho -> U rho U^dagger with U acting on `qubits` (bit j of U is qubits[j]).
    void apply_unitary(const ComplexMatrix &u, const std::vector<std::size_t> &qubits) {
        const auto local = static_cast<Eigen::Index>(std::size_t{1} << qubits.size());
        if (u.rows() != local || u.cols() != local) throw std::invalid_argument("unitary does not match qubit count");
        for (std::size_t j = 0; j < qubits.size(); ++j) {
            require_qubit(qubits[j]);
            for (std::size_t i = 0; i < j; ++i) {
                if (qubits[i] == qubits[j]) throw std::invalid_argument("repeated qubit in unitary support");
            }
        }
        ComplexMatrix left = internal::apply_left(rho_, u, qubits);
        rho_ = internal::apply_left(left.adjoint(), u, qubits);
    }

    void apply_h(std::size_t q) { apply_unitary(hadamard_matrix(), {q}); }
    void apply_s(std::size_t q) { apply_unitary(phase_matrix(), {q}); }
    void apply_cnot(std::size_t control, std::size_t target) { apply_unitary(cnot_matrix(), {control, target}); }

    /// rho -> (1-p) rho + p Tr_q(rho) (x) I/2.
    void depolarize(std::size_t q, double p) {
        require_qubit(q);
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("depolarizing probability outside [0, 1]");
        if (p == 0) return;
        ComplexMatrix twirled = rho_;
        for (char letter : {'X', 'Y', 'Z'}) {
            PauliString s = PauliString::single(n_, q, letter);
            twirled += apply_pauli_left(apply_pauli_left(rho_, s).adjoint(), s).adjoint();
        }
        rho_ = (1 - p) * rho_ + (p / 4) * twirled;
    }

    /// Fully depolarizes q with probability p, otherwise leaves rho alone.
    /// Returns whether the event happened.
    bool herald_depolarize(std::size_t q, double p, Rng &rng) {
        require_qubit(q);
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("depolarizing probability outside [0, 1]");
        bool hit = bernoulli(rng, p);
        if (hit) depolarize(q, 1);
        return hit;
    }

    /// Reduced state on `keep`; qubit keep[j] (ascending) becomes qubit j.
    DensityMatrix partial_trace(const Region &keep) const {
        keep.require_within(n_);
        const std::vector<std::size_t> &kept = keep.qubits();
        std::vector<std::size_t> traced;
        for (std::size_t q = 0, j = 0; q < n_; ++q) {
            if (j < kept.size() && kept[j] == q) {
                ++j;
            } else {
                traced.push_back(q);
            }
        }
        const std::size_t dk = std::size_t{1} << kept.size();
        const std::size_t dt = std::size_t{1} << traced.size();
        auto scatter = [](std::size_t bits, const std::vector<std::size_t> &qs) {
            std::size_t out = 0;
            for (std::size_t j = 0; j < qs.size(); ++j) out |= ((bits >> j) & 1u) << qs[j];
            return out;
        };
        std::vector<std::size_t> kept_index(dk), traced_index(dt);
        for (std::size_t s = 0; s < dk; ++s) kept_index[s] = scatter(s, kept);
        for (std::size_t s = 0; s < dt; ++s) traced_index[s] = scatter(s, traced);
        ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
        for (std::size_t r = 0; r < dk; ++r) {
            for (std::size_t c = 0; c < dk; ++c) {
                Complex acc = 0;
                for (std::size_t e = 0; e < dt; ++e) {
                    acc += rho_(static_cast<Eigen::Index>(kept_index[r] | traced_index[e]),
                                static_cast<Eigen::Index>(kept_index[c] | traced_index[e]));
                }
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
            }
        }
        return DensityMatrix(kept.size(), std::move(out));
    }

    /// Eigenvalues of the Hermitian part, ascending.
    Eigen::VectorXd spectrum() const {
        ComplexMatrix h = (rho_ + rho_.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }

    /// Description of the first violated density-matrix property, if any.
    std::optional<std::string> find_violation(double tol = 1e-12, double psd_tol = 1e-9) const {
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return "not Hermitian";
        if (std::abs(rho_.trace() - Complex(1)) > tol) return "trace is not 1";
        if (spectrum().minCoeff() < -psd_tol) return "not positive semidefinite";
        return std::nullopt;
    }

  private:
    static void require_size(std::size_t n) {
        if (n > kMaxDenseQubits) {
            throw std::invalid_argument("dense simulation is limited to " + std::to_string(kMaxDenseQubits) + " qubits");
        }
    }

    void require_qubit(std::size_t q) const {
        if (q >= n_) throw std::out_of_range("qubit index " + std::to_string(q) + " out of range");
    }

    std::size_t n_ = 0;
    ComplexMatrix rho_;
};

namespace internal {

inline Eigen::VectorXd checked_spectrum(const DensityMatrix &rho) {
    Eigen::VectorXd ev = rho.spectrum();
    if (ev.size() && ev.minCoeff() < -1e-9) throw std::domain_error("density matrix is not positive semidefinite");
    return ev;
}

}  // namespace internal

/// Von Neumann entropy of the region in bits, with 0 log 0 = 0.
inline double von_neumann_entropy(const DensityMatrix &rho, const Region &region) {
    if (region.empty()) return 0;
    double s = 0;
    for (double lambda : internal::checked_spectrum(rho.partial_trace(region))) {
        if (lambda > 1e-15) s -= lambda * std::log2(lambda);
    }
    return s;
}

/// -log2 Tr(rho_X^2).
inline double renyi2_entropy(const DensityMatrix &rho, const Region &region) {
    if (region.empty()) return 0;
    DensityMatrix reduced = rho.partial_trace(region);
    internal::checked_spectrum(reduced);
    const ComplexMatrix &m = reduced.matrix();
    // Tr(M^2) for Hermitian M is the squared Frobenius norm.
    return -std::log2(m.squaredNorm());
}

inline double von_neumann_cmi(const DensityMatrix &rho, const Region &a, const Region &b, const Region &c) {
    require_disjoint(a, b);
    require_disjoint(b, c);
    require_disjoint(a, c);
    return von_neumann_entropy(rho, a | b) + von_neumann_entropy(rho, b | c) - von_neumann_entropy(rho, b) -
           von_neumann_entropy(rho, a | b | c);
}

inline double renyi2_cmi(const DensityMatrix &rho, const Region &a, const Region &b, const Region &c) {
    require_disjoint(a, b);
    require_disjoint(b, c);
    require_disjoint(a, c);
    return renyi2_entropy(rho, a | b) + renyi2_entropy(rho, b | c) - renyi2_entropy(rho, b) -
           renyi2_entropy(rho, a | b | c);
}

/// Haar-random unitary: QR of a complex Ginibre matrix, with the phases of
/// R's diagonal moved into Q.
inline ComplexMatrix haar_unitary(std::size_t dim, Rng &rng) {
    if (dim < 2) throw std::invalid_argument("Haar unitary needs dim >= 2");
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix g(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            double re = normal(rng);
            double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j) {
        Complex diag = r(j, j);
        double mag = std::abs(diag);
        q.col(j) *= mag > 0 ? diag / mag : Complex(1);
    }
    return q;
}

enum class ToyChannel { kDepolarizing, kHeralded };

inline const char *to_string(ToyChannel c) { return c == ToyChannel::kDepolarizing ? "depolarizing" : "heralded"; }

/// Four qubits from |0000>: Haar gates on (0,1) and (2,3), then on (1,2), then
/// the channel on qubits 1 and 2. Returns the Renyi-2 I(0:3|1,2). Gates are
/// drawn before any channel randomness, so both channels see the same gates
/// for the same rng state.
inline double toy_four_qudit(double p, ToyChannel channel, Rng &rng) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("channel probability outside [0, 1]");
    auto rho = DensityMatrix::zero_state(4);
    ComplexMatrix u01 = haar_unitary(4, rng);
    ComplexMatrix u23 = haar_unitary(4, rng);
    ComplexMatrix u12 = haar_unitary(4, rng);
    rho.apply_unitary(u01, {0, 1});
    rho.apply_unitary(u23, {2, 3});
    rho.apply_unitary(u12, {1, 2});
    for (std::size_t q : {1, 2}) {
        if (channel == ToyChannel::kDepolarizing) {
            rho.depolarize(q, p);
        } else {
            rho.herald_depolarize(q, p, rng);
        }
    }
    return renyi2_cmi(rho, Region{0}, Region{1, 2}, Region{3});
}

struct ToyPoint {
    double p = 0;
    ToyChannel channel = ToyChannel::kDepolarizing;
    std::size_t seed_count = 0;
    double mean_cmi2 = 0;
    double stderr_ = 0;
};

/// Mean Renyi-2 CMI of the toy circuit per (p, channel). Seed i draws from
/// make_rng(root, i), so both channels see the same gates at every p.
inline std::vector<ToyPoint> toy_sweep(const std::vector<double> &p_grid, std::size_t seeds, std::uint64_t root) {
    if (seeds == 0) throw std::invalid_argument("toy sweep needs at least one seed");
    std::vector<ToyPoint> out;
    for (double p : p_grid) {
        for (ToyChannel channel : {ToyChannel::kDepolarizing, ToyChannel::kHeralded}) {
            double sum = 0;
            double sum_sq = 0;
            for (std::size_t i = 0; i < seeds; ++i) {
                Rng rng = make_rng(root, i);
                double v = toy_four_qudit(p, channel, rng);
                sum += v;
                sum_sq += v * v;
            }
            const auto count = static_cast<double>(seeds);
            double mean = sum / count;
            double var = seeds > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1)) : 0.0;
            out.push_back({p, channel, seeds, mean, std::sqrt(var / count)});
        }
    }
    return out;
}

/// {0, 0.1, ..., 1.0}.
inline std::vector<double> default_toy_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    return grid;
}

}  // namespace cmispread
