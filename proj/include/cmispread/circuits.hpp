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
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmispread/clipped.hpp"
#include "cmispread/format.hpp"
#include "cmispread/parallel.hpp"
#include "cmispread/region.hpp"
#include "cmispread/rng.hpp"
#include "cmispread/symplectic.hpp"
#include "cmispread/tableau.hpp"

namespace cmispread {

/// Random-number sub-streams of one realization.
enum class Stream : std::uint64_t { kGates = 0, kNoise = 1, kChecks = 2, kMeasurements = 3 };

/// Brickwork circuit of random 2m-qubit Cliffords on n_blocks blocks of m
/// qubits, with heralded depolarization after every layer.
struct CircuitConfig {
    std::size_t n_blocks = 2;
    std::size_t m = 1;
    double p = 0.0;
    std::size_t t_max = 1;
    /// Half-widths of the middle region B, in blocks.
    std::vector<std::size_t> x_values;
    std::size_t realizations = 1;
    std::uint64_t seed = 0;
    /// Skip the remaining layers once the state is maximally mixed; every
    /// later CMI is then zero.
    bool stop_when_mixed = false;
    /// Random (t, x) points per realization where the endpoint CMI is checked
    /// against the rank-based CMI.
    std::size_t spot_checks = 1;

    std::size_t num_qubits() const { return n_blocks * m; }

    /// x = 1, ..., n_blocks/2 - 1.
    static std::vector<std::size_t> full_x_grid(std::size_t n_blocks) {
        std::vector<std::size_t> xs;
        for (std::size_t x = 1; 2 * x < n_blocks; ++x) xs.push_back(x);
        return xs;
    }

    void validate() const {
        if (n_blocks < 2 || n_blocks % 2) throw std::invalid_argument("n_blocks must be even and at least 2");
        if (m < 1) throw std::invalid_argument("m must be at least 1");
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
        if (realizations < 1) throw std::invalid_argument("need at least one realization");
        for (std::size_t x : x_values) {
            if (x < 1 || 2 * x >= n_blocks) {
                throw std::invalid_argument("x = " + std::to_string(x) + " outside [1, n_blocks/2)");
            }
        }
    }

    /// Qubit boundaries of A = [0, x_left) and C = [x_right, n) for half-width x.
    std::size_t x_left(std::size_t x) const { return (n_blocks / 2 - x) * m; }
    std::size_t x_right(std::size_t x) const { return (n_blocks / 2 + x) * m; }
};

/// Spacetime record of heralded depolarization events: bit (t, q) is set when
/// qubit q was depolarized after layer t (0-based).
class ErrorConfiguration {
  public:
    ErrorConfiguration() = default;
    ErrorConfiguration(std::size_t num_layers, std::size_t num_qubits)
        : num_qubits_(num_qubits), layers_(num_layers, BitVector(num_qubits)) {}

    std::size_t num_layers() const { return layers_.size(); }
    std::size_t num_qubits() const { return num_qubits_; }
    const BitVector &layer(std::size_t t) const { return layers_.at(t); }
    bool get(std::size_t t, std::size_t q) const { return layers_.at(t).get(q); }

    void set_layer(std::size_t t, BitVector mask) {
        if (mask.size() != num_qubits_) throw std::invalid_argument("layer mask has the wrong length");
        layers_.at(t) = std::move(mask);
    }

    /// |r|: total number of events.
    std::size_t weight() const {
        std::size_t total = 0;
        for (const auto &l : layers_) total += l.popcount();
        return total;
    }

    /// Header "t=<layers> n=<qubits>", then per layer the alternating run
    /// lengths of zeros and ones, starting with a (possibly empty) zero run.
    std::string to_rle() const {
        std::ostringstream out;
        out << "t=" << layers_.size() << " n=" << num_qubits_ << "\n";
        for (const auto &l : layers_) {
            bool current = false;
            std::size_t run = 0;
            bool first = true;
            for (std::size_t q = 0; q < num_qubits_; ++q) {
                if (l.get(q) == current) {
                    ++run;
                    continue;
                }
                out << (first ? "" : " ") << run;
                first = false;
                current = !current;
                run = 1;
            }
            out << (first ? "" : " ") << run << "\n";
        }
        return out.str();
    }

    static ErrorConfiguration from_rle(std::istream &in) {
        std::string header;
        if (!std::getline(in, header)) throw std::invalid_argument("missing error configuration header");
        std::size_t t = 0, n = 0;
        if (std::sscanf(header.c_str(), "t=%zu n=%zu", &t, &n) != 2) {
            throw std::invalid_argument("malformed error configuration header: " + header);
        }
        ErrorConfiguration cfg(t, n);
        for (std::size_t layer = 0; layer < t; ++layer) {
            std::string line;
            if (!std::getline(in, line)) throw std::invalid_argument("error configuration ended early");
            std::istringstream runs(line);
            std::size_t run = 0, q = 0;
            bool value = false;
            while (runs >> run) {
                if (q + run > n) throw std::invalid_argument("run lengths exceed the qubit count");
                for (std::size_t i = 0; i < run; ++i) cfg.layers_[layer].set(q + i, value);
                q += run;
                value = !value;
            }
            if (q != n) throw std::invalid_argument("run lengths do not cover the layer");
        }
        return cfg;
    }

    static ErrorConfiguration from_rle(const std::string &text) {
        std::istringstream in(text);
        return from_rle(in);
    }

    bool operator==(const ErrorConfiguration &other) const = default;

  private:
    std::size_t num_qubits_ = 0;
    std::vector<BitVector> layers_;
};

/// Depolarizes every qubit set in `mask`, in ascending order.
inline void apply_error_layer(StabilizerTableau &tab, const BitVector &mask) {
    if (mask.size() != tab.num_qubits()) throw std::invalid_argument("error mask has the wrong length");
    for (std::size_t q = 0; q < tab.num_qubits(); ++q) {
        if (mask.get(q)) tab.depolarize_qubit(q);
    }
}

/// Depolarizes each qubit independently with probability p, in ascending
/// order. Returns the event mask.
inline BitVector heralded_layer(StabilizerTableau &tab, double p, Rng &rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
    const std::size_t n = tab.num_qubits();
    BitVector mask(n);
    for (std::size_t q = 0; q < n; ++q) {
        if (bernoulli(rng, p)) mask.set(q, true);
    }
    apply_error_layer(tab, mask);
    return mask;
}

/// One brickwork layer: even block pairs on even layers, odd pairs on odd
/// layers, open boundaries.
inline void apply_brickwork_layer(StabilizerTableau &tab, std::size_t layer, std::size_t n_blocks, std::size_t m,
                                  Rng &gate_rng) {
    for (std::size_t b = layer % 2; b + 1 < n_blocks; b += 2) {
        tab.apply_clifford(sample_random_clifford(2 * m, gate_rng), Region::interval(b * m, (b + 2) * m));
    }
}

/// Raw result of one circuit realization.
struct Realization {
    /// cmi[t - 1][i]: I(A:C|B) in bits after t layers at x = x_values[i].
    std::vector<std::vector<long long>> cmi;
    /// Number of generators after t layers.
    std::vector<std::size_t> rows;
    /// First t with no generators left.
    std::optional<std::size_t> mixed_at;
    ErrorConfiguration errors;
};

/// Runs realization `index` of cfg. With `replay`, the recorded events are
/// used instead of fresh noise; gates are drawn from the same stream either way.
inline Realization run_coarse_grained(const CircuitConfig &cfg, std::uint64_t index,
                                      const ErrorConfiguration *replay = nullptr) {
    cfg.validate();
    const std::size_t n = cfg.num_qubits();
    if (replay && (replay->num_layers() != cfg.t_max || replay->num_qubits() != n)) {
        throw std::invalid_argument("replayed error configuration does not match the circuit");
    }
    Rng gate_rng = make_rng(cfg.seed, index, static_cast<std::uint64_t>(Stream::kGates));
    Rng noise_rng = make_rng(cfg.seed, index, static_cast<std::uint64_t>(Stream::kNoise));
    Rng check_rng = make_rng(cfg.seed, index, static_cast<std::uint64_t>(Stream::kChecks));

    Realization out;
    out.errors = ErrorConfiguration(cfg.t_max, n);
    out.cmi.assign(cfg.t_max, std::vector<long long>(cfg.x_values.size(), 0));
    out.rows.assign(cfg.t_max, 0);

    // Spot checks are chosen up front so they do not depend on the run.
    std::vector<std::pair<std::size_t, std::size_t>> checks;
    if (!cfg.x_values.empty() && cfg.t_max > 0) {
        for (std::size_t i = 0; i < cfg.spot_checks; ++i) {
            checks.emplace_back(check_rng() % cfg.t_max, check_rng() % cfg.x_values.size());
        }
    }

    auto tab = StabilizerTableau::from_product_state(n);
    for (std::size_t layer = 0; layer < cfg.t_max; ++layer) {
        if (cfg.stop_when_mixed && out.mixed_at) break;
        apply_brickwork_layer(tab, layer, cfg.n_blocks, cfg.m, gate_rng);
        if (replay) {
            apply_error_layer(tab, replay->layer(layer));
            out.errors.set_layer(layer, replay->layer(layer));
        } else {
            out.errors.set_layer(layer, heralded_layer(tab, cfg.p, noise_rng));
        }
        out.rows[layer] = tab.num_rows();
        if (tab.num_rows() == 0 && !out.mixed_at) out.mixed_at = layer + 1;
        if (tab.num_rows() == 0) continue;

        ClippedTableau ct = clip(tab);
        for (std::size_t i = 0; i < cfg.x_values.size(); ++i) {
            std::size_t x = cfg.x_values[i];
            out.cmi[layer][i] = cmi_endpoints(ct, cfg.x_left(x), cfg.x_right(x));
        }
        for (const auto &[t, i] : checks) {
            if (t != layer) continue;
            std::size_t x = cfg.x_values[i];
            long long ranked = tab.cmi(Region::interval(0, cfg.x_left(x)), Region::interval(cfg.x_left(x), cfg.x_right(x)),
                                       Region::interval(cfg.x_right(x), n));
            if (ranked != out.cmi[layer][i]) {
                throw InvariantViolation("endpoint CMI " + std::to_string(out.cmi[layer][i]) + " != rank CMI " +
                                         std::to_string(ranked) + " at t=" + std::to_string(layer + 1) +
                                         " x=" + std::to_string(x));
            }
        }
    }
    return out;
}

/// The state of realization `index` after `t` layers, drawn from the same
/// streams as run_coarse_grained.
inline StabilizerTableau evolve_state(const CircuitConfig &cfg, std::uint64_t index, std::size_t t) {
    cfg.validate();
    Rng gate_rng = make_rng(cfg.seed, index, static_cast<std::uint64_t>(Stream::kGates));
    Rng noise_rng = make_rng(cfg.seed, index, static_cast<std::uint64_t>(Stream::kNoise));
    auto tab = StabilizerTableau::from_product_state(cfg.num_qubits());
    for (std::size_t layer = 0; layer < t; ++layer) {
        apply_brickwork_layer(tab, layer, cfg.n_blocks, cfg.m, gate_rng);
        heralded_layer(tab, cfg.p, noise_rng);
    }
    return tab;
}

/// Realization-averaged I(A:C|B)/m on the (t, x) grid.
struct SpreadingField {
    CircuitConfig config;
    std::size_t realizations = 0;
    /// Indexed [t - 1][i] like Realization::cmi.
    std::vector<std::vector<double>> mean;
    std::vector<std::vector<double>> stderr_;

    double mean_at(std::size_t t, std::size_t i) const { return mean.at(t - 1).at(i); }
    double stderr_at(std::size_t t, std::size_t i) const { return stderr_.at(t - 1).at(i); }
};

/// Runs every realization of cfg; slot i holds realization i.
inline std::vector<Realization> run_ensemble(const CircuitConfig &cfg, std::size_t threads = 1) {
    cfg.validate();
    std::vector<Realization> runs(cfg.realizations);
    parallel_for(cfg.realizations, threads, [&](std::size_t i) { runs[i] = run_coarse_grained(cfg, i); });
    return runs;
}

/// Mean and standard error over realizations. Sums are exact integers, so the
/// result does not depend on how the runs were scheduled.
inline SpreadingField average(const CircuitConfig &cfg, const std::vector<Realization> &runs) {
    if (runs.empty()) throw std::invalid_argument("nothing to average");
    SpreadingField field;
    field.config = cfg;
    field.realizations = runs.size();
    const std::size_t nx = cfg.x_values.size();
    const long long r = static_cast<long long>(runs.size());
    const double m = static_cast<double>(cfg.m);
    field.mean.assign(cfg.t_max, std::vector<double>(nx, 0.0));
    field.stderr_.assign(cfg.t_max, std::vector<double>(nx, 0.0));
    for (std::size_t t = 0; t < cfg.t_max; ++t) {
        for (std::size_t i = 0; i < nx; ++i) {
            long long sum = 0, sum_sq = 0;
            for (const auto &run : runs) {
                long long v = run.cmi[t][i];
                sum += v;
                sum_sq += v * v;
            }
            field.mean[t][i] = static_cast<double>(sum) / static_cast<double>(r) / m;
            if (r > 1) {
                double var = static_cast<double>(r * sum_sq - sum * sum) / static_cast<double>(r * (r - 1));
                field.stderr_[t][i] = std::sqrt(var / static_cast<double>(r)) / m;
            }
        }
    }
    return field;
}

inline SpreadingField average_realizations(const CircuitConfig &cfg, std::size_t threads = 1) {
    return average(cfg, run_ensemble(cfg, threads));
}

inline void write_spreading_csv(std::ostream &out, const SpreadingField &field) {
    const auto &cfg = field.config;
    out << "t,x,p,m,n_blocks,realizations,mean_cmi_norm,stderr\n";
    for (std::size_t t = 1; t <= cfg.t_max; ++t) {
        for (std::size_t i = 0; i < cfg.x_values.size(); ++i) {
            out << t << "," << cfg.x_values[i] << "," << format_double(cfg.p) << "," << cfg.m << "," << cfg.n_blocks
                << "," << field.realizations << "," << format_double(field.mean_at(t, i)) << ","
                << format_double(field.stderr_at(t, i)) << "\n";
        }
    }
}

/// Mutual informations of the four-block example, in bits.
struct FourBlockRecord {
    long long i_ab = 0;
    long long i_bc = 0;
    long long i_a_bc = 0;
    long long cmi = 0;
};

/// Blocks A, B1, B2, C of m qubits each. U1 scrambles A B1, U2 scrambles B2 C,
/// U3 scrambles B = B1 B2, then the last floor(2mp) qubits of B are erased.
inline FourBlockRecord four_block_experiment(std::size_t m, double p, Rng &rng) {
    if (m < 1) throw std::invalid_argument("m must be at least 1");
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");
    const std::size_t n = 4 * m;
    auto tab = StabilizerTableau::from_product_state(n);
    tab.apply_clifford(sample_random_clifford(2 * m, rng), Region::interval(0, 2 * m));
    tab.apply_clifford(sample_random_clifford(2 * m, rng), Region::interval(2 * m, 4 * m));
    tab.apply_clifford(sample_random_clifford(2 * m, rng), Region::interval(m, 3 * m));
    const auto erased = static_cast<std::size_t>(std::floor(2.0 * static_cast<double>(m) * p));
    for (std::size_t q = 3 * m - erased; q < 3 * m; ++q) tab.depolarize_qubit(q);

    Region a = Region::interval(0, m);
    Region b = Region::interval(m, 3 * m);
    Region c = Region::interval(3 * m, n);
    FourBlockRecord rec;
    rec.i_ab = tab.mutual_information(a, b);
    rec.i_bc = tab.mutual_information(b, c);
    rec.i_a_bc = tab.mutual_information(a, b | c);
    rec.cmi = tab.cmi(a, b, c);
    return rec;
}

/// Seed i draws from make_rng(root, i).
inline std::vector<FourBlockRecord> four_block_ensemble(std::size_t m, double p, std::size_t seeds, std::uint64_t root,
                                                        std::size_t threads = 1) {
    std::vector<FourBlockRecord> out(seeds);
    parallel_for(seeds, threads, [&](std::size_t i) {
        Rng rng = make_rng(root, i);
        out[i] = four_block_experiment(m, p, rng);
    });
    return out;
}

}  // namespace cmispread
