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

#include "cmispread/bell.hpp"

#include <gtest/gtest.h>

#include "cmispread/circuits.hpp"
#include "random_states.hpp"

using namespace cmispread;

namespace {

bool anticommute_on(const PauliString &p, const PauliString &q, const Region &r) {
    return symplectic_product(p.restricted(r), q.restricted(r));
}

PauliString from_coeffs(const StabilizerTableau &tab, const BitVector &coeffs) {
    PauliString out(tab.num_qubits());
    for (std::size_t i = 0; i < tab.num_rows(); ++i) {
        if (coeffs.get(i)) out *= tab.row(i);
    }
    return out;
}

/// Checks every structural property of a plan against its tableau.
void expect_valid_plan(const StabilizerTableau &tab, const BellPairPlan &plan, const Region &a, const Region &b,
                       const Region &c) {
    for (std::size_t i = 0; i < plan.pairs.size(); ++i) {
        const auto &p = plan.pairs[i];
        EXPECT_EQ(from_coeffs(tab, p.first_coeffs), p.first);
        EXPECT_EQ(from_coeffs(tab, p.second_coeffs), p.second);
        EXPECT_TRUE(anticommute_on(p.first, p.second, a));
        EXPECT_TRUE(anticommute_on(p.first, p.second, c));
        EXPECT_FALSE(anticommute_on(p.first, p.second, b));
        for (std::size_t j = i + 1; j < plan.pairs.size(); ++j) {
            for (const auto *g : {&p.first, &p.second}) {
                for (const auto *h : {&plan.pairs[j].first, &plan.pairs[j].second}) {
                    EXPECT_FALSE(anticommute_on(*g, *h, a));
                    EXPECT_FALSE(anticommute_on(*g, *h, c));
                }
            }
        }
    }
    EXPECT_FALSE(incompatible_observables(plan).has_value());
    BitVector outside_b = b.complement(tab.num_qubits()).mask(tab.num_qubits());
    for (const auto &g : plan.observables) {
        EXPECT_FALSE(g.xs().intersects(outside_b) || g.zs().intersects(outside_b));
    }
}

}  // namespace

TEST(find_bell_candidates, worked_example) {
    auto tab = StabilizerTableau::from_strings({"XXIX", "ZIXZ"});
    Region a{0}, b{1, 2}, c{3};
    auto plan = find_bell_candidates(tab, a, b, c);
    ASSERT_EQ(plan.n_bell(), 1u);
    expect_valid_plan(tab, plan, a, b, c);
    // Both rows are needed, and only these two elements pair up.
    const auto &p = plan.pairs[0];
    EXPECT_TRUE((p.first == tab.row(0) && p.second == tab.row(1)) || (p.first == tab.row(1) && p.second == tab.row(0)));
    ASSERT_EQ(plan.observables.size(), 2u);
}

TEST(find_bell_candidates, product_state_is_empty) {
    auto tab = StabilizerTableau::from_product_state(6);
    auto plan = find_bell_candidates(tab, Region{0, 1}, Region{2, 3}, Region{4, 5});
    EXPECT_TRUE(plan.empty());
    EXPECT_TRUE(plan.observables.empty());
}

TEST(find_bell_candidates, ghz3_has_no_pair) {
    auto tab = StabilizerTableau::from_strings({"XXX", "ZZI", "IZZ"});
    Region a{0}, b{1}, c{2};
    EXPECT_EQ(tab.cmi(a, b, c), 1);
    EXPECT_TRUE(find_bell_candidates(tab, a, b, c).empty());
}

TEST(find_bell_candidates, empty_tableau) {
    StabilizerTableau tab(3);
    EXPECT_TRUE(find_bell_candidates(tab, Region{0}, Region{1}, Region{2}).empty());
}

TEST(find_bell_candidates, rejects_bad_regions) {
    auto tab = StabilizerTableau::from_product_state(4);
    EXPECT_THROW(find_bell_candidates(tab, Region{0}, Region{1}, Region{2}), std::invalid_argument);
    EXPECT_THROW(find_bell_candidates(tab, Region{0, 1}, Region{1, 2}, Region{3}), std::invalid_argument);
}

TEST(find_bell_candidates, swapping_pair_is_excluded) {
    // A-B1 and B2-C Bell pairs. A Bell measurement on B1 B2 would entangle A
    // with C even though I(A:C|B) = 0, so elements from S_AB + S_BC must not be
    // offered as candidates.
    auto tab = StabilizerTableau::from_strings({"XXII", "ZZII", "IIXX", "IIZZ"});
    Region a{0}, b{1, 2}, c{3};
    EXPECT_EQ(tab.cmi(a, b, c), 0);
    EXPECT_TRUE(find_bell_candidates(tab, a, b, c).empty());

    auto g1 = PauliString::from_string("XXXX");
    auto g2 = PauliString::from_string("ZZZZ");
    ASSERT_TRUE(tab.contains(g1) && tab.contains(g2));
    BellPairPlan swap;
    swap.pairs.push_back({g1, g2, BitVector(4), BitVector(4)});
    swap.observables = {PauliString::from_string("IXXI"), PauliString::from_string("IZZI")};
    Rng rng(1);
    auto res = distill(tab, swap, rng);
    auto cert = verify_distillation(tab, res.post, a, c, res.n_bell);
    EXPECT_TRUE(cert.mutual_information_ok);
    EXPECT_FALSE(cert.bound_ok);
    EXPECT_EQ(cert.failing_clause(), "bound");
}

TEST(find_bell_candidates, two_bell_pairs_across_b) {
    // Two A-C Bell pairs routed through nothing, plus junk on B.
    auto tab = StabilizerTableau::from_strings({"XIIIX", "ZIIIZ", "IXIXI", "IZIZI", "IIZII"});
    Region a{0, 1}, b{2}, c{3, 4};
    EXPECT_EQ(tab.cmi(a, b, c), 4);
    auto plan = find_bell_candidates(tab, a, b, c);
    EXPECT_EQ(plan.n_bell(), 2u);
    expect_valid_plan(tab, plan, a, b, c);
    EXPECT_TRUE(plan.observables.empty());
}

TEST(distill, worked_example) {
    auto tab = StabilizerTableau::from_strings({"XXIX", "ZIXZ"});
    Region a{0}, b{1, 2}, c{3};
    auto plan = find_bell_candidates(tab, a, b, c);
    Rng rng(3);
    auto res = distill(tab, plan, rng);
    EXPECT_EQ(res.n_bell, 1u);
    EXPECT_TRUE(res.post.contains(PauliString::from_string("XIIX")));
    EXPECT_TRUE(res.post.contains(PauliString::from_string("ZIIZ")));
    auto cert = verify_distillation(tab, res.post, a, c, res.n_bell);
    EXPECT_TRUE(cert.passed());
    EXPECT_EQ(cert.mi_ac_post, 2);
    EXPECT_EQ(cert.cmi_pre, 2);
    EXPECT_EQ(cert.witness_rank, 2u);
}

TEST(distill, empty_plan_leaves_tableau) {
    auto tab = StabilizerTableau::from_strings({"XXX", "ZZI", "IZZ"});
    Rng rng(3);
    auto res = distill(tab, BellPairPlan{}, rng);
    EXPECT_EQ(res.post, tab);
    EXPECT_EQ(res.n_bell, 0u);
    EXPECT_TRUE(verify_distillation(tab, res.post, Region{0}, Region{2}, 0).passed());
}

TEST(distill, rejects_anticommuting_observables) {
    auto tab = StabilizerTableau::from_product_state(3);
    BellPairPlan plan;
    plan.observables = {PauliString::from_string("IXI"), PauliString::from_string("IZI")};
    Rng rng(3);
    EXPECT_THROW(distill(tab, plan, rng), InvariantViolation);
}

TEST(verify_distillation, names_failing_clause) {
    auto tab = StabilizerTableau::from_product_state(3);
    auto cert = verify_distillation(tab, tab, Region{0}, Region{2}, 1);
    EXPECT_FALSE(cert.passed());
    EXPECT_EQ(cert.failing_clause(), "mutual_information");
}

TEST(bell_random, certificates_hold_on_random_tableaus) {
    Rng rng(2026);
    std::size_t nonempty = 0;
    for (int trial = 0; trial < 1500; ++trial) {
        std::size_t n = 3 + rng() % 10;
        auto tab = trial % 2 ? cmispread::testing::random_global_tableau(n, 0.15, rng)
                             : cmispread::testing::random_local_tableau(n, 1 + rng() % 6, 0.05, rng);
        auto parts = cmispread::testing::random_tripartition(n, rng);
        const auto &a = parts[0];
        const auto &b = parts[1];
        const auto &c = parts[2];
        auto plan = find_bell_candidates(tab, a, b, c);
        expect_valid_plan(tab, plan, a, b, c);
        if (!plan.empty()) ++nonempty;
        auto res = distill(tab, plan, rng);
        res.post.check_invariants();
        auto cert = verify_distillation(tab, res.post, a, c, res.n_bell);
        ASSERT_TRUE(cert.passed()) << tab.to_text() << cert.failing_clause();
    }
    EXPECT_GT(nonempty, 100u);
}

TEST(bell_random, measurement_on_b_keeps_ac_subgroup) {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 4 + rng() % 7;
        auto tab = cmispread::testing::random_global_tableau(n, 0.1, rng);
        auto parts = cmispread::testing::random_tripartition(n, rng);
        auto plan = find_bell_candidates(tab, parts[0], parts[1], parts[2]);
        auto res = distill(tab, plan, rng);
        // Brute force over the group: every element supported on A and C survives.
        const std::size_t k = tab.num_rows();
        BitVector b_mask = parts[1].mask(n);
        for (std::size_t bits = 1; bits < (std::size_t{1} << k); ++bits) {
            PauliString g(n);
            for (std::size_t i = 0; i < k; ++i) {
                if (bits >> i & 1) g *= tab.row(i);
            }
            if (g.xs().intersects(b_mask) || g.zs().intersects(b_mask)) continue;
            EXPECT_TRUE(res.post.contains(g));
        }
        EXPECT_GE(bell_witness_rank(res.post, parts[0], parts[2]), bell_witness_rank(tab, parts[0], parts[2]));
    }
}

TEST(bell_random, near_critical_circuit_states) {
    CircuitConfig cfg;
    cfg.n_blocks = 16;
    cfg.m = 4;
    cfg.p = 1.0 / 32;
    cfg.t_max = 15;
    cfg.seed = 41;
    const std::size_t n = cfg.num_qubits();
    Region a = Region::interval(0, cfg.x_left(1));
    Region b = Region::interval(cfg.x_left(1), cfg.x_right(1));
    Region c = Region::interval(cfg.x_right(1), n);
    for (std::uint64_t i = 0; i < 40; ++i) {
        auto tab = evolve_state(cfg, i, 15);
        auto plan = find_bell_candidates(tab, a, b, c);
        expect_valid_plan(tab, plan, a, b, c);
        Rng rng = make_rng(cfg.seed, i, 7);
        auto res = distill(tab, plan, rng);
        auto cert = verify_distillation(tab, res.post, a, c, res.n_bell);
        EXPECT_TRUE(cert.passed()) << cert.failing_clause();
    }
}

TEST(run_bell_trial, matches_manual_pipeline) {
    CircuitConfig cfg;
    cfg.n_blocks = 8;
    cfg.m = 2;
    cfg.p = 0.05;
    cfg.seed = 3;
    for (std::uint64_t i = 0; i < 5; ++i) {
        auto trial = run_bell_trial(cfg, 6, 1, i);
        auto tab = evolve_state(cfg, i, 6);
        EXPECT_EQ(trial.rows, tab.num_rows());
        EXPECT_EQ(trial.certificate.cmi_pre,
                  tab.cmi(Region::interval(0, 6), Region::interval(6, 10), Region::interval(10, 16)));
        EXPECT_TRUE(trial.certificate.passed());
    }
    EXPECT_THROW(run_bell_trial(cfg, 6, 4, 0), std::invalid_argument);
}
