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

#include "cmispread/analytics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace cmispread;

namespace {

DecayProfile make_profile(double x_max, double step, double (*f)(double)) {
    DecayProfile profile;
    for (double x = 0; x <= x_max + 1e-12; x += step) {
        profile.x.push_back(x);
        profile.values.push_back(f(x));
    }
    profile.n_blocks = static_cast<std::size_t>(2 * x_max);
    return profile;
}

double line(double x) { return std::max(10.0 - 2.0 * x, 0.0); }

// Linear decay to x = 5, then an exponential tail starting at 0.5.
double line_plus_tail(double x) { return x < 5.0 ? 10.0 - 2.0 * x : 0.5 * std::pow(2.0, -(x - 5.0)); }

// Independent least-squares intercept over the points with lo*y0 <= y <= hi*y0.
double reference_intercept(const DecayProfile &p, double lo, double hi) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        double y = p.values[i];
        if (y < lo * p.values[0] || y > hi * p.values[0]) continue;
        n += 1;
        sx += p.x[i];
        sy += y;
        sxx += p.x[i] * p.x[i];
        sxy += p.x[i] * y;
    }
    double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double a = (sy - b * sx) / n;
    return -a / b;
}

}  // namespace

TEST(analytic_cmi_norm, examples) {
    ASSERT_DOUBLE_EQ(analytic_cmi_norm(10, 5, 0), 10.0);
    ASSERT_NEAR(analytic_cmi_norm(100, 0, 1.5 / 512), 141.40625, 1e-9);
    ASSERT_EQ(analytic_cmi_norm(40, 3, 1.0 / 64), 0.0);
    ASSERT_EQ(analytic_cmi_norm(10, 12, 0), 0.0);
    ASSERT_THROW(analytic_cmi_norm(1, 1, 0.5), std::invalid_argument);
    ASSERT_THROW(analytic_cmi_norm(-1, 1, 0.1), std::invalid_argument);
}

TEST(analytic_cmi_norm, continuous_below_critical_time) {
    const double p = 1.0 / 64;
    for (double t = 0; t < 31.9; t += 0.37) {
        for (double x = 0; x < 60; x += 0.41) {
            ASSERT_NEAR(analytic_cmi_norm(t + 1e-7, x, p), analytic_cmi_norm(t, x, p), 1e-5);
            ASSERT_NEAR(analytic_cmi_norm(t, x + 1e-7, p), analytic_cmi_norm(t, x, p), 1e-5);
        }
    }
}

TEST(analytic_xdec, examples) {
    ASSERT_DOUBLE_EQ(analytic_xdec(7, 0), 7.0);
    ASSERT_NEAR(analytic_xdec(49, 0.01), 1249.5, 1e-9);
    ASSERT_THROW(analytic_xdec(50, 0.01), std::domain_error);
    ASSERT_THROW(analytic_xdec(60, 0.01), std::domain_error);
}

TEST(analytic_xdec, diverges_monotonically) {
    const double p = 0.01;
    double previous = -1;
    for (double t = 0; t < 50; t += 0.25) {
        double v = analytic_xdec(t, p);
        ASSERT_GT(v, previous);
        previous = v;
    }
    ASSERT_GT(analytic_xdec(50 - 1e-9, p), 1e9);
}

TEST(analytic_xdec, is_the_zero_of_the_profile) {
    for (double p : {0.0, 0.01, 1.0 / 64, 0.1}) {
        double tc = p > 0 ? 1 / (2 * p) : 100;
        for (double t = 0.5; t < tc; t += tc / 17) {
            double xd = analytic_xdec(t, p);
            ASSERT_NEAR(analytic_cmi_norm(t, xd, p), 0.0, 1e-9);
            ASSERT_GT(analytic_cmi_norm(t, xd * 0.999, p), 0.0);
            ASSERT_GT(analytic_cmi_norm(t, 0, p), 0.0);
        }
    }
}

TEST(rescale, examples) {
    ASSERT_EQ(analytic_xdec_rescaled(0), 0.0);
    ASSERT_DOUBLE_EQ(analytic_xdec_rescaled(0.5), 0.75);
    ASSERT_THROW(analytic_xdec_rescaled(1.0), std::domain_error);
    ASSERT_THROW(analytic_rescaled(1.2, 0), std::domain_error);
    ASSERT_THROW(rescale(1, 1, 1, 0), std::invalid_argument);
}

TEST(rescale, analytic_forms_are_rate_independent) {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        double tt = 0.999 * uniform01(rng);
        double xt = 2.0 * uniform01(rng);
        double p = 0.001 + 0.4 * uniform01(rng);
        Unscaled u = unrescale({tt, xt, 0}, p);
        Rescaled r = rescale(u.t, u.x, analytic_cmi_norm(u.t, u.x, p), p);
        ASSERT_NEAR(r.i_tilde, analytic_rescaled(tt, xt), 1e-12);
        ASSERT_NEAR(2 * p * analytic_xdec(u.t, p), analytic_xdec_rescaled(tt), 1e-12 * (1 + analytic_xdec_rescaled(tt)));
    }
}

TEST(rescale, round_trip) {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        double p = 0.001 + 0.4 * uniform01(rng);
        double t = 100 * uniform01(rng), x = 50 * uniform01(rng), i = 30 * uniform01(rng);
        Unscaled back = unrescale(rescale(t, x, i, p), p);
        ASSERT_NEAR(back.t, t, 1e-12 * t + 1e-15);
        ASSERT_NEAR(back.x, x, 1e-12 * x + 1e-15);
        ASSERT_NEAR(back.i_norm, i, 1e-12 * i + 1e-15);
    }
}

TEST(rescale, curves_for_two_rates_coincide) {
    for (double tt = 0; tt < 0.99; tt += 0.01) {
        for (double xt = 0; xt < 2; xt += 0.05) {
            double a = rescale(tt / (2 * 0.01), xt / (2 * 0.01), analytic_cmi_norm(tt / 0.02, xt / 0.02, 0.01), 0.01).i_tilde;
            double b = rescale(tt / (2 * 0.2), xt / (2 * 0.2), analytic_cmi_norm(tt / 0.4, xt / 0.4, 0.2), 0.2).i_tilde;
            ASSERT_NEAR(a, b, 1e-12);
        }
    }
}

TEST(k1k2_model, examples) {
    auto k0 = k1k2_model(0, 4, 0.01);
    ASSERT_EQ(k0.k1, 8.0);
    ASSERT_EQ(k0.k2, 0.0);
    auto noiseless = k1k2_model(7, 4, 0);
    ASSERT_EQ(noiseless.k1, 8.0);
    ASSERT_EQ(noiseless.k2, 56.0);
    ASSERT_EQ(k1k2_model(60, 4, 0.01).k1, 0.0);
}

TEST(k1k2_model, reproduces_analytic_cmi) {
    const double m = 4, p = 1.0 / 64;
    for (double t = 0; t < 32; t += 0.7) {
        auto k = k1k2_model(t, m, p);
        for (double x = 0; x < 80; x += 0.9) {
            double gap = k.k2 - k.k1 * x;
            if (gap > 0) ASSERT_NEAR(gap, m * analytic_cmi_norm(t, x, p), 1e-9);
            ASSERT_NEAR(model_mutual_information(k, x) + std::max(gap, 0.0), k.k2, 1e-9);
        }
    }
}

TEST(k1k2_model, k2_grows_at_rate_k1) {
    const double m = 3, p = 0.02, h = 1e-6;
    for (double t = 0.1; t < 24; t += 0.5) {
        double derivative = (k1k2_model(t + h, m, p).k2 - k1k2_model(t - h, m, p).k2) / (2 * h);
        ASSERT_NEAR(derivative, k1k2_model(t, m, p).k1, 1e-5);
    }
}

TEST(extract_xdec, exact_line) {
    auto fit = extract_xdec(make_profile(20, 1, line));
    ASSERT_TRUE(fit.accepted());
    ASSERT_NEAR(*fit.x_dec, 5.0, 1e-9);
    ASSERT_NEAR(fit.r2, 1.0, 1e-12);
}

TEST(extract_xdec, analytic_profiles_give_analytic_intercepts) {
    for (double p : {1.0 / 64, 3.0 / 128, 0.01}) {
        for (double t : {4.0, 9.0, 15.0, 19.0}) {
            if (2 * p * t >= 0.8) continue;
            DecayProfile profile;
            profile.n_blocks = 1024;
            profile.t = t;
            for (double x = 1; x < 511; x += 1) {
                profile.x.push_back(x);
                profile.values.push_back(analytic_cmi_norm(t, x, p));
            }
            auto fit = extract_xdec(profile);
            ASSERT_TRUE(fit.accepted()) << fit.rejected_reason;
            ASSERT_NEAR(*fit.x_dec, analytic_xdec(t, p), 1e-6);
        }
    }
}

TEST(extract_xdec, line_plus_tail) {
    auto profile = make_profile(20, 0.25, line_plus_tail);
    auto fit = extract_xdec(profile);
    ASSERT_TRUE(fit.accepted());
    double expected = reference_intercept(profile, 0.2, 0.8);
    ASSERT_NEAR(*fit.x_dec, expected, 1e-9);
    ASSERT_NEAR(*fit.x_dec, 5.0, 0.3);
}

TEST(extract_xdec, scale_invariant) {
    auto profile = make_profile(20, 0.5, line_plus_tail);
    auto base = extract_xdec(profile);
    for (double s : {0.001, 3.0, 1e4}) {
        auto scaled = profile;
        for (double &v : scaled.values) v *= s;
        auto fit = extract_xdec(scaled);
        ASSERT_NEAR(*fit.x_dec, *base.x_dec, 1e-9);
        ASSERT_EQ(fit.fit_points, base.fit_points);
    }
}

TEST(extract_xdec, rejections) {
    DecayProfile flat;
    flat.x = {1, 2, 3, 4, 5};
    flat.values = {5, 5, 5, 5, 5};
    auto fit = extract_xdec(flat);
    ASSERT_FALSE(fit.accepted());
    ASSERT_EQ(fit.rejected_reason, "boundary distortion");

    DecayProfile cliff;
    cliff.x = {1, 2, 3, 4, 5};
    cliff.values = {10, 0, 0, 0, 0};
    fit = extract_xdec(cliff);
    ASSERT_FALSE(fit.accepted());
    ASSERT_EQ(fit.fit_points, 0u);

    DecayProfile zero;
    zero.x = {1, 2, 3, 4};
    zero.values = {0, 0, 0, 0};
    ASSERT_FALSE(extract_xdec(zero).accepted());

    DecayProfile short_profile;
    short_profile.x = {1, 2, 3};
    short_profile.values = {3, 2, 1};
    ASSERT_THROW(extract_xdec(short_profile), std::invalid_argument);

    DecayProfile unsorted;
    unsorted.x = {1, 3, 2, 4};
    unsorted.values = {3, 2, 1, 0};
    ASSERT_THROW(extract_xdec(unsorted), std::invalid_argument);
}

TEST(extract_xdec, ols_stderr_is_zero_on_exact_lines_and_positive_on_noise) {
    auto exact = extract_xdec(make_profile(20, 0.5, line));
    ASSERT_NEAR(exact.x_dec_stderr, 0.0, 1e-9);
    auto profile = make_profile(20, 0.5, line);
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        if (profile.values[i] > 0) profile.values[i] += (i % 2 ? 0.1 : -0.1);
    }
    auto noisy = extract_xdec(profile);
    ASSERT_GT(noisy.x_dec_stderr, 0.0);
}

TEST(interpolate, inside_and_outside) {
    std::vector<std::pair<double, double>> curve = {{0, 0}, {1, 2}, {3, 4}};
    ASSERT_DOUBLE_EQ(*interpolate(curve, 0.5), 1.0);
    ASSERT_DOUBLE_EQ(*interpolate(curve, 2.0), 3.0);
    ASSERT_DOUBLE_EQ(*interpolate(curve, 3.0), 4.0);
    ASSERT_FALSE(interpolate(curve, 3.5).has_value());
    ASSERT_FALSE(interpolate(curve, -0.1).has_value());
}

TEST(collapse, curve_and_jackknife_on_a_small_field) {
    CircuitConfig cfg;
    cfg.n_blocks = 32;
    cfg.m = 2;
    cfg.p = 1.0 / 32;
    cfg.t_max = 8;
    cfg.x_values = CircuitConfig::full_x_grid(32);
    cfg.realizations = 8;
    cfg.seed = 3;
    auto runs = run_ensemble(cfg);
    auto field = average(cfg, runs);
    auto points = collapse_curve(field);
    ASSERT_EQ(points.size(), 8u);
    std::size_t accepted = 0;
    for (const auto &pt : points) {
        ASSERT_DOUBLE_EQ(pt.t_tilde, 2 * cfg.p * pt.t);
        if (!pt.fit.accepted()) continue;
        ++accepted;
        ASSERT_DOUBLE_EQ(pt.x_dec_tilde(), 2 * cfg.p * *pt.fit.x_dec);
        double se = jackknife_xdec_stderr(cfg, runs, pt.t);
        if (!std::isnan(se)) ASSERT_GE(se, 0.0);
    }
    ASSERT_GE(accepted, 3u);

    std::ostringstream out;
    write_collapse_csv(out, points, FitWindow{});
    std::istringstream in(out.str());
    std::string line;
    std::size_t comments = 0, rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line[0] == '#') {
            ++comments;
        } else if (!header) {
            ASSERT_EQ(line, "p,m,t,t_tilde,x_dec,x_dec_tilde,fit_points,fit_r2,rejected_reason");
            header = true;
        } else {
            ++rows;
            ASSERT_EQ(std::count(line.begin(), line.end(), ','), 8);
        }
    }
    ASSERT_EQ(comments, 4u);
    ASSERT_EQ(rows, 8u);
}

TEST(collapse, jackknife_of_identical_runs_is_zero) {
    CircuitConfig cfg;
    cfg.n_blocks = 16;
    cfg.m = 1;
    cfg.t_max = 1;
    cfg.x_values = {1, 2, 3, 4, 5, 6, 7};
    Realization run;
    run.cmi = {{8, 6, 4, 2, 0, 0, 0}};
    std::vector<Realization> runs(5, run);
    ASSERT_NEAR(jackknife_xdec_stderr(cfg, runs, 1), 0.0, 1e-12);
    ASSERT_TRUE(std::isnan(jackknife_xdec_stderr(cfg, {run}, 1)));
}

TEST(compare_collapse, interpolates_reference) {
    auto point = [](double p, std::size_t t, double x_dec, double se) {
        CollapsePoint pt;
        pt.p = p;
        pt.m = 4;
        pt.t = t;
        pt.t_tilde = 2 * p * static_cast<double>(t);
        pt.fit.x_dec = x_dec;
        pt.x_dec_jackknife_stderr = se;
        return pt;
    };
    // Reference at p = 1/4: t_tilde 0.5 and 1.0, x_dec_tilde 0.25 and 0.75.
    std::vector<CollapsePoint> ref = {point(0.25, 1, 0.5, 0.2), point(0.25, 2, 1.5, 0.2)};
    // Other at p = 1/8, t = 3: t_tilde 0.75, x_dec_tilde 0.5 + 0.1.
    std::vector<CollapsePoint> other = {point(0.125, 3, 2.4, 0.4), point(0.125, 1, 1.0, 0.4)};
    auto cmp = compare_collapse(ref, other, 0.8);
    ASSERT_EQ(cmp.size(), 1u);
    EXPECT_DOUBLE_EQ(cmp[0].t_tilde, 0.75);
    EXPECT_NEAR(cmp[0].reference_x_dec_tilde, 0.5, 1e-15);
    EXPECT_NEAR(cmp[0].difference(), 0.1, 1e-15);
    EXPECT_NEAR(cmp[0].combined_stderr, std::hypot(0.1, 0.1), 1e-15);
    EXPECT_TRUE(compare_collapse(ref, other, 0.7).empty());
}
