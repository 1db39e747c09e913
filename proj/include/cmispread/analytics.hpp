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
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmispread/circuits.hpp"
#include "cmispread/format.hpp"

namespace cmispread {

namespace detail {

inline void require_rate(double p) {
    if (!(p >= 0.0 && p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");
}

}  // namespace detail

/// Large-m normalized CMI: max{2t(1 - pt) - 2(1 - 2pt)x, 0}, and 0 once
/// t exceeds t_c = 1/(2p).
inline double analytic_cmi_norm(double t, double x, double p) {
    detail::require_rate(p);
    if (t < 0 || x < 0) throw std::invalid_argument("t and x must be non-negative");
    if (p > 0 && t > 1.0 / (2.0 * p)) return 0.0;
    return std::max(2.0 * t * (1.0 - p * t) - 2.0 * (1.0 - 2.0 * p * t) * x, 0.0);
}

/// Separation where analytic_cmi_norm reaches zero: t(1 - pt)/(1 - 2pt).
inline double analytic_xdec(double t, double p) {
    detail::require_rate(p);
    if (t < 0) throw std::invalid_argument("t must be non-negative");
    if (p > 0 && t >= 1.0 / (2.0 * p)) throw std::domain_error("x_dec diverges at t >= 1/(2p)");
    return t * (1.0 - p * t) / (1.0 - 2.0 * p * t);
}

struct Rescaled {
    double t_tilde = 0;
    double x_tilde = 0;
    double i_tilde = 0;
};

/// (t, x, I) -> (2pt, 2px, pI).
inline Rescaled rescale(double t, double x, double i_norm, double p) {
    if (!(p > 0)) throw std::invalid_argument("rescaling needs p > 0");
    return {2.0 * p * t, 2.0 * p * x, p * i_norm};
}

struct Unscaled {
    double t = 0;
    double x = 0;
    double i_norm = 0;
};

inline Unscaled unrescale(const Rescaled &r, double p) {
    if (!(p > 0)) throw std::invalid_argument("rescaling needs p > 0");
    return {r.t_tilde / (2.0 * p), r.x_tilde / (2.0 * p), r.i_tilde / p};
}

inline void require_rescaled_time(double t_tilde) {
    if (!(t_tilde >= 0.0 && t_tilde < 1.0)) throw std::domain_error("rescaled time must lie in [0, 1)");
}

/// max{0, t~(1 - t~/2) - (1 - t~)x~}.
inline double analytic_rescaled(double t_tilde, double x_tilde) {
    require_rescaled_time(t_tilde);
    return std::max(0.0, t_tilde * (1.0 - t_tilde / 2.0) - (1.0 - t_tilde) * x_tilde);
}

inline double analytic_xdec_rescaled(double t_tilde) {
    require_rescaled_time(t_tilde);
    return t_tilde * (1.0 - t_tilde / 2.0) / (1.0 - t_tilde);
}

/// k1: rows with a left endpoint inside a block; k2: the rest, equal to I(A:BC).
struct K1K2 {
    double k1 = 0;
    double k2 = 0;
};

/// k1 = 2m(1 - 2pt) clamped at 0, k2 = 2mt(1 - pt).
inline K1K2 k1k2_model(double t, double m, double p) {
    detail::require_rate(p);
    if (t < 0) throw std::invalid_argument("t must be non-negative");
    return {std::max(0.0, 2.0 * m * (1.0 - 2.0 * p * t)), 2.0 * m * t * (1.0 - p * t)};
}

/// I(A:B) = min{k1 x, k2} for a box of width x.
inline double model_mutual_information(const K1K2 &k, double x) { return std::min(k.k1 * x, k.k2); }

/// I_norm as a function of x at one timestep.
struct DecayProfile {
    std::vector<double> x;
    std::vector<double> values;
    std::size_t n_blocks = 0;
    double t = 0;

    void validate() const {
        if (x.size() != values.size()) throw std::invalid_argument("profile x and values differ in length");
        for (std::size_t i = 1; i < x.size(); ++i) {
            if (!(x[i] > x[i - 1])) throw std::invalid_argument("profile x must be strictly increasing");
        }
        for (double v : values) {
            if (v < 0) throw std::invalid_argument("profile values must be non-negative");
        }
    }
};

struct FitWindow {
    /// Fit points with value in [lo, hi] times the value at the smallest x.
    double lo = 0.2;
    double hi = 0.8;
    /// Reject when the value at the largest x exceeds this fraction of the maximum.
    double boundary_fraction = 0.05;
};

struct XdecFit {
    std::optional<double> x_dec;
    std::size_t fit_points = 0;
    double r2 = std::numeric_limits<double>::quiet_NaN();
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    /// Ordinary least-squares standard error of the intercept position.
    double x_dec_stderr = std::numeric_limits<double>::quiet_NaN();
    std::string rejected_reason;

    bool accepted() const { return x_dec.has_value(); }
};

/// x-intercept of a least-squares line through the linearly decaying part.
inline XdecFit extract_xdec(const DecayProfile &profile, const FitWindow &window = {}) {
    profile.validate();
    if (profile.x.size() < 4) throw std::invalid_argument("profile needs at least 4 points");
    XdecFit fit;
    const double peak = *std::max_element(profile.values.begin(), profile.values.end());
    const double reference = profile.values.front();
    if (!(reference > 0)) {
        fit.rejected_reason = "no signal at the smallest x";
        return fit;
    }
    if (profile.values.back() > window.boundary_fraction * peak) {
        fit.rejected_reason = "boundary distortion";
        return fit;
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < profile.x.size(); ++i) {
        double v = profile.values[i];
        if (v >= window.lo * reference && v <= window.hi * reference) {
            xs.push_back(profile.x[i]);
            ys.push_back(v);
        }
    }
    fit.fit_points = xs.size();
    if (xs.size() < 2) {
        fit.rejected_reason = "fewer than 2 points in the fit window";
        return fit;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    if (!(slope < 0)) {
        fit.rejected_reason = "fitted line does not decay";
        return fit;
    }
    const double intercept = my - slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (intercept + slope * xs[i]);
        ss_res += r * r;
    }
    fit.slope = slope;
    fit.intercept = intercept;
    fit.x_dec = -intercept / slope;
    fit.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    if (xs.size() > 2) {
        // Delta method on x0 = -a/b with the OLS covariance of (a, b).
        double sigma2 = ss_res / (n - 2.0);
        double var_b = sigma2 / sxx;
        double var_a = sigma2 * (1.0 / n + mx * mx / sxx);
        double cov_ab = -mx * sigma2 / sxx;
        double x0 = *fit.x_dec;
        double var_x0 = (var_a + x0 * x0 * var_b + 2.0 * x0 * cov_ab) / (slope * slope);
        fit.x_dec_stderr = std::sqrt(std::max(0.0, var_x0));
    }
    return fit;
}

/// Mean profile at timestep t (1-based) from a field, with x in blocks.
inline DecayProfile profile_at(const SpreadingField &field, std::size_t t) {
    DecayProfile profile;
    profile.n_blocks = field.config.n_blocks;
    profile.t = static_cast<double>(t);
    for (std::size_t i = 0; i < field.config.x_values.size(); ++i) {
        profile.x.push_back(static_cast<double>(field.config.x_values[i]));
        profile.values.push_back(field.mean_at(t, i));
    }
    return profile;
}

struct CollapsePoint {
    double p = 0;
    std::size_t m = 0;
    std::size_t t = 0;
    double t_tilde = 0;
    XdecFit fit;
    /// Delete-one jackknife standard error over realizations, if computed.
    double x_dec_jackknife_stderr = std::numeric_limits<double>::quiet_NaN();

    double x_dec_tilde() const { return fit.x_dec ? 2.0 * p * *fit.x_dec : std::numeric_limits<double>::quiet_NaN(); }
};

/// x_dec at every recorded timestep of a field.
inline std::vector<CollapsePoint> collapse_curve(const SpreadingField &field, const FitWindow &window = {}) {
    std::vector<CollapsePoint> points;
    const auto &cfg = field.config;
    if (cfg.x_values.size() < 4) throw std::invalid_argument("collapse needs at least 4 x values");
    for (std::size_t t = 1; t <= cfg.t_max; ++t) {
        CollapsePoint point;
        point.p = cfg.p;
        point.m = cfg.m;
        point.t = t;
        point.t_tilde = 2.0 * cfg.p * static_cast<double>(t);
        point.fit = extract_xdec(profile_at(field, t), window);
        points.push_back(point);
    }
    return points;
}

/// Delete-one jackknife standard error of x_dec at timestep t. NaN when any
/// leave-one-out profile is rejected.
inline double jackknife_xdec_stderr(const CircuitConfig &cfg, const std::vector<Realization> &runs, std::size_t t,
                                    const FitWindow &window = {}) {
    const std::size_t r = runs.size();
    if (r < 2) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t nx = cfg.x_values.size();
    std::vector<long long> total(nx, 0);
    for (const auto &run : runs) {
        for (std::size_t i = 0; i < nx; ++i) total[i] += run.cmi.at(t - 1)[i];
    }
    std::vector<double> estimates;
    estimates.reserve(r);
    for (const auto &left_out : runs) {
        DecayProfile profile;
        profile.n_blocks = cfg.n_blocks;
        profile.t = static_cast<double>(t);
        for (std::size_t i = 0; i < nx; ++i) {
            profile.x.push_back(static_cast<double>(cfg.x_values[i]));
            profile.values.push_back(static_cast<double>(total[i] - left_out.cmi[t - 1][i]) /
                                     static_cast<double>(r - 1) / static_cast<double>(cfg.m));
        }
        auto fit = extract_xdec(profile, window);
        if (!fit.accepted()) return std::numeric_limits<double>::quiet_NaN();
        estimates.push_back(*fit.x_dec);
    }
    double mean = 0;
    for (double e : estimates) mean += e;
    mean /= static_cast<double>(r);
    double ss = 0;
    for (double e : estimates) ss += (e - mean) * (e - mean);
    return std::sqrt(static_cast<double>(r - 1) / static_cast<double>(r) * ss);
}

/// Linear interpolation through (x, y) points sorted by x; nullopt outside.
inline std::optional<double> interpolate(const std::vector<std::pair<double, double>> &curve, double x) {
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const auto &[x0, y0] = curve[i];
        const auto &[x1, y1] = curve[i + 1];
        if (x >= x0 && x <= x1) {
            if (x1 == x0) return y0;
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        }
    }
    if (curve.size() == 1 && curve[0].first == x) return curve[0].second;
    return std::nullopt;
}

inline void write_collapse_csv(std::ostream &out, const std::vector<CollapsePoint> &points, const FitWindow &window) {
    out << "# window_lo=" << format_double(window.lo) << "\n";
    out << "# window_hi=" << format_double(window.hi) << "\n";
    out << "# boundary_fraction=" << format_double(window.boundary_fraction) << "\n";
    out << "# x_unit=blocks; x_dec_tilde = 2 p x_dec\n";
    out << "p,m,t,t_tilde,x_dec,x_dec_tilde,fit_points,fit_r2,rejected_reason\n";
    for (const auto &pt : points) {
        out << format_double(pt.p) << "," << pt.m << "," << pt.t << "," << format_double(pt.t_tilde) << ",";
        if (pt.fit.accepted()) {
            out << format_double(*pt.fit.x_dec) << "," << format_double(pt.x_dec_tilde()) << "," << pt.fit.fit_points
                << "," << format_double(pt.fit.r2) << ",";
        } else {
            out << ",," << pt.fit.fit_points << ",," << pt.fit.rejected_reason;
        }
        out << "\n";
    }
}

/// One point of `other` compared against `reference` interpolated at the
/// same rescaled time. Standard errors are in rescaled units.
struct CollapseComparison {
    double t_tilde = 0;
    double x_dec_tilde = 0;
    double reference_x_dec_tilde = 0;
    double combined_stderr = 0;

    double difference() const { return x_dec_tilde - reference_x_dec_tilde; }
    double z() const { return difference() / combined_stderr; }
};

/// Compares every accepted point of `other` with t_tilde <= t_tilde_max that
/// lies inside the range of the accepted reference points. Both curves need
/// jackknife standard errors.
inline std::vector<CollapseComparison> compare_collapse(const std::vector<CollapsePoint> &reference,
                                                        const std::vector<CollapsePoint> &other, double t_tilde_max) {
    std::vector<std::pair<double, double>> ref_value;
    std::vector<std::pair<double, double>> ref_stderr;
    for (const auto &pt : reference) {
        if (!pt.fit.accepted()) continue;
        ref_value.emplace_back(pt.t_tilde, pt.x_dec_tilde());
        ref_stderr.emplace_back(pt.t_tilde, 2.0 * pt.p * pt.x_dec_jackknife_stderr);
    }
    std::vector<CollapseComparison> out;
    for (const auto &pt : other) {
        if (!pt.fit.accepted() || pt.t_tilde > t_tilde_max) continue;
        auto value = interpolate(ref_value, pt.t_tilde);
        auto se = interpolate(ref_stderr, pt.t_tilde);
        if (!value || !se) continue;
        double own = 2.0 * pt.p * pt.x_dec_jackknife_stderr;
        out.push_back({pt.t_tilde, pt.x_dec_tilde(), *value, std::hypot(*se, own)});
    }
    return out;
}

}  // namespace cmispread
