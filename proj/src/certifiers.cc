// Copyright 2026 The phasecert Authors
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

#include "phasecert/certifiers.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phasecert/errors.h"
#include "phasecert/numerics.h"

namespace phasecert {
namespace {

constexpr std::array<CertifierKind, 4> kAllKinds = {
    CertifierKind::MultiPointWigner,
    CertifierKind::WignerVsQ,
    CertifierKind::WignerNegativity,
    CertifierKind::MandelQ,
};

constexpr double kMinSeparation = 1e-6;
constexpr double kTieTolerance = 1e-12;
constexpr double kLowerEta = 1e-4;
constexpr int kMonotonicityPoints = 20;

bool contains(std::span<const CertifierKind> kinds, CertifierKind kind) {
    return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

int grid_half_count(double half_width, double step) {
    return static_cast<int>(std::floor(half_width / step + 1e-9));
}

}  // namespace

std::string_view certifier_name(CertifierKind kind) {
    switch (kind) {
        case CertifierKind::MultiPointWigner:
            return "eq1";
        case CertifierKind::WignerVsQ:
            return "eq2";
        case CertifierKind::WignerNegativity:
            return "wigner-negativity";
        case CertifierKind::MandelQ:
            return "mandel";
    }
    return "unknown";
}

std::optional<CertifierKind> parse_certifier(std::string_view name) {
    for (CertifierKind kind : kAllKinds) {
        if (certifier_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::span<const CertifierKind> all_certifiers() {
    return kAllKinds;
}

std::string certifier_names() {
    std::string out;
    for (CertifierKind kind : kAllKinds) {
        if (!out.empty()) {
            out += ", ";
        }
        out += certifier_name(kind);
    }
    return out;
}

bool is_detected(double value, double sigma, double confidence_k) {
    return value + confidence_k * sigma < -kNumericalZero;
}

CertificateReport make_report(CertifierKind kind, double value, double sigma, std::vector<PhasePoint> points,
                              const StateParams &params, double confidence_k) {
    if (!(sigma >= 0.0)) {
        throw DomainError("certificate sigma must be >= 0");
    }
    CertificateReport report;
    report.kind = kind;
    report.value = value;
    report.sigma = sigma;
    report.detected = is_detected(value, sigma, confidence_k);
    report.points = std::move(points);
    report.params = params;
    report.confidence_k = confidence_k;
    return report;
}

double eq1_value(const WignerFn &wigner, const PhasePoint &a1, const PhasePoint &a2) {
    const std::complex<double> diff = a2.alpha() - a1.alpha();
    if (std::abs(diff) < kMinSeparation) {
        throw DomainError("two-point condition needs distinct phase-space points (|a2 - a1| >= 1e-6)");
    }
    const PhasePoint mid(0.5 * (a1.alpha() + a2.alpha()), std::numeric_limits<double>::infinity());
    const double w1 = wigner(a1);
    const double w2 = wigner(a2);
    const double wm = wigner(mid);
    return w1 * w2 - std::exp(-std::norm(diff)) * wm * wm;
}

double eq1_value(const PhaseSpaceState &state, const PhasePoint &a1, const PhasePoint &a2) {
    return eq1_value([&](const PhasePoint &pt) { return state.wigner(pt); }, a1, a2);
}

double eq2_value(const PhaseSpaceState &state, const PhasePoint &pt) {
    const double q = state.husimi(pt);
    return state.wigner(pt) - 2.0 * std::numbers::pi * q * q;
}

Eq1Optimum optimize_eq1(const PhaseSpaceState &state, const Eq1SearchOptions &options) {
    const double inf = std::numeric_limits<double>::infinity();
    const int half = grid_half_count(options.half_width, options.step);
    // Pair members sit on multiples of `step`, midpoints on multiples of step/2.
    const double half_step = 0.5 * options.step;
    std::vector<double> wigner_axis(static_cast<std::size_t>(4 * half + 1));
    for (int i = -2 * half; i <= 2 * half; ++i) {
        wigner_axis[static_cast<std::size_t>(i + 2 * half)] =
            state.wigner(PhasePoint(i * half_step, 0.0, options.alpha_max));
    }
    auto w_at = [&](int half_index) {
        return wigner_axis[static_cast<std::size_t>(half_index + 2 * half)];
    };

    double best_value = inf;
    int best_i = 0;
    int best_j = 1;
    for (int i = -half; i <= half; ++i) {
        for (int j = -half; j <= half; ++j) {
            if (i == j) {
                continue;
            }
            double d = (j - i) * options.step;
            double wm = w_at(i + j);
            double v = w_at(2 * i) * w_at(2 * j) - std::exp(-d * d) * wm * wm;
            if (v < best_value) {
                best_value = v;
                best_i = i;
                best_j = j;
            }
        }
    }
    const PhasePoint grid_a1(best_i * options.step, 0.0, options.alpha_max);
    const PhasePoint grid_a2(best_j * options.step, 0.0, options.alpha_max);

    const bool general = !state.is_phase_invariant();
    auto unpack = [&](std::span<const double> x) {
        const std::complex<double> rotation = general ? std::polar(1.0, x[3]) : std::complex<double>(1.0, 0.0);
        return std::pair{rotation * std::complex<double>(x[0], 0.0), rotation * std::polar(x[1], x[2])};
    };
    auto objective = [&](std::span<const double> x) {
        auto [a1, a2] = unpack(x);
        if (std::abs(a1) > options.alpha_max || std::abs(a2) > options.alpha_max ||
            std::abs(a2 - a1) < kMinSeparation) {
            return inf;
        }
        return eq1_value(state, PhasePoint(a1, options.alpha_max), PhasePoint(a2, options.alpha_max));
    };

    std::vector<double> start = {best_i * options.step, best_j * options.step, 0.0};
    std::vector<double> steps = {0.5 * options.step, 0.5 * options.step, 0.1};
    if (general) {
        start.push_back(0.0);
        steps.push_back(0.1);
    }
    SimplexOptions simplex_options;
    simplex_options.max_iterations = options.max_iterations;
    simplex_options.x_tolerance = 1e-7;
    SimplexResult refined = nelder_mead(objective, start, steps, simplex_options);

    if (!refined.converged || !(refined.value <= best_value)) {
        return Eq1Optimum{grid_a1, grid_a2, best_value, refined.converged};
    }
    auto [a1, a2] = unpack(refined.x);
    return Eq1Optimum{PhasePoint(a1, options.alpha_max), PhasePoint(a2, options.alpha_max), refined.value, true};
}

Eq2Optimum eq2_optimal_point(const PhaseSpaceState &state, const GridOptions &grid) {
    const int half = grid_half_count(grid.half_width, grid.step);
    const std::size_t side = static_cast<std::size_t>(2 * half + 1);
    std::vector<double> values(side * side);
    std::vector<double> husimi(side * side);

    // Phase-invariant states depend on |alpha| only; cache on the integer key i^2 + j^2.
    const bool radial = state.is_phase_invariant();
    std::vector<double> cache_w;
    std::vector<double> cache_q;
    if (radial) {
        cache_w.assign(static_cast<std::size_t>(2 * half * half + 1), std::numeric_limits<double>::quiet_NaN());
        cache_q = cache_w;
    }
    for (int b = -half; b <= half; ++b) {
        for (int a = -half; a <= half; ++a) {
            const std::size_t idx = static_cast<std::size_t>(b + half) * side + static_cast<std::size_t>(a + half);
            const PhasePoint pt(a * grid.step, b * grid.step);
            double w;
            double q;
            if (radial) {
                const std::size_t key = static_cast<std::size_t>(a * a + b * b);
                if (std::isnan(cache_w[key])) {
                    cache_w[key] = state.wigner(pt);
                    cache_q[key] = state.husimi(pt);
                }
                w = cache_w[key];
                q = cache_q[key];
            } else {
                w = state.wigner(pt);
                q = state.husimi(pt);
            }
            husimi[idx] = q;
            values[idx] = w - 2.0 * std::numbers::pi * q * q;
        }
    }
    const double minimum = *std::min_element(values.begin(), values.end());
    std::size_t chosen = values.size();
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        if (values[idx] <= minimum + kTieTolerance && (chosen == values.size() || husimi[idx] > husimi[chosen])) {
            chosen = idx;
        }
    }
    const int a = static_cast<int>(chosen % side) - half;
    const int b = static_cast<int>(chosen / side) - half;
    return Eq2Optimum{PhasePoint(a * grid.step, b * grid.step), values[chosen]};
}

WignerMinimum wigner_min(const PhaseSpaceState &state, double alpha_max) {
    if (state.is_phase_invariant()) {
        const double step = 0.01;
        const int count = static_cast<int>(std::floor(alpha_max / step + 1e-9));
        double best_r = 0.0;
        double best_w = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= count; ++i) {
            const double r = i * step;
            const double w = state.wigner(PhasePoint(r, 0.0, alpha_max));
            if (w < best_w) {
                best_w = w;
                best_r = r;
            }
        }
        const double lo = std::max(0.0, best_r - step);
        const double hi = std::min(alpha_max, best_r + step);
        auto [r, w] = golden_section_minimize(
            [&](double radius) { return state.wigner(PhasePoint(radius, 0.0, alpha_max)); }, lo, hi, 1e-9);
        if (w < best_w) {
            return WignerMinimum{PhasePoint(r, 0.0, alpha_max), w};
        }
        return WignerMinimum{PhasePoint(best_r, 0.0, alpha_max), best_w};
    }

    const GridOptions grid;
    const int half = grid_half_count(grid.half_width, grid.step);
    double best_w = std::numeric_limits<double>::infinity();
    std::complex<double> best_alpha = 0.0;
    for (int b = -half; b <= half; ++b) {
        for (int a = -half; a <= half; ++a) {
            const std::complex<double> alpha(a * grid.step, b * grid.step);
            const double w = state.wigner(PhasePoint(alpha, alpha_max));
            if (w < best_w) {
                best_w = w;
                best_alpha = alpha;
            }
        }
    }
    auto objective = [&](std::span<const double> x) {
        const std::complex<double> alpha(x[0], x[1]);
        if (std::abs(alpha) > alpha_max) {
            return std::numeric_limits<double>::infinity();
        }
        return state.wigner(PhasePoint(alpha, alpha_max));
    };
    const std::vector<double> steps = {grid.step, grid.step};
    SimplexResult refined = nelder_mead(objective, {best_alpha.real(), best_alpha.imag()}, steps);
    if (refined.value < best_w) {
        return WignerMinimum{PhasePoint(std::complex<double>(refined.x[0], refined.x[1]), alpha_max), refined.value};
    }
    return WignerMinimum{PhasePoint(best_alpha, alpha_max), best_w};
}

double mandel_certifier_value(const PhotonNumberDistribution &dist) {
    if (!(mean_photon(dist) > 0.0)) {
        return 0.0;
    }
    return mandel_q(dist);
}

CertifierEvaluation evaluate_certifier(CertifierKind kind, const PhaseSpaceState &state) {
    switch (kind) {
        case CertifierKind::MultiPointWigner: {
            const Eq1Optimum opt = optimize_eq1(state);
            return {opt.value, {opt.a1, opt.a2}};
        }
        case CertifierKind::WignerVsQ: {
            const Eq2Optimum opt = eq2_optimal_point(state);
            return {opt.value, {opt.point}};
        }
        case CertifierKind::WignerNegativity: {
            const WignerMinimum opt = wigner_min(state);
            return {opt.value, {opt.point}};
        }
        case CertifierKind::MandelQ:
            return {mandel_certifier_value(state.photon_numbers()), {}};
    }
    throw DomainError("unknown certifier kind");
}

std::vector<CertificateReport> analytic_certificates(const StateParams &params, std::span<const CertifierKind> kinds,
                                                     double confidence_k, bool add_photon) {
    params.validate();
    const PhotonNumberDistribution base = add_photon ? spats_dist(params.nbar) : thermal_dist(params.nbar);
    const PhaseSpaceState state(apply_loss(base, params.eta));
    std::vector<CertificateReport> reports;
    for (CertifierKind kind : kinds) {
        CertifierEvaluation eval = evaluate_certifier(kind, state);
        reports.push_back(make_report(kind, eval.value, 0.0, std::move(eval.points), params, confidence_k));
    }
    return reports;
}

ThresholdResult critical_eta(CertifierKind kind, double nbar, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("threshold tolerance must be positive");
    }
    auto detects = [&](double eta) {
        const PhaseSpaceState state(lossy_spats(StateParams{nbar, eta}));
        return evaluate_certifier(kind, state).value < -kNumericalZero;
    };

    bool single_crossing = true;
    bool seen = false;
    for (int i = 0; i < kMonotonicityPoints; ++i) {
        const double eta = kLowerEta + (1.0 - kLowerEta) * i / (kMonotonicityPoints - 1);
        const bool d = detects(eta);
        if (seen && !d) {
            single_crossing = false;
        }
        seen = seen || d;
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (detects(kLowerEta)) {
        return ThresholdResult{ThresholdStatus::DetectsEverywhere, nan, single_crossing};
    }
    if (!detects(1.0)) {
        return ThresholdResult{ThresholdStatus::DetectsNowhere, nan, single_crossing};
    }
    double lo = kLowerEta;
    double hi = 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (detects(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return ThresholdResult{ThresholdStatus::Found, 0.5 * (lo + hi), single_crossing};
}

std::string_view region_label_name(RegionLabel label) {
    switch (label) {
        case RegionLabel::DetectedByBaselines:
            return "detected-by-baselines";
        case RegionLabel::DetectedOnlyByInequality:
            return "detected-only-by-phase-space-inequality";
        case RegionLabel::Undetected:
            return "undetected";
    }
    return "unknown";
}

RegionCell classify_state(const StateParams &params, std::span<const CertifierKind> kinds) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const PhaseSpaceState state(lossy_spats(params));
    RegionCell cell{params.nbar, params.eta, nan, nan, nan, nan, RegionLabel::Undetected};
    auto eval = [&](CertifierKind kind) {
        return contains(kinds, kind) ? evaluate_certifier(kind, state).value : nan;
    };
    cell.eq1 = eval(CertifierKind::MultiPointWigner);
    cell.eq2 = eval(CertifierKind::WignerVsQ);
    cell.wmin = eval(CertifierKind::WignerNegativity);
    cell.mandel = eval(CertifierKind::MandelQ);
    auto hit = [](double v) {
        return v < -kNumericalZero;
    };
    if (hit(cell.wmin) || hit(cell.mandel)) {
        cell.label = RegionLabel::DetectedByBaselines;
    } else if (hit(cell.eq1) || hit(cell.eq2)) {
        cell.label = RegionLabel::DetectedOnlyByInequality;
    }
    return cell;
}

RegionMap region_scan(std::span<const double> nbar_grid, std::span<const double> eta_grid,
                      std::span<const CertifierKind> kinds) {
    if (nbar_grid.empty() || eta_grid.empty()) {
        throw DomainError("region scan needs nonempty nbar and eta grids");
    }
    RegionMap map;
    map.nbar_grid.assign(nbar_grid.begin(), nbar_grid.end());
    map.eta_grid.assign(eta_grid.begin(), eta_grid.end());
    map.cells.reserve(nbar_grid.size() * eta_grid.size());
    for (double nbar : nbar_grid) {
        for (double eta : eta_grid) {
            map.cells.push_back(classify_state(StateParams{nbar, eta}, kinds));
        }
    }
    return map;
}

}  // namespace phasecert
