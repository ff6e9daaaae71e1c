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

#ifndef PHASECERT_CERTIFIERS_H
#define PHASECERT_CERTIFIERS_H

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasecert/fock.h"
#include "phasecert/phase_space.h"

namespace phasecert {

/// Every certifier is oriented so that a negative value certifies nonclassicality.
enum class CertifierKind {
    MultiPointWigner,  ///< W(a1) W(a2) - e^{-|a2-a1|^2} W((a1+a2)/2)^2
    WignerVsQ,         ///< W(a) - 2 pi Q(a)^2
    WignerNegativity,  ///< min_a W(a)
    MandelQ,           ///< Var(n)/<n> - 1
};

/// CLI spelling: "eq1", "eq2", "wigner-negativity", "mandel".
std::string_view certifier_name(CertifierKind kind);
std::optional<CertifierKind> parse_certifier(std::string_view name);
std::span<const CertifierKind> all_certifiers();
/// Comma-separated list of the accepted names, for usage messages.
std::string certifier_names();

/// Values within this distance of zero are round-off, not a violation.
inline constexpr double kNumericalZero = 1e-12;
inline constexpr double kDefaultConfidence = 2.0;

/// value + k sigma < -kNumericalZero.
bool is_detected(double value, double sigma, double confidence_k);

struct CertificateReport {
    CertifierKind kind = CertifierKind::WignerVsQ;
    double value = 0.0;
    double sigma = 0.0;
    bool detected = false;
    std::vector<PhasePoint> points;
    StateParams params;
    double confidence_k = kDefaultConfidence;
};

CertificateReport make_report(CertifierKind kind, double value, double sigma, std::vector<PhasePoint> points,
                              const StateParams &params, double confidence_k);

using WignerFn = std::function<double(const PhasePoint &)>;

/// Two-point Wigner condition. Throws DomainError when |a2 - a1| < 1e-6.
double eq1_value(const WignerFn &wigner, const PhasePoint &a1, const PhasePoint &a2);
double eq1_value(const PhaseSpaceState &state, const PhasePoint &a1, const PhasePoint &a2);

/// Single-point Wigner-versus-Husimi condition W(a) - 2 pi Q(a)^2.
double eq2_value(const PhaseSpaceState &state, const PhasePoint &pt);

struct Eq1SearchOptions {
    /// Coarse grid: a1, a2 on the real axis in [-half_width, half_width] with spacing `step`.
    double half_width = 4.0;
    double step = 0.1;
    double alpha_max = kDefaultAlphaMax;
    int max_iterations = 500;
};

struct Eq1Optimum {
    PhasePoint a1;
    PhasePoint a2;
    double value;
    /// False when the simplex stage did not converge; the best grid pair is returned then.
    bool converged;
};

/// Minimizes eq1_value: collinear grid search, then simplex refinement over
/// (Re a1, Re a2, relative angle), plus a common rotation for non-phase-invariant states.
Eq1Optimum optimize_eq1(const PhaseSpaceState &state, const Eq1SearchOptions &options = {});

struct GridOptions {
    double half_width = 4.0;
    double step = 0.05;
};

struct Eq2Optimum {
    PhasePoint point;
    double value;
};

/// Grid minimizer of eq2_value. Values within 1e-12 of the minimum tie; ties go to the
/// largest Q(alpha), then to the first point in row-major (Im outer, Re inner) order.
Eq2Optimum eq2_optimal_point(const PhaseSpaceState &state, const GridOptions &grid = {});

struct WignerMinimum {
    PhasePoint point;
    double value;
};

/// min W: radial grid plus golden-section refinement for phase-invariant states, square grid
/// plus simplex refinement otherwise.
WignerMinimum wigner_min(const PhaseSpaceState &state, double alpha_max = kDefaultAlphaMax);

/// Mandel Q, with the zero-mean (vacuum) limit reported as 0.
double mandel_certifier_value(const PhotonNumberDistribution &dist);

/// Optimized analytic value of one certifier and the phase-space points it used.
struct CertifierEvaluation {
    double value;
    std::vector<PhasePoint> points;
};
CertifierEvaluation evaluate_certifier(CertifierKind kind, const PhaseSpaceState &state);

/// Analytic reports (sigma = 0) for the lossy photon-added thermal state, or for the lossy
/// thermal state when `add_photon` is false.
std::vector<CertificateReport> analytic_certificates(const StateParams &params, std::span<const CertifierKind> kinds,
                                                     double confidence_k = kDefaultConfidence,
                                                     bool add_photon = true);

enum class ThresholdStatus {
    Found,
    DetectsEverywhere,  ///< detected already at the lower bracket end
    DetectsNowhere,     ///< not detected even at eta = 1
};

struct ThresholdResult {
    ThresholdStatus status;
    double eta;            ///< NaN unless status == Found
    bool single_crossing;  ///< post-hoc 20-point scan saw at most one sign change
};

/// Smallest eta at which the optimized certifier detects the lossy photon-added thermal state,
/// by bisection on [1e-4, 1].
ThresholdResult critical_eta(CertifierKind kind, double nbar, double tol = 1e-3);

enum class RegionLabel {
    DetectedByBaselines,
    DetectedOnlyByInequality,
    Undetected,
};
std::string_view region_label_name(RegionLabel label);

struct RegionCell {
    double nbar;
    double eta;
    /// NaN for certifiers that were not requested.
    double eq1;
    double eq2;
    double wmin;
    double mandel;
    RegionLabel label;
};

struct RegionMap {
    std::vector<double> nbar_grid;
    std::vector<double> eta_grid;
    /// Row-major: nbar outer, eta inner.
    std::vector<RegionCell> cells;

    const RegionCell &at(std::size_t nbar_index, std::size_t eta_index) const {
        return cells[nbar_index * eta_grid.size() + eta_index];
    }
};

RegionCell classify_state(const StateParams &params, std::span<const CertifierKind> kinds);

/// Throws DomainError for empty grids.
RegionMap region_scan(std::span<const double> nbar_grid, std::span<const double> eta_grid,
                      std::span<const CertifierKind> kinds);

}  // namespace phasecert

#endif
