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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.h"
#include "phasecert/certifiers.h"
#include "phasecert/errors.h"

namespace phasecert {
namespace {

constexpr double kPi = std::numbers::pi;

// eq1 for the lossy single photon with points (0, d).
double eq1_single_photon(double eta, double d) {
    const double u = eta * d * d;
    const double a = 1.0 - 2.0 * eta;
    return std::pow(2.0 / kPi, 2) * std::exp(-2.0 * d * d) * u * (2.0 * a - u);
}

TEST(Names, RoundTrip) {
    for (auto kind : all_certifiers()) {
        EXPECT_EQ(parse_certifier(certifier_name(kind)), kind);
    }
    EXPECT_FALSE(parse_certifier("eq3").has_value());
    EXPECT_EQ(certifier_names(), "eq1, eq2, wigner-negativity, mandel");
}

TEST(Verdict, UsesValuePlusKSigma) {
    EXPECT_TRUE(is_detected(-0.3, 0.1, 2.0));
    EXPECT_FALSE(is_detected(-0.3, 0.2, 2.0));
    EXPECT_FALSE(is_detected(0.0, 0.0, 2.0));
    EXPECT_FALSE(is_detected(-1e-13, 0.0, 2.0));
    const auto r = make_report(CertifierKind::WignerVsQ, -0.1, 0.01, {PhasePoint::origin()}, {0.5, 0.5}, 3.0);
    EXPECT_TRUE(r.detected);
    EXPECT_EQ(r.confidence_k, 3.0);
}

TEST(Eq1, CoherentPairsVanish) {
    const std::complex<double> beta(0.7, 0.4);
    const WignerFn w = [&](const PhasePoint &pt) { return oracle::coherent_wigner(beta, pt.alpha()); };
    for (auto [a, b] : {std::pair{PhasePoint(0.0, 0.0), PhasePoint(1.0, 0.0)},
                        std::pair{PhasePoint(-1.3, 0.2), PhasePoint(0.4, 2.1)},
                        std::pair{PhasePoint(0.7, 0.4), PhasePoint(0.71, 0.4)}}) {
        EXPECT_NEAR(eq1_value(w, a, b), 0.0, 1e-10);
    }
    PhaseSpaceState coherent(coherent_matrix(beta, 40));
    EXPECT_NEAR(eq1_value(coherent, PhasePoint(0.1, -0.5), PhasePoint(1.2, 0.9)), 0.0, 1e-10);
}

TEST(Eq1, SinglePhotonNegative) {
    PhaseSpaceState photon(spats_dist(0.0));
    EXPECT_LT(eq1_value(photon, PhasePoint::origin(), PhasePoint(1.0, 0.0)), 0.0);
}

TEST(Eq1, ClosedFormFamily) {
    for (double eta : {0.1, 0.25, 0.4, 0.6, 0.9}) {
        PhaseSpaceState s(apply_loss(spats_dist(0.0), eta));
        for (double d : {0.2, 0.5, 1.0, 1.4, 2.0}) {
            const double ref = eq1_single_photon(eta, d);
            const double got = eq1_value(s, PhasePoint::origin(), PhasePoint(d, 0.0));
            // Some members vanish exactly; there only round-off is left.
            EXPECT_NEAR(got, ref, 1e-8 * std::abs(ref) + 1e-16) << eta << " " << d;
        }
    }
}

TEST(Eq1, CoincidentPointsRejected) {
    PhaseSpaceState photon(spats_dist(0.0));
    EXPECT_THROW(eq1_value(photon, PhasePoint(0.5, 0.5), PhasePoint(0.5, 0.5)), DomainError);
}

TEST(Eq2, Examples) {
    EXPECT_NEAR(eq2_value(PhaseSpaceState(thermal_dist(0.0)), PhasePoint::origin()), 0.0, 1e-12);
    for (double eta : {0.01, 0.07, 0.25, 0.5, 0.9, 1.0}) {
        const double got = eq2_value(PhaseSpaceState(apply_loss(spats_dist(0.0), eta)), PhasePoint::origin());
        EXPECT_NEAR(got, -2.0 * eta * eta / kPi, 1e-12) << eta;
    }
    EXPECT_NEAR(eq2_value(PhaseSpaceState(apply_loss(spats_dist(0.0), 0.07)), PhasePoint::origin()), -3.12e-3,
                1e-5);
    const double ref = 2.0 / kPi * (oracle::pgf(0.98, 0.3, -1.0) - std::pow(oracle::pgf(0.98, 0.3, 0.0), 2));
    EXPECT_NEAR(eq2_value(PhaseSpaceState(lossy_spats({0.98, 0.3})), PhasePoint::origin()), ref, 1e-12);
    EXPECT_NEAR(ref, -1.03e-2, 1e-4);
}

TEST(OptimizeEq1, CoherentHasNoViolation) {
    PhaseSpaceState coherent(coherent_matrix({0.5, 0.0}, 30));
    const auto opt = optimize_eq1(coherent);
    EXPECT_NEAR(opt.value, 0.0, 1e-8);
}

TEST(OptimizeEq1, SinglePhoton) {
    const auto opt = optimize_eq1(PhaseSpaceState(spats_dist(0.0)));
    EXPECT_LT(opt.value, -1e-3);
    EXPECT_TRUE(opt.converged);
}

// Collinear pairs on the real axis with midpoint m and half-separation h:
// eq1 = (2/pi)^2 e^{-4m^2-4h^2} [8 eta h^2 (a + 4 eta m^2) + 16 eta^2 h^4 - 64 eta^2 m^2 h^2], a = 1 - 2 eta.
// It reduces to the (0, d) family at m = h = d/2.
double eq1_collinear(double eta, double m, double h) {
    const double a = 1.0 - 2.0 * eta;
    const double bracket =
        8.0 * eta * h * h * (a + 4.0 * eta * m * m) + 16.0 * eta * eta * std::pow(h, 4) - 64.0 * eta * eta * m * m * h * h;
    return std::pow(2.0 / kPi, 2) * std::exp(-4.0 * m * m - 4.0 * h * h) * bracket;
}

TEST(OptimizeEq1, CollinearClosedFormAgreesWithEvaluator) {
    PhaseSpaceState s(apply_loss(spats_dist(0.0), 0.25));
    for (double m : {0.0, 0.3, 0.9}) {
        for (double h : {0.1, 0.5, 1.2}) {
            const double got = eq1_value(s, PhasePoint(m + h, 0.0), PhasePoint(m - h, 0.0));
            EXPECT_NEAR(got, eq1_collinear(0.25, m, h), 1e-14);
        }
    }
    EXPECT_NEAR(eq1_collinear(0.25, 0.6, 0.6), eq1_single_photon(0.25, 1.2), 1e-15);
}

TEST(OptimizeEq1, LossySinglePhotonMatchesCollinearOptimum) {
    constexpr double eta = 0.25;
    double best = 0.0;
    for (double m = 0.0; m < 3.0; m += 0.002) {
        for (double h = 0.002; h < 3.0; h += 0.002) {
            best = std::min(best, eq1_collinear(eta, m, h));
        }
    }
    ASSERT_LT(best, 0.0);
    const auto opt = optimize_eq1(PhaseSpaceState(apply_loss(spats_dist(0.0), eta)));
    EXPECT_LT(opt.value, 0.0);
    EXPECT_NEAR(opt.value / best, 1.0, 0.05);
}

TEST(Eq2Optimum, Examples) {
    const auto spats = eq2_optimal_point(PhaseSpaceState(lossy_spats({0.98, 0.3})));
    EXPECT_LT(spats.point.radius(), 1e-9);
    const auto vac = eq2_optimal_point(PhaseSpaceState(thermal_dist(0.0)));
    EXPECT_EQ(vac.point, PhasePoint::origin());
    EXPECT_NEAR(vac.value, 0.0, 1e-12);
    const auto coh = eq2_optimal_point(PhaseSpaceState(coherent_matrix({1.0, 0.0}, 30)));
    EXPECT_NEAR(std::abs(coh.point.alpha() - std::complex<double>(1.0, 0.0)), 0.0, 1e-9);
    EXPECT_NEAR(coh.value, 0.0, 1e-10);
}

TEST(WignerMin, SinglePhoton) {
    const auto m = wigner_min(PhaseSpaceState(spats_dist(0.0)));
    EXPECT_NEAR(m.value, -2.0 / kPi, 1e-12);
    EXPECT_LT(m.point.radius(), 1e-6);
}

TEST(WignerMin, LossySinglePhotonBelowHalfIsPositive) {
    const auto m = wigner_min(PhaseSpaceState(apply_loss(spats_dist(0.0), 0.4)));
    EXPECT_GT(m.value, 0.0);
}

TEST(Mandel, CertifierValue) {
    EXPECT_EQ(mandel_certifier_value(thermal_dist(0.0)), 0.0);
    EXPECT_NEAR(mandel_certifier_value(apply_loss(spats_dist(0.0), 0.3)), -0.3, 1e-14);
}

// Property: classical states never produce a negative certifier value.
TEST(ClassicalSafety, ThermalAndCoherentStates) {
    for (double nbar : {0.0, 0.2, 1.0, 2.5}) {
        PhaseSpaceState thermal(thermal_dist(nbar));
        for (auto kind : all_certifiers()) {
            EXPECT_GE(evaluate_certifier(kind, thermal).value, -1e-10) << certifier_name(kind) << " " << nbar;
        }
    }
    for (std::complex<double> beta : {std::complex<double>(0.5, 0.0), std::complex<double>(-0.8, 1.1)}) {
        PhaseSpaceState coherent(coherent_matrix(beta, 40));
        for (auto kind : all_certifiers()) {
            EXPECT_GE(evaluate_certifier(kind, coherent).value, -1e-10) << certifier_name(kind);
        }
    }
}

TEST(AnalyticReports, ThermalOnlyIsUndetected) {
    for (double nbar : {0.0, 0.98, 2.0}) {
        for (double eta : {0.1, 0.5, 1.0}) {
            for (const auto &r : analytic_certificates({nbar, eta}, all_certifiers(), 2.0, false)) {
                EXPECT_FALSE(r.detected) << certifier_name(r.kind);
                EXPECT_EQ(r.sigma, 0.0);
            }
        }
    }
}

TEST(AnalyticReports, PointCounts) {
    const auto reports = analytic_certificates({0.98, 0.3}, all_certifiers(), 2.0, true);
    ASSERT_EQ(reports.size(), 4u);
    EXPECT_EQ(reports[0].points.size(), 2u);
    EXPECT_EQ(reports[1].points.size(), 1u);
    EXPECT_EQ(reports[2].points.size(), 1u);
    EXPECT_EQ(reports[3].points.size(), 0u);
    EXPECT_TRUE(reports[1].detected);
    EXPECT_NEAR(reports[1].value, -1.03e-2, 1e-4);
}

TEST(CriticalEta, Examples) {
    for (double nbar : {0.0, 0.98, 2.0}) {
        const auto r = critical_eta(CertifierKind::WignerNegativity, nbar);
        ASSERT_EQ(r.status, ThresholdStatus::Found);
        EXPECT_NEAR(r.eta, 0.5, 1e-3);
    }
    EXPECT_EQ(critical_eta(CertifierKind::WignerVsQ, 0.0).status, ThresholdStatus::DetectsEverywhere);
    // Sign change of Phi(1 - 2 eta) - Phi(1 - eta)^2.
    auto g = [](double eta) { return oracle::pgf(0.98, eta, -1.0) - std::pow(oracle::pgf(0.98, eta, 0.0), 2); };
    EXPECT_GT(g(0.15), 0.0);
    EXPECT_LT(g(0.17), 0.0);
    const auto eq2 = critical_eta(CertifierKind::WignerVsQ, 0.98);
    ASSERT_EQ(eq2.status, ThresholdStatus::Found);
    EXPECT_GT(eq2.eta, 0.15);
    EXPECT_LT(eq2.eta, 0.17);
    EXPECT_EQ(critical_eta(CertifierKind::MandelQ, 1.0).status, ThresholdStatus::DetectsNowhere);
}

TEST(Region, ReferencePoints) {
    const auto only = classify_state({1.2, 0.45}, all_certifiers());
    EXPECT_GT(only.mandel, 0.0);
    EXPECT_GE(only.wmin, 0.0);
    EXPECT_LT(only.eq2, 0.0);
    EXPECT_EQ(only.label, RegionLabel::DetectedOnlyByInequality);
    EXPECT_NEAR(oracle::pgf(1.2, 0.45, -1.0), 0.0231, 1e-4);
    EXPECT_NEAR(std::pow(oracle::pgf(1.2, 0.45, 0.0), 2), 0.0538, 1e-4);

    const auto all = classify_state({0.0, 0.8}, all_certifiers());
    EXPECT_LT(all.eq1, 0.0);
    EXPECT_LT(all.eq2, 0.0);
    EXPECT_LT(all.wmin, 0.0);
    EXPECT_LT(all.mandel, 0.0);
    EXPECT_EQ(all.label, RegionLabel::DetectedByBaselines);

    const auto none = classify_state({3.0, 0.02}, all_certifiers());
    EXPECT_GE(none.eq2, 0.0);
    EXPECT_GE(none.mandel, 0.0);
    EXPECT_EQ(none.label, RegionLabel::Undetected);
}

TEST(Region, ScanShapeAndErrors) {
    const std::vector<double> nbar{0.5, 1.2};
    const std::vector<double> eta{0.45};
    const auto map = region_scan(nbar, eta, all_certifiers());
    EXPECT_EQ(map.cells.size(), 2u);
    EXPECT_EQ(map.at(1, 0).label, RegionLabel::DetectedOnlyByInequality);
    EXPECT_THROW(region_scan(std::vector<double>{}, eta, all_certifiers()), DomainError);
}

}  // namespace
}  // namespace phasecert
