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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles.h"
#include "phasecert/errors.h"
#include "phasecert/homodyne.h"
#include "phasecert/numerics.h"
#include "phasecert/phase_space.h"

namespace phasecert {
namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

// Marginal of W over p; d^2 alpha = dx dp / 2 in these coordinates.
double wigner_marginal(const PhotonNumberDistribution &d, double x) {
    auto f = [&](double p) { return 0.5 * wigner_diag(d, PhasePoint(x / std::sqrt(2.0), p / std::sqrt(2.0))); };
    return integrate(f, -10.0, 10.0, 1e-13);
}

TEST(QuadPdf, FockExamples) {
    const auto vac = thermal_dist(0.0);
    const auto one = spats_dist(0.0);
    for (double x : {-2.0, -0.3, 0.0, 1.1}) {
        EXPECT_NEAR(quad_pdf(vac, x), std::exp(-x * x) / kSqrtPi, 1e-15);
        EXPECT_NEAR(quad_pdf(one, x), 2.0 * x * x * std::exp(-x * x) / kSqrtPi, 1e-15);
    }
    EXPECT_EQ(quad_pdf(one, 0.0), 0.0);
}

TEST(QuadPdf, SpatsAtOriginIsEvenSum) {
    const auto d = lossy_spats({0.98, 0.3});
    double ref = 0.0;
    for (std::size_t n = 0; n <= d.cutoff() && n <= 80; n += 2) {
        ref += d[n] * oracle::fock_quadrature_density(static_cast<int>(n), 0.0);
    }
    EXPECT_NEAR(quad_pdf(d, 0.0), ref, 1e-13);
}

// Convention lock: the sampler's density is the p-marginal of the Wigner function.
TEST(QuadPdf, EqualsWignerMarginal) {
    for (const auto &d : {thermal_dist(0.0), spats_dist(0.0), lossy_spats({0.98, 0.3})}) {
        for (double x : {-1.7, 0.0, 0.6, 2.2}) {
            EXPECT_NEAR(quad_pdf(d, x), wigner_marginal(d, x), 1e-6) << x;
        }
    }
}

TEST(QuadPdf, Normalized) {
    const auto d = lossy_spats({2.0, 0.8});
    const double r = quadrature_range(mean_photon(d));
    EXPECT_NEAR(integrate([&](double x) { return quad_pdf(d, x); }, -r, r, 1e-12), 1.0, 1e-10);
}

TEST(Sample, VacuumVariance) {
    const auto ds = sample(thermal_dist(0.0), 1000000, 11);
    double s = 0.0, s2 = 0.0;
    for (const auto &r : ds.records) {
        s += r.x;
        s2 += r.x * r.x;
    }
    const double n = static_cast<double>(ds.records.size());
    EXPECT_NEAR(s2 / n - std::pow(s / n, 2), 0.5, 0.003);
}

TEST(Sample, SinglePhotonSecondMoment) {
    const auto ds = sample(spats_dist(0.0), 1000000, 12);
    double s2 = 0.0;
    for (const auto &r : ds.records) {
        s2 += r.x * r.x;
    }
    EXPECT_NEAR(s2 / static_cast<double>(ds.records.size()), 1.5, 0.005);
}

TEST(Sample, KolmogorovSmirnov) {
    const auto d = lossy_spats({0.98, 0.3});
    const std::size_t n = 200000;
    const auto ds = sample(d, n, 13);
    std::vector<double> xs;
    xs.reserve(n);
    double theta_max = 0.0;
    for (const auto &r : ds.records) {
        xs.push_back(r.x);
        EXPECT_GE(r.theta, 0.0);
        theta_max = std::max(theta_max, r.theta);
    }
    EXPECT_LT(theta_max, std::numbers::pi);
    std::sort(xs.begin(), xs.end());
    const double lo = -quadrature_range(mean_photon(d));
    double cdf = 0.0;
    double prev = lo;
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; i += 97) {
        cdf += integrate([&](double x) { return quad_pdf(d, x); }, prev, xs[i], 1e-10);
        prev = xs[i];
        const double emp_hi = static_cast<double>(i + 1) / static_cast<double>(n);
        const double emp_lo = static_cast<double>(i) / static_cast<double>(n);
        dmax = std::max({dmax, std::abs(emp_hi - cdf), std::abs(emp_lo - cdf)});
    }
    // 1% critical value of the KS statistic.
    EXPECT_LT(dmax, 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST(Sample, PhaseIsUniform) {
    const auto ds = sample(thermal_dist(0.5), 160000, 14);
    std::vector<double> counts(16, 0.0);
    for (const auto &r : ds.records) {
        counts[static_cast<std::size_t>(r.theta / std::numbers::pi * 16.0)] += 1.0;
    }
    double chi2 = 0.0;
    for (double c : counts) {
        chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
    }
    EXPECT_LT(chi2, 37.7);  // 0.1% tail of chi-square with 15 dof
}

TEST(Sample, DeterministicAndSeedSensitive) {
    const auto d = lossy_spats({0.5, 0.5});
    const auto a = sample(d, 5000, 7);
    const auto b = sample(d, 5000, 7);
    const auto c = sample(d, 5000, 8);
    EXPECT_EQ(a, b);
    EXPECT_NE(a.records, c.records);
    EXPECT_EQ(a.meta.count, 5000u);
    const double bound = quadrature_range(mean_photon(d));
    for (const auto &r : a.records) {
        EXPECT_LE(std::abs(r.x), bound);
    }
}

TEST(SampleCoherent, MeanFollowsPhase) {
    const std::complex<double> beta(1.5, 0.0);
    const auto ds = sample_coherent(beta, 200000, 21);
    double resid = 0.0, resid2 = 0.0;
    for (const auto &r : ds.records) {
        const double mean = std::sqrt(2.0) * std::real(beta * std::exp(std::complex<double>(0.0, -r.theta)));
        resid += r.x - mean;
        resid2 += (r.x - mean) * (r.x - mean);
    }
    const double n = static_cast<double>(ds.records.size());
    EXPECT_NEAR(resid / n, 0.0, 0.01);
    EXPECT_NEAR(resid2 / n, 0.5, 0.01);
}

TEST(DatasetIo, RoundTripStreamAndFile) {
    auto ds = sample(lossy_spats({0.98, 0.3}), 1000, 3, StateParams{0.98, 0.3});
    std::stringstream buf;
    write_dataset(ds, buf);
    EXPECT_EQ(read_dataset(buf), ds);

    ds.meta.nominal.reset();
    ds.meta.bin_hint = 64;
    const auto path = std::filesystem::temp_directory_path() / "phasecert_roundtrip.txt";
    write_dataset(ds, path);
    EXPECT_EQ(read_dataset(path), ds);
    std::filesystem::remove(path);
}

int parse_error_line(const std::string &text) {
    std::istringstream in(text);
    try {
        read_dataset(in);
    } catch (const ParseError &e) {
        return e.line();
    }
    return -1;
}

TEST(DatasetIo, ParseErrors) {
    EXPECT_EQ(parse_error_line(""), 1);
    {
        std::istringstream in("");
        try {
            read_dataset(in);
            FAIL();
        } catch (const ParseError &e) {
            EXPECT_NE(std::string(e.what()).find("missing header"), std::string::npos);
        }
    }
    const std::string header = "# quadrature-v1 count=2 seed=1 nbar=na eta=na\n";
    EXPECT_EQ(parse_error_line(header + "0.1,0.2\n0.3,nan\n"), 3);
    EXPECT_EQ(parse_error_line(header + "0.1,0.2\n0.3,abc\n"), 3);
    EXPECT_EQ(parse_error_line(header + "0.1,0.2\n"), 2);
    EXPECT_EQ(parse_error_line(header + "0.1,0.2\n0.3,0.4\n0.5,0.6\n"), 4);
    EXPECT_EQ(parse_error_line(header + "3.5,0.2\n0.3,0.4\n"), 2);
    EXPECT_EQ(parse_error_line("# quadrature-v1 count=x seed=1\n"), 1);
    EXPECT_EQ(parse_error_line("theta,x\n0.1,0.2\n"), 1);
    EXPECT_EQ(parse_error_line(header + "0.1,0.2\n0.3,0.4\n"), -1);
}

TEST(DatasetIo, PathErrorsNameTheFile) {
    const auto path = std::filesystem::temp_directory_path() / "phasecert_bad.txt";
    {
        std::ofstream f(path);
        f << "# quadrature-v1 count=1 seed=1 nbar=na eta=na\nnot-a-number,1\n";
    }
    try {
        read_dataset(path);
        FAIL();
    } catch (const ParseError &e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("phasecert_bad.txt"), std::string::npos) << what;
        EXPECT_NE(what.find("line 2"), std::string::npos) << what;
    }
    std::filesystem::remove(path);
}

}  // namespace
}  // namespace phasecert
