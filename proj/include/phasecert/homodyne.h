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

#ifndef PHASECERT_HOMODYNE_H
#define PHASECERT_HOMODYNE_H

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "phasecert/fock.h"

namespace phasecert {

/// One phase-randomized homodyne event: local-oscillator phase in [0, pi) and quadrature value.
struct QuadratureRecord {
    double theta = 0.0;
    double x = 0.0;
    bool operator==(const QuadratureRecord &) const = default;
};

struct DatasetMeta {
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::optional<StateParams> nominal;
    std::optional<int> bin_hint;
    bool operator==(const DatasetMeta &) const = default;
};

struct QuadratureDataset {
    std::vector<QuadratureRecord> records;
    DatasetMeta meta;
    bool operator==(const QuadratureDataset &) const = default;
};

/// Support bound 5 sqrt(2<n> + 1) + 2 used for sampling and binning.
double quadrature_range(double mean_photon_number);

/// Phase-averaged quadrature density sum_n p_n psi_n(x)^2.
double quad_pdf(const PhotonNumberDistribution &dist, double x);

/// Draws `count` phase-randomized records; theta uniform on [0, pi), x by tabulated inverse CDF
/// (4096 nodes on [-x_max, x_max], monotone cubic). Fully determined by `seed`.
QuadratureDataset sample(const PhotonNumberDistribution &dist, std::size_t count, std::uint64_t seed,
                         std::optional<StateParams> nominal = std::nullopt);

/// Phase-resolved records of the coherent state |beta>: x ~ N(sqrt(2) Re(beta e^{-i theta}), 1/2).
QuadratureDataset sample_coherent(std::complex<double> beta, std::size_t count, std::uint64_t seed);

/// "# quadrature-v1 count=<N> seed=<S> nbar=<..> eta=<..>" then "theta,x" lines.
void write_dataset(const QuadratureDataset &ds, std::ostream &out);
void write_dataset(const QuadratureDataset &ds, const std::filesystem::path &path);

/// Throws ParseError (with 1-based line number) on malformed input.
QuadratureDataset read_dataset(std::istream &in);
QuadratureDataset read_dataset(const std::filesystem::path &path);

}  // namespace phasecert

#endif
