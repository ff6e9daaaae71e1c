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

#ifndef PHASECERT_TOMOGRAPHY_H
#define PHASECERT_TOMOGRAPHY_H

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phasecert/fock.h"
#include "phasecert/homodyne.h"

namespace phasecert {

struct BinningOptions {
    int n_bins = 256;
    /// 0 keeps the phase-averaged histogram; mle_full needs at least 8.
    int n_phase_bins = 0;
    /// Half-width of the binned interval. Defaults to the data-driven rule
    /// 5 sqrt(2 <n> + 1) + 2 with <n> = mean(x^2) - 1/2.
    std::optional<double> x_range;
};

/// Histogram of a quadrature dataset on uniform bins over [-x_max, x_max], optionally split
/// into equal phase bins on [0, pi). counts are stored x-bin major: counts[j * phase_bins + k].
struct BinnedData {
    std::vector<double> edges;
    std::size_t phase_bins = 0;
    std::vector<std::uint64_t> counts;
    std::vector<std::string> warnings;

    std::size_t x_bins() const {
        return edges.size() - 1;
    }
    std::size_t phase_slots() const {
        return phase_bins == 0 ? 1 : phase_bins;
    }
    std::uint64_t total() const;
};

/// Data-driven binning half-width.
double data_quadrature_range(const QuadratureDataset &ds);

/// Half-width that resolves every Fock state up to `cutoff` (POVM completeness).
double fock_support_range(std::size_t cutoff);

/// Throws DomainError for an empty dataset or n_bins < 16. Samples outside an explicit range
/// widen it (with a warning) rather than being dropped.
BinnedData bin_data(const QuadratureDataset &ds, const BinningOptions &options);
BinnedData bin_data(const QuadratureDataset &ds, int n_bins);

/// Pi[j][n] = integral of psi_n(x)^2 over x-bin j.
Eigen::MatrixXd diagonal_povm(const std::vector<double> &edges, std::size_t cutoff);

struct MleOptions {
    int max_iterations = 10000;
    /// Stop when the per-sample log-likelihood gain falls below this.
    double loglik_tolerance = 1e-10;
    /// Or when no entry changes by more than this, relative to its size.
    double relative_change_tolerance = 1e-7;
    /// Starting photon-number distribution (diagonal path); uniform when empty.
    std::optional<std::vector<double>> initial;
    /// Starting density matrix (full path); maximally mixed when empty.
    std::optional<Eigen::MatrixXcd> initial_matrix;
};

struct MleTrace {
    /// Mean log-likelihood per sample after each iteration; entry 0 is the starting point.
    std::vector<double> loglik_trace;
    int iterations = 0;
    bool converged = false;
};

struct DiagonalMleResult : MleTrace {
    PhotonNumberDistribution dist;
};

struct MatrixMleResult : MleTrace {
    FockDensityMatrix rho;
};

/// Expectation-maximization on the phase-averaged histogram:
/// p_n <- p_n sum_j (f_j / Pr_j) Pi_{j,n}. Throws CompletenessError when the bins do not cover
/// the truncated Fock space, or when the data reach beyond what Fock states <= cutoff support.
DiagonalMleResult mle_diagonal(const BinnedData &binned, std::size_t cutoff, const MleOptions &options = {});

/// EM core on an explicit POVM table (bins x Fock states) and per-bin weights.
DiagonalMleResult mle_diagonal_from_counts(const Eigen::MatrixXd &povm, const std::vector<double> &counts,
                                           const MleOptions &options);

/// Iterative R rho R reconstruction from phase-binned data, with projectors
/// |x, theta><x, theta| and <n|x, theta> = e^{i n theta} psi_n(x), averaged over each bin.
MatrixMleResult mle_full(const BinnedData &binned, std::size_t cutoff, const MleOptions &options = {});

struct ReconstructOptions {
    std::size_t cutoff = 30;
    int n_bins = 256;
    MleOptions mle;
};

/// bin_data over max(data range, Fock support range) followed by mle_diagonal.
DiagonalMleResult reconstruct(const QuadratureDataset &ds, const ReconstructOptions &options = {});

struct FitResult {
    StateParams params;
    /// Euclidean norm of (reconstruction - model).
    double residual = 0.0;
    bool model_mismatch = false;
};

/// Minimum cross-entropy fit of the lossy photon-added thermal model: 60 x 60 grid on
/// nbar in [0, 4], eta in [0, 1], then simplex refinement. `residual` stays the Euclidean
/// distance to the fitted model.
FitResult fit_params(const PhotonNumberDistribution &dist);

using DatasetPipeline = std::function<double(const QuadratureDataset &)>;

struct BootstrapResult {
    double value = 0.0;
    double sigma = 0.0;
    std::vector<double> samples;
};

/// Resamples the records with replacement at full size `n_resamples` times and returns the
/// mean and unbiased standard deviation of the pipeline outputs. Throws DomainError when
/// n_resamples < 2.
BootstrapResult bootstrap(const QuadratureDataset &ds, const DatasetPipeline &pipeline, int n_resamples = 50,
                          std::uint64_t seed = 0);

/// Same resampling for a pipeline with several outputs; one result per output.
std::vector<BootstrapResult> bootstrap_multi(const QuadratureDataset &ds,
                                             const std::function<std::vector<double>(const QuadratureDataset &)> &pipeline,
                                             int n_resamples = 50, std::uint64_t seed = 0);

/// Total-variation distance, padding the shorter distribution with zeros.
double total_variation(const PhotonNumberDistribution &a, const PhotonNumberDistribution &b);

}  // namespace phasecert

#endif
