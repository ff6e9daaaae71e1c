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

#ifndef PHASECERT_FOCK_H
#define PHASECERT_FOCK_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace phasecert {

/// Largest probability mass a constructor may drop when truncating the Fock basis.
inline constexpr double kTailTolerance = 1e-10;

/// Thermal mean photon number and detection efficiency of a lossy photon-added thermal state.
struct StateParams {
    double nbar = 0.0;
    double eta = 1.0;

    /// Throws DomainError unless nbar >= 0 and 0 <= eta <= 1.
    void validate() const;
    bool operator==(const StateParams &) const = default;
};

/// Truncated photon-number distribution p_0..p_N.
///
/// Entries are nonnegative and sum to a value in [1 - 1e-10, 1]. The class never renormalizes;
/// constructors that truncate an infinite distribution pick N so the dropped tail is below
/// kTailTolerance.
class PhotonNumberDistribution {
   public:
    explicit PhotonNumberDistribution(std::vector<double> probs);

    std::span<const double> probs() const {
        return probs_;
    }
    /// Probability of n photons; zero above the cutoff.
    double operator[](std::size_t n) const {
        return n < probs_.size() ? probs_[n] : 0.0;
    }
    std::size_t cutoff() const {
        return probs_.size() - 1;
    }
    double total() const;

    /// Copy zero-padded (or tail-merged, never) to a larger cutoff.
    PhotonNumberDistribution padded(std::size_t cutoff) const;

    bool operator==(const PhotonNumberDistribution &) const = default;

   private:
    std::vector<double> probs_;
};

/// Truncated Fock-basis density matrix rho_{mn}.
class FockDensityMatrix {
   public:
    explicit FockDensityMatrix(Eigen::MatrixXcd entries);

    const Eigen::MatrixXcd &entries() const {
        return entries_;
    }
    std::complex<double> operator()(std::size_t m, std::size_t n) const {
        return entries_(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    }
    std::size_t cutoff() const {
        return static_cast<std::size_t>(entries_.rows()) - 1;
    }
    /// True when every off-diagonal magnitude is at most `tol`.
    bool is_diagonal(double tol = 0.0) const;
    PhotonNumberDistribution diagonal() const;

   private:
    Eigen::MatrixXcd entries_;
};

/// 20 + ceil(12 (nbar + 1)).
std::size_t default_cutoff_hint(double nbar);

PhotonNumberDistribution thermal_dist(double nbar, std::size_t cutoff_hint);
PhotonNumberDistribution thermal_dist(double nbar);

/// Photon-added thermal state N a^dag rho_th a, p_{k+1} = (k+1) nbar^k / (nbar+1)^{k+2}.
PhotonNumberDistribution spats_dist(double nbar, std::size_t cutoff_hint);
PhotonNumberDistribution spats_dist(double nbar);

/// Binomial loss channel with survival probability eta.
PhotonNumberDistribution apply_loss(const PhotonNumberDistribution &dist, double eta);

/// apply_loss(spats_dist(params.nbar), params.eta).
PhotonNumberDistribution lossy_spats(const StateParams &params);

/// Closed-form generating function sum_m p_m z^m of the lossy photon-added thermal state.
double pgf_eval(const StateParams &params, double z);

double mean_photon(const PhotonNumberDistribution &dist);
double photon_variance(const PhotonNumberDistribution &dist);

/// Var(n)/<n> - 1. Throws UndefinedValueError for a zero-mean (vacuum) distribution.
double mandel_q(const PhotonNumberDistribution &dist);

/// |beta><beta| truncated at `cutoff`. Throws TruncationError if the kept trace is below 1 - 1e-10.
FockDensityMatrix coherent_matrix(std::complex<double> beta, std::size_t cutoff);
FockDensityMatrix diag_to_matrix(const PhotonNumberDistribution &dist);

}  // namespace phasecert

#endif
