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

#include "phasecert/fock.h"

#include <cmath>
#include <numeric>
#include <sstream>

#include "phasecert/errors.h"
#include "phasecert/numerics.h"

namespace phasecert {
namespace {

constexpr double kSumSlack = 1e-12;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kDiagonalFloor = -1e-14;
constexpr std::size_t kMaxCutoff = 20000;

void check_nbar(double nbar) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        std::ostringstream msg;
        msg << "thermal mean photon number must be finite and >= 0, got " << nbar;
        throw DomainError(msg.str());
    }
}

void check_eta(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        std::ostringstream msg;
        msg << "efficiency must lie in [0, 1], got " << eta;
        throw DomainError(msg.str());
    }
}

}  // namespace

void StateParams::validate() const {
    check_nbar(nbar);
    check_eta(eta);
}

PhotonNumberDistribution::PhotonNumberDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw DomainError("photon-number distribution needs at least one entry");
    }
    if (probs_.size() == 1) {
        probs_.push_back(0.0);
    }
    double sum = 0.0;
    for (std::size_t n = 0; n < probs_.size(); ++n) {
        if (!(probs_[n] >= 0.0) || !std::isfinite(probs_[n])) {
            std::ostringstream msg;
            msg << "photon-number probability p_" << n << " = " << probs_[n] << " is not a nonnegative number";
            throw DomainError(msg.str());
        }
        sum += probs_[n];
    }
    if (sum < 1.0 - kTailTolerance || sum > 1.0 + kSumSlack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "photon-number distribution sums to " << sum << ", outside [1 - 1e-10, 1]";
        throw DomainError(msg.str());
    }
}

double PhotonNumberDistribution::total() const {
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

PhotonNumberDistribution PhotonNumberDistribution::padded(std::size_t cutoff) const {
    std::vector<double> out = probs_;
    if (out.size() < cutoff + 1) {
        out.resize(cutoff + 1, 0.0);
    }
    return PhotonNumberDistribution(std::move(out));
}

FockDensityMatrix::FockDensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw DomainError("density matrix must be square and nonempty");
    }
    const Eigen::Index dim = entries_.rows();
    std::complex<double> trace = 0.0;
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index n = m; n < dim; ++n) {
            if (std::abs(entries_(m, n) - std::conj(entries_(n, m))) > kHermitianTolerance) {
                std::ostringstream msg;
                msg << "density matrix is not Hermitian at (" << m << ", " << n << ")";
                throw DomainError(msg.str());
            }
        }
        if (entries_(m, m).real() < kDiagonalFloor) {
            std::ostringstream msg;
            msg << "density matrix has negative population " << entries_(m, m).real() << " at n = " << m;
            throw DomainError(msg.str());
        }
        trace += entries_(m, m);
    }
    if (trace.real() < 1.0 - kTailTolerance || trace.real() > 1.0 + kSumSlack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "density matrix trace " << trace.real() << " outside [1 - 1e-10, 1]";
        throw DomainError(msg.str());
    }
}

bool FockDensityMatrix::is_diagonal(double tol) const {
    const Eigen::Index dim = entries_.rows();
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index n = 0; n < dim; ++n) {
            if (m != n && std::abs(entries_(m, n)) > tol) {
                return false;
            }
        }
    }
    return true;
}

PhotonNumberDistribution FockDensityMatrix::diagonal() const {
    std::vector<double> probs(static_cast<std::size_t>(entries_.rows()));
    for (std::size_t n = 0; n < probs.size(); ++n) {
        probs[n] = std::max(0.0, entries_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real());
    }
    return PhotonNumberDistribution(std::move(probs));
}

namespace {

// Tail mass weighted by a generous estimate of the tail's second moment, so that truncation
// leaves means and variances accurate to the same tolerance as the total.
double tail_moment_bound(double tail_mass, std::size_t cutoff, double ratio) {
    const double reach = static_cast<double>(cutoff) + 1.0 + 3.0 / (1.0 - ratio);
    return tail_mass * std::max(1.0, reach * reach);
}

}  // namespace

std::size_t default_cutoff_hint(double nbar) {
    check_nbar(nbar);
    return 20 + static_cast<std::size_t>(std::ceil(12.0 * (nbar + 1.0)));
}

PhotonNumberDistribution thermal_dist(double nbar, std::size_t cutoff_hint) {
    check_nbar(nbar);
    const double ratio = nbar / (nbar + 1.0);
    // Tail beyond index N is ratio^{N+1}.
    std::size_t cutoff = std::max<std::size_t>(cutoff_hint, 1);
    while (tail_moment_bound(std::pow(ratio, static_cast<double>(cutoff + 1)), cutoff, ratio) >= kTailTolerance) {
        if (++cutoff > kMaxCutoff) {
            throw TruncationError("thermal distribution needs a cutoff above 20000");
        }
    }
    std::vector<double> probs(cutoff + 1, 0.0);
    double term = 1.0 / (nbar + 1.0);
    for (std::size_t k = 0; k <= cutoff; ++k) {
        probs[k] = term;
        term *= ratio;
    }
    return PhotonNumberDistribution(std::move(probs));
}

PhotonNumberDistribution thermal_dist(double nbar) {
    return thermal_dist(nbar, default_cutoff_hint(nbar));
}

PhotonNumberDistribution spats_dist(double nbar, std::size_t cutoff_hint) {
    check_nbar(nbar);
    const double ratio = nbar / (nbar + 1.0);
    const double scale = 1.0 / ((nbar + 1.0) * (nbar + 1.0));
    // Mass above index N (i.e. k >= N in p_{k+1}) is ratio^N [ratio + (N+1)(1 - ratio)].
    auto tail = [&](std::size_t cutoff) {
        double n = static_cast<double>(cutoff);
        return std::pow(ratio, n) * (ratio + (n + 1.0) * (1.0 - ratio));
    };
    std::size_t cutoff = std::max<std::size_t>(cutoff_hint, 1);
    while (tail_moment_bound(tail(cutoff), cutoff, ratio) >= kTailTolerance) {
        if (++cutoff > kMaxCutoff) {
            throw TruncationError("photon-added thermal distribution needs a cutoff above 20000");
        }
    }
    std::vector<double> probs(cutoff + 1, 0.0);
    double power = 1.0;
    for (std::size_t k = 0; k + 1 <= cutoff; ++k) {
        probs[k + 1] = static_cast<double>(k + 1) * power * scale;
        power *= ratio;
    }
    return PhotonNumberDistribution(std::move(probs));
}

PhotonNumberDistribution spats_dist(double nbar) {
    return spats_dist(nbar, default_cutoff_hint(nbar));
}

PhotonNumberDistribution apply_loss(const PhotonNumberDistribution &dist, double eta) {
    check_eta(eta);
    const std::size_t cutoff = dist.cutoff();
    std::vector<double> out(cutoff + 1, 0.0);
    if (eta == 1.0) {
        return dist;
    }
    if (eta == 0.0) {
        out[0] = dist.total();
        return PhotonNumberDistribution(std::move(out));
    }
    const double log_keep = std::log(eta);
    const double log_lose = std::log1p(-eta);
    for (std::size_t n = 0; n <= cutoff; ++n) {
        const double pn = dist[n];
        if (pn == 0.0) {
            continue;
        }
        const auto log_binom = log_binomial_row(n);
        for (std::size_t m = 0; m <= n; ++m) {
            double log_weight = log_binom[m] + static_cast<double>(m) * log_keep + static_cast<double>(n - m) * log_lose;
            out[m] += pn * std::exp(log_weight);
        }
    }
    return PhotonNumberDistribution(std::move(out));
}

PhotonNumberDistribution lossy_spats(const StateParams &params) {
    params.validate();
    return apply_loss(spats_dist(params.nbar), params.eta);
}

double pgf_eval(const StateParams &params, double z) {
    params.validate();
    if (!(std::abs(z) <= 1.0)) {
        throw DomainError("generating-function argument must satisfy |z| <= 1");
    }
    const double w = 1.0 - params.eta + params.eta * z;
    const double denom = params.nbar + 1.0 - params.nbar * w;
    return w / (denom * denom);
}

double mean_photon(const PhotonNumberDistribution &dist) {
    double mean = 0.0;
    const auto probs = dist.probs();
    for (std::size_t n = 0; n < probs.size(); ++n) {
        mean += static_cast<double>(n) * probs[n];
    }
    return mean;
}

double photon_variance(const PhotonNumberDistribution &dist) {
    // Central second moment, accumulated around the mean to limit cancellation.
    const double mean = mean_photon(dist);
    double var = 0.0;
    const auto probs = dist.probs();
    for (std::size_t n = 0; n < probs.size(); ++n) {
        double d = static_cast<double>(n) - mean;
        var += d * d * probs[n];
    }
    return var;
}

double mandel_q(const PhotonNumberDistribution &dist) {
    const double mean = mean_photon(dist);
    if (!(mean > 0.0)) {
        throw UndefinedValueError("Mandel Q is undefined for a zero-mean (vacuum) distribution");
    }
    return photon_variance(dist) / mean - 1.0;
}

FockDensityMatrix coherent_matrix(std::complex<double> beta, std::size_t cutoff) {
    const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) + 1;
    Eigen::VectorXcd amp(dim);
    amp(0) = std::exp(-0.5 * std::norm(beta));
    for (Eigen::Index m = 0; m + 1 < dim; ++m) {
        amp(m + 1) = amp(m) * beta / std::sqrt(static_cast<double>(m + 1));
    }
    double kept = amp.squaredNorm();
    if (kept < 1.0 - kTailTolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "coherent state |beta| = " << std::abs(beta) << " loses " << 1.0 - kept << " of its norm at cutoff "
            << cutoff;
        throw TruncationError(msg.str());
    }
    Eigen::MatrixXcd rho = amp * amp.adjoint();
    return FockDensityMatrix(std::move(rho));
}

FockDensityMatrix diag_to_matrix(const PhotonNumberDistribution &dist) {
    const auto probs = dist.probs();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(probs.size()),
                                                  static_cast<Eigen::Index>(probs.size()));
    for (std::size_t n = 0; n < probs.size(); ++n) {
        rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = probs[n];
    }
    return FockDensityMatrix(std::move(rho));
}

}  // namespace phasecert
