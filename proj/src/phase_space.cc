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

#include "phasecert/phase_space.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "phasecert/errors.h"
#include "phasecert/numerics.h"

namespace phasecert {
namespace {

constexpr double kImagFail = 1e-8;
// |alpha|^2 below which the recurrence's Gaussian seed stays well above underflow.
constexpr double kRecurrenceRadius2 = 300.0;

}  // namespace

PhasePoint::PhasePoint(std::complex<double> alpha, double alpha_max) : alpha_(alpha) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw DomainError("phase-space point has non-finite components");
    }
    if (std::abs(alpha) > alpha_max) {
        std::ostringstream msg;
        msg << "phase-space point |alpha| = " << std::abs(alpha) << " exceeds the domain bound " << alpha_max;
        throw DomainError(msg.str());
    }
}

double wigner_diag(const PhotonNumberDistribution &dist, const PhasePoint &pt) {
    const double x = 4.0 * std::norm(pt.alpha());
    const auto probs = dist.probs();
    // L_{n+1} = ((2n+1-x) L_n - n L_{n-1}) / (n+1), folded into the sum as we go.
    double prev = 0.0;
    double cur = 1.0;
    double sum = probs[0];
    double sign = 1.0;
    for (std::size_t n = 0; n + 1 < probs.size(); ++n) {
        double nd = static_cast<double>(n);
        double next = ((2.0 * nd + 1.0 - x) * cur - nd * prev) / (nd + 1.0);
        prev = cur;
        cur = next;
        sign = -sign;
        sum += sign * probs[n + 1] * cur;
    }
    return (2.0 / std::numbers::pi) * std::exp(-0.5 * x) * sum;
}

double husimi_diag(const PhotonNumberDistribution &dist, const PhasePoint &pt) {
    const double r2 = std::norm(pt.alpha());
    const auto probs = dist.probs();
    double term = std::exp(-r2);
    double sum = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        sum += probs[n] * term;
        term *= r2 / static_cast<double>(n + 1);
    }
    return sum / std::numbers::pi;
}

namespace {

// Direct Laguerre form with log-space magnitudes; used where the Gaussian prefactor underflows.
std::complex<double> wigner_full_log(const FockDensityMatrix &rho, const PhasePoint &pt) {
    const std::size_t dim = rho.cutoff() + 1;
    const std::complex<double> alpha = pt.alpha();
    const double r = std::abs(alpha);
    const double x = 4.0 * r * r;
    const double phase = std::arg(alpha);
    std::vector<double> lag(dim);
    std::complex<double> total = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        if (k > 0 && r == 0.0) {
            break;
        }
        const std::size_t count = dim - k;
        laguerre_row(count - 1, static_cast<double>(k), x, lag);
        // (2 alpha^*)^k carries phase e^{-i k arg(alpha)}.
        const std::complex<double> rotation = std::polar(1.0, -static_cast<double>(k) * phase);
        const double log_radial = k == 0 ? 0.0 : static_cast<double>(k) * std::log(2.0 * r);
        for (std::size_t n = 0; n < count; ++n) {
            const std::size_t m = n + k;
            double log_mag = log_radial + 0.5 * (std::lgamma(static_cast<double>(n) + 1.0) -
                                                 std::lgamma(static_cast<double>(m) + 1.0)) -
                             0.5 * x;
            double mag = std::exp(log_mag) * lag[n] * ((n % 2 == 0) ? 1.0 : -1.0);
            std::complex<double> kernel = mag * rotation;
            total += rho(m, n) * kernel;
            if (k > 0) {
                total += rho(n, m) * std::conj(kernel);
            }
        }
    }
    return total;
}

// Kernels f_{m,n} (m >= n) multiplying rho(m, n), without the 2/pi:
// f_{m,0} = e^{-2|a|^2} (2 a^*)^m / sqrt(m!),  f_{m,n} = (2 a f_{m,n-1} - sqrt(m) f_{m-1,n-1}) / sqrt(n).
// Pure multiply-adds, one column at a time.
std::complex<double> wigner_full_recurrence(const FockDensityMatrix &rho, const PhasePoint &pt) {
    const std::size_t dim = rho.cutoff() + 1;
    const std::complex<double> alpha = pt.alpha();
    const std::complex<double> two_alpha = 2.0 * alpha;
    const std::complex<double> two_conj = 2.0 * std::conj(alpha);
    std::vector<double> root(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        root[m] = std::sqrt(static_cast<double>(m));
    }
    std::vector<std::complex<double>> col(dim);
    col[0] = std::exp(-2.0 * std::norm(alpha));
    for (std::size_t m = 1; m < dim; ++m) {
        col[m] = two_conj * col[m - 1] / root[m];
    }
    std::complex<double> total = 0.0;
    for (std::size_t n = 0; n < dim; ++n) {
        if (n > 0) {
            // Descending m keeps col[m - 1] at the previous column when it is read.
            for (std::size_t m = dim - 1; m >= n; --m) {
                col[m] = (two_alpha * col[m] - root[m] * col[m - 1]) / root[n];
            }
        }
        total += rho(n, n) * col[n];
        for (std::size_t m = n + 1; m < dim; ++m) {
            total += rho(m, n) * col[m] + rho(n, m) * std::conj(col[m]);
        }
    }
    return total;
}

}  // namespace

double wigner_full(const FockDensityMatrix &rho, const PhasePoint &pt) {
    // e^{-2|a|^2} underflows near |a| = 18; the log-space form handles larger radii.
    std::complex<double> total =
        std::norm(pt.alpha()) < kRecurrenceRadius2 ? wigner_full_recurrence(rho, pt) : wigner_full_log(rho, pt);
    total *= 2.0 / std::numbers::pi;
    if (std::abs(total.imag()) > kImagFail) {
        std::ostringstream msg;
        msg << "Wigner sum has imaginary residue " << total.imag() << "; is the density matrix Hermitian?";
        throw NumericalConsistencyError(msg.str());
    }
    return total.real();
}

double husimi_full(const FockDensityMatrix &rho, const PhasePoint &pt) {
    const Eigen::Index dim = static_cast<Eigen::Index>(rho.cutoff()) + 1;
    const std::complex<double> alpha = pt.alpha();
    Eigen::VectorXcd amp(dim);
    amp(0) = std::exp(-0.5 * std::norm(alpha));
    for (Eigen::Index n = 0; n + 1 < dim; ++n) {
        amp(n + 1) = amp(n) * alpha / std::sqrt(static_cast<double>(n + 1));
    }
    // <alpha|n> = conj(amp_n).
    std::complex<double> value = amp.dot(rho.entries() * amp);
    if (std::abs(value.imag()) > kImagFail) {
        std::ostringstream msg;
        msg << "Husimi sum has imaginary residue " << value.imag();
        throw NumericalConsistencyError(msg.str());
    }
    return value.real() / std::numbers::pi;
}

double wigner_norm_check(const PhotonNumberDistribution &dist, double alpha_max) {
    auto radial = [&](double r) {
        return wigner_diag(dist, PhasePoint(r, 0.0, alpha_max)) * r;
    };
    double total = 0.0;
    for (double lo = 0.0; lo < alpha_max; lo += 0.5) {
        total += integrate(radial, lo, std::min(lo + 0.5, alpha_max), 1e-13);
    }
    return 2.0 * std::numbers::pi * total;
}

PhaseSpaceState::PhaseSpaceState(PhotonNumberDistribution dist)
    : dist_(dist), photon_numbers_(std::move(dist)) {
}

PhaseSpaceState::PhaseSpaceState(FockDensityMatrix rho) : photon_numbers_(rho.diagonal()) {
    if (rho.is_diagonal()) {
        dist_ = photon_numbers_;
    } else {
        rho_ = std::move(rho);
    }
}

double PhaseSpaceState::wigner(const PhasePoint &pt) const {
    return dist_ ? wigner_diag(*dist_, pt) : wigner_full(*rho_, pt);
}

double PhaseSpaceState::husimi(const PhasePoint &pt) const {
    return dist_ ? husimi_diag(*dist_, pt) : husimi_full(*rho_, pt);
}

}  // namespace phasecert
