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

#ifndef PHASECERT_PHASE_SPACE_H
#define PHASECERT_PHASE_SPACE_H

#include <complex>
#include <optional>
#include <variant>

#include "phasecert/fock.h"

namespace phasecert {

inline constexpr double kDefaultAlphaMax = 8.0;

/// Complex phase-space amplitude alpha = (x + i p) / sqrt(2); the vacuum has quadrature variance 1/2.
class PhasePoint {
   public:
    /// Throws DomainError for non-finite components or |alpha| > alpha_max.
    explicit PhasePoint(std::complex<double> alpha, double alpha_max = kDefaultAlphaMax);
    PhasePoint(double re, double im, double alpha_max = kDefaultAlphaMax)
        : PhasePoint(std::complex<double>(re, im), alpha_max) {
    }
    static PhasePoint origin() {
        return PhasePoint(0.0, 0.0);
    }

    std::complex<double> alpha() const {
        return alpha_;
    }
    double radius() const {
        return std::abs(alpha_);
    }
    bool operator==(const PhasePoint &) const = default;

   private:
    std::complex<double> alpha_;
};

/// W(alpha) of a phase-invariant state: (2/pi) e^{-2|a|^2} sum_n p_n (-1)^n L_n(4|a|^2).
double wigner_diag(const PhotonNumberDistribution &dist, const PhasePoint &pt);

/// Q(alpha) of a phase-invariant state: (1/pi) e^{-|a|^2} sum_n p_n |a|^{2n} / n!.
double husimi_diag(const PhotonNumberDistribution &dist, const PhasePoint &pt);

/// W(alpha) for a general Fock density matrix. Throws NumericalConsistencyError if the
/// symmetric sum keeps an imaginary part above 1e-8.
double wigner_full(const FockDensityMatrix &rho, const PhasePoint &pt);

/// Q(alpha) = <alpha|rho|alpha> / pi.
double husimi_full(const FockDensityMatrix &rho, const PhasePoint &pt);

/// 2 pi \int_0^{alpha_max} W(r) r dr for a phase-invariant state; 1 up to truncation and quadrature error.
double wigner_norm_check(const PhotonNumberDistribution &dist, double alpha_max = kDefaultAlphaMax);

/// A state whose phase-space functions can be evaluated: a photon-number distribution
/// (phase-invariant) or a full density matrix. Diagonal matrices use the diagonal kernels.
class PhaseSpaceState {
   public:
    PhaseSpaceState(PhotonNumberDistribution dist);  // NOLINT: implicit on purpose
    PhaseSpaceState(FockDensityMatrix rho);          // NOLINT

    bool is_phase_invariant() const {
        return dist_.has_value();
    }
    /// The photon-number distribution (the diagonal, for a matrix state).
    const PhotonNumberDistribution &photon_numbers() const {
        return photon_numbers_;
    }

    double wigner(const PhasePoint &pt) const;
    double husimi(const PhasePoint &pt) const;

   private:
    std::optional<PhotonNumberDistribution> dist_;
    std::optional<FockDensityMatrix> rho_;
    PhotonNumberDistribution photon_numbers_;
};

}  // namespace phasecert

#endif
