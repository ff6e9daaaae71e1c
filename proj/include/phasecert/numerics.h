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

#ifndef PHASECERT_NUMERICS_H
#define PHASECERT_NUMERICS_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace phasecert {

/// log C(n, m) for m = 0..n, by the multiplicative recurrence in log space.
std::vector<double> log_binomial_row(std::size_t n);

/// Laguerre polynomials L_0(x)..L_n(x) (generalized order `k`) by the three-term recurrence.
void laguerre_row(std::size_t n, double k, double x, std::span<double> out);

/// Hermite-Gauss functions psi_0(x)..psi_n(x), psi_0 = pi^{-1/4} exp(-x^2/2).
void hermite_gauss_row(std::size_t n, double x, std::span<double> out);

struct SimplexOptions {
    int max_iterations = 500;
    double f_tolerance = 1e-13;
    double x_tolerance = 1e-9;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Nelder-Mead minimization. `steps` gives the initial simplex edge along each axis.
/// Non-finite objective values are treated as +inf, which is how callers encode constraints.
SimplexResult nelder_mead(
    const std::function<double(std::span<const double>)> &f,
    std::vector<double> start,
    std::span<const double> steps,
    const SimplexOptions &options = {});

/// Golden-section search for a minimum of a unimodal function on [lo, hi].
std::pair<double, double> golden_section_minimize(const std::function<double(double)> &f, double lo, double hi,
                                                  double tol = 1e-10);

/// Gauss-Legendre nodes and weights on [-1, 1] (20 points).
const std::vector<std::pair<double, double>> &gauss_legendre_20();

/// Integral of `f` over [a, b] by adaptive Gauss-Kronrod.
double integrate(const std::function<double(double)> &f, double a, double b, double tol = 1e-12);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant through strictly increasing knots.
class MonotoneCubic {
   public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> knots, std::vector<double> values);
    double operator()(double t) const;

   private:
    std::vector<double> t_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

/// SplitMix64 step, used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Uniform double in [0, 1) from 53 high bits; platform independent.
template <typename Rng>
double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace phasecert

#endif
