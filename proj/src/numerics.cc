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

#include "phasecert/numerics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace phasecert {

std::vector<double> log_binomial_row(std::size_t n) {
    std::vector<double> out(n + 1, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        out[m + 1] = out[m] + std::log(static_cast<double>(n - m)) - std::log(static_cast<double>(m + 1));
    }
    return out;
}

void laguerre_row(std::size_t n, double k, double x, std::span<double> out) {
    out[0] = 1.0;
    if (n == 0) {
        return;
    }
    out[1] = 1.0 + k - x;
    for (std::size_t j = 1; j < n; ++j) {
        double jd = static_cast<double>(j);
        out[j + 1] = ((2.0 * jd + 1.0 + k - x) * out[j] - (jd + k) * out[j - 1]) / (jd + 1.0);
    }
}

void hermite_gauss_row(std::size_t n, double x, std::span<double> out) {
    out[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    if (n == 0) {
        return;
    }
    out[1] = x * std::numbers::sqrt2 * out[0];
    for (std::size_t j = 1; j < n; ++j) {
        double jd = static_cast<double>(j);
        out[j + 1] = x * std::sqrt(2.0 / (jd + 1.0)) * out[j] - std::sqrt(jd / (jd + 1.0)) * out[j - 1];
    }
}

SimplexResult nelder_mead(
    const std::function<double(std::span<const double>)> &f,
    std::vector<double> start,
    std::span<const double> steps,
    const SimplexOptions &options) {
    const std::size_t dim = start.size();
    if (steps.size() != dim || dim == 0) {
        throw std::invalid_argument("nelder_mead: step vector must match the start point");
    }
    auto eval = [&](const std::vector<double> &x) {
        double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1][i] += steps[i];
    }
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) {
        values[i] = eval(simplex[i]);
    }

    std::vector<std::size_t> order(dim + 1);
    SimplexResult result;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        for (std::size_t i = 0; i <= dim; ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return values[a] < values[b];
        });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        double spread = values[worst] - values[best];
        double diameter = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                diameter = std::max(diameter, std::abs(simplex[i][d] - simplex[best][d]));
            }
        }
        result.iterations = iter;
        if (std::isfinite(spread) && spread <= options.f_tolerance * std::abs(values[best]) + 1e-300 &&
            diameter <= options.x_tolerance) {
            result.converged = true;
            break;
        }
        if (std::isfinite(spread) && spread == 0.0 && diameter <= options.x_tolerance) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                centroid[d] += simplex[i][d] / static_cast<double>(dim);
            }
        }
        auto along = [&](double t) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
            }
            return p;
        };

        auto reflected = along(-1.0);
        double fr = eval(reflected);
        if (fr < values[best]) {
            auto expanded = along(-2.0);
            double fe = eval(expanded);
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
            continue;
        }
        if (fr < values[second_worst]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
            continue;
        }
        bool outside = fr < values[worst];
        auto contracted = along(outside ? -0.5 : 0.5);
        double fc = eval(contracted);
        if (fc < (outside ? fr : values[worst])) {
            simplex[worst] = std::move(contracted);
            values[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
            }
            values[i] = eval(simplex[i]);
        }
    }
    if (!result.converged) {
        result.iterations = options.max_iterations;
    }
    std::size_t best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    result.x = simplex[best];
    result.value = values[best];
    return result;
}

std::pair<double, double> golden_section_minimize(const std::function<double(double)> &f, double lo, double hi,
                                                  double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    double x = 0.5 * (lo + hi);
    return {x, f(x)};
}

const std::vector<std::pair<double, double>> &gauss_legendre_20() {
    static const std::vector<std::pair<double, double>> nodes = [] {
        using rule = boost::math::quadrature::gauss<double, 20>;
        const auto &abscissa = rule::abscissa();
        const auto &weights = rule::weights();
        std::vector<std::pair<double, double>> out;
        for (std::size_t i = 0; i < abscissa.size(); ++i) {
            out.emplace_back(abscissa[i], weights[i]);
            if (abscissa[i] != 0.0) {
                out.emplace_back(-abscissa[i], weights[i]);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }();
    return nodes;
}

double integrate(const std::function<double(double)> &f, double a, double b, double tol) {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &error);
}

MonotoneCubic::MonotoneCubic(std::vector<double> knots, std::vector<double> values)
    : t_(std::move(knots)), y_(std::move(values)) {
    const std::size_t n = t_.size();
    if (n < 2 || y_.size() != n) {
        throw std::invalid_argument("MonotoneCubic: need at least two knots");
    }
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(t_[i + 1] > t_[i])) {
            throw std::invalid_argument("MonotoneCubic: knots must be strictly increasing");
        }
        secant[i] = (y_[i + 1] - y_[i]) / (t_[i + 1] - t_[i]);
    }
    slope_.assign(n, 0.0);
    slope_[0] = secant[0];
    slope_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double a = secant[i - 1];
        double b = secant[i];
        if (a * b <= 0.0) {
            slope_[i] = 0.0;
            continue;
        }
        // Weighted harmonic mean (Fritsch-Butland); keeps each piece monotone.
        double h0 = t_[i] - t_[i - 1];
        double h1 = t_[i + 1] - t_[i];
        double w1 = 2.0 * h1 + h0;
        double w2 = h1 + 2.0 * h0;
        slope_[i] = (w1 + w2) / (w1 / a + w2 / b);
    }
}

double MonotoneCubic::operator()(double t) const {
    if (t <= t_.front()) {
        return y_.front();
    }
    if (t >= t_.back()) {
        return y_.back();
    }
    std::size_t i = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), t) - t_.begin()) - 1;
    double h = t_[i + 1] - t_[i];
    double s = (t - t_[i]) / h;
    double s2 = s * s;
    double s3 = s2 * s;
    double h00 = 2 * s3 - 3 * s2 + 1;
    double h10 = s3 - 2 * s2 + s;
    double h01 = -2 * s3 + 3 * s2;
    double h11 = s3 - s2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace phasecert
