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

#include "phasecert/tomography.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "phasecert/errors.h"
#include "phasecert/numerics.h"

namespace phasecert {
namespace {

constexpr double kCompletenessTolerance = 1e-6;
constexpr double kOutsideSupportFraction = 1e-4;
constexpr double kMaxSubinterval = 0.25;
constexpr double kProbabilityFloor = 1e-300;

std::size_t subdivisions(double width) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(width / kMaxSubinterval)));
}

/// Calls f(x, weight) over a composite Gauss-Legendre rule on [lo, hi].
template <typename F>
void for_each_node(double lo, double hi, F &&f) {
    const std::size_t parts = subdivisions(hi - lo);
    const double h = (hi - lo) / static_cast<double>(parts);
    for (std::size_t s = 0; s < parts; ++s) {
        const double a = lo + h * static_cast<double>(s);
        for (const auto &[t, w] : gauss_legendre_20()) {
            f(a + 0.5 * h * (t + 1.0), 0.5 * h * w);
        }
    }
}

void check_range_completeness(const Eigen::VectorXd &column_sums, const std::vector<double> &edges) {
    for (Eigen::Index n = 0; n < column_sums.size(); ++n) {
        if (column_sums(n) < 1.0 - kCompletenessTolerance) {
            std::ostringstream msg;
            msg << "POVM completeness deficit: bins on [" << edges.front() << ", " << edges.back() << "] capture only "
                << column_sums(n) << " of Fock state n = " << n << " (cutoff " << column_sums.size() - 1
                << "); widen the quadrature range or lower the cutoff";
            throw CompletenessError(msg.str());
        }
    }
}

/// The data must not reach beyond the quadrature support of Fock states <= cutoff.
void check_data_support(const BinnedData &binned, std::size_t cutoff) {
    const double envelope = std::sqrt(2.0 * static_cast<double>(cutoff) + 1.0) + 2.0;
    const std::size_t slots = binned.phase_slots();
    std::uint64_t outside = 0;
    for (std::size_t j = 0; j < binned.x_bins(); ++j) {
        const double inner = std::min(std::abs(binned.edges[j]), std::abs(binned.edges[j + 1]));
        const bool straddles_zero = binned.edges[j] < 0.0 && binned.edges[j + 1] > 0.0;
        if (straddles_zero || inner < envelope) {
            continue;
        }
        for (std::size_t k = 0; k < slots; ++k) {
            outside += binned.counts[j * slots + k];
        }
    }
    const double fraction = static_cast<double>(outside) / static_cast<double>(binned.total());
    if (fraction > kOutsideSupportFraction) {
        std::ostringstream msg;
        msg << "POVM completeness deficit: " << fraction * 100.0 << "% of samples lie beyond |x| = " << envelope
            << ", outside the support of Fock states n <= " << cutoff << "; raise the cutoff";
        throw CompletenessError(msg.str());
    }
}

std::vector<double> frequencies(const BinnedData &binned) {
    const double total = static_cast<double>(binned.total());
    if (total <= 0.0) {
        throw DomainError("binned data holds no samples");
    }
    std::vector<double> f(binned.counts.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = static_cast<double>(binned.counts[i]) / total;
    }
    return f;
}

/// Lossy photon-added thermal probabilities from the series of (1 - eta + eta z) / (1 + nbar eta - nbar eta z)^2.
std::vector<double> lossy_spats_model(const StateParams &params, std::size_t cutoff) {
    const double a = 1.0 + params.nbar * params.eta;
    const double c = params.nbar * params.eta / a;
    const double scale = 1.0 / (a * a);
    std::vector<double> out(cutoff + 1, 0.0);
    out[0] = (1.0 - params.eta) * scale;
    double power = 1.0;  // c^{m-1}
    for (std::size_t m = 1; m <= cutoff; ++m) {
        const double md = static_cast<double>(m);
        out[m] = scale * ((1.0 - params.eta) * (md + 1.0) * power * c + params.eta * md * power);
        power *= c;
    }
    return out;
}

}  // namespace

std::uint64_t BinnedData::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double data_quadrature_range(const QuadratureDataset &ds) {
    if (ds.records.empty()) {
        throw DomainError("dataset is empty");
    }
    double second = 0.0;
    for (const auto &rec : ds.records) {
        second += rec.x * rec.x;
    }
    second /= static_cast<double>(ds.records.size());
    return quadrature_range(second - 0.5);
}

double fock_support_range(std::size_t cutoff) {
    return std::sqrt(2.0 * static_cast<double>(cutoff) + 1.0) + 4.0;
}

BinnedData bin_data(const QuadratureDataset &ds, const BinningOptions &options) {
    if (ds.records.empty()) {
        throw DomainError("cannot bin an empty dataset");
    }
    if (options.n_bins < 16) {
        throw DomainError("need at least 16 quadrature bins");
    }
    if (options.n_phase_bins < 0) {
        throw DomainError("phase bin count must be >= 0");
    }
    BinnedData binned;
    double range = options.x_range ? *options.x_range : data_quadrature_range(ds);
    if (!(range > 0.0)) {
        throw DomainError("quadrature range must be positive");
    }
    double widest = 0.0;
    std::size_t beyond = 0;
    for (const auto &rec : ds.records) {
        widest = std::max(widest, std::abs(rec.x));
        beyond += std::abs(rec.x) > range ? 1 : 0;
    }
    if (beyond > 0) {
        const double widened = widest * (1.0 + 1e-9);
        std::ostringstream msg;
        msg << beyond << " samples outside [-" << range << ", " << range << "]; range widened to " << widened;
        binned.warnings.push_back(msg.str());
        range = widened;
    }

    const std::size_t n_bins = static_cast<std::size_t>(options.n_bins);
    binned.edges.resize(n_bins + 1);
    for (std::size_t j = 0; j <= n_bins; ++j) {
        binned.edges[j] = -range + 2.0 * range * static_cast<double>(j) / static_cast<double>(n_bins);
    }
    binned.phase_bins = static_cast<std::size_t>(options.n_phase_bins);
    const std::size_t slots = binned.phase_slots();
    binned.counts.assign(n_bins * slots, 0);
    for (const auto &rec : ds.records) {
        auto j = static_cast<std::size_t>(std::floor((rec.x + range) / (2.0 * range) * static_cast<double>(n_bins)));
        j = std::min(j, n_bins - 1);
        std::size_t k = 0;
        if (binned.phase_bins > 0) {
            k = static_cast<std::size_t>(std::floor(rec.theta / std::numbers::pi * static_cast<double>(slots)));
            k = std::min(k, slots - 1);
        }
        ++binned.counts[j * slots + k];
    }
    return binned;
}

BinnedData bin_data(const QuadratureDataset &ds, int n_bins) {
    BinningOptions options;
    options.n_bins = n_bins;
    return bin_data(ds, options);
}

Eigen::MatrixXd diagonal_povm(const std::vector<double> &edges, std::size_t cutoff) {
    const Eigen::Index bins = static_cast<Eigen::Index>(edges.size()) - 1;
    Eigen::MatrixXd povm = Eigen::MatrixXd::Zero(bins, static_cast<Eigen::Index>(cutoff) + 1);
    std::vector<double> psi(cutoff + 1);
    for (Eigen::Index j = 0; j < bins; ++j) {
        for_each_node(edges[static_cast<std::size_t>(j)], edges[static_cast<std::size_t>(j) + 1],
                      [&](double x, double w) {
                          hermite_gauss_row(cutoff, x, psi);
                          for (std::size_t n = 0; n <= cutoff; ++n) {
                              povm(j, static_cast<Eigen::Index>(n)) += w * psi[n] * psi[n];
                          }
                      });
    }
    return povm;
}

DiagonalMleResult mle_diagonal_from_counts(const Eigen::MatrixXd &povm, const std::vector<double> &counts,
                                           const MleOptions &options) {
    const Eigen::Index bins = povm.rows();
    const Eigen::Index dim = povm.cols();
    if (static_cast<Eigen::Index>(counts.size()) != bins) {
        throw DomainError("count vector does not match the POVM table");
    }
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (!(total > 0.0)) {
        throw DomainError("binned data holds no samples");
    }
    Eigen::VectorXd freq(bins);
    for (Eigen::Index j = 0; j < bins; ++j) {
        freq(j) = counts[static_cast<std::size_t>(j)] / total;
    }

    Eigen::VectorXd p(dim);
    if (options.initial) {
        if (static_cast<Eigen::Index>(options.initial->size()) != dim) {
            throw DomainError("initial distribution does not match the cutoff");
        }
        for (Eigen::Index n = 0; n < dim; ++n) {
            p(n) = (*options.initial)[static_cast<std::size_t>(n)];
        }
        p /= p.sum();
    } else {
        p.setConstant(1.0 / static_cast<double>(dim));
    }

    auto loglik = [&](const Eigen::VectorXd &pr) {
        double l = 0.0;
        for (Eigen::Index j = 0; j < bins; ++j) {
            if (freq(j) > 0.0) {
                l += freq(j) * std::log(std::max(pr(j), kProbabilityFloor));
            }
        }
        return l;
    };

    DiagonalMleResult result{{}, PhotonNumberDistribution({1.0})};
    Eigen::VectorXd pr = povm * p;
    double current = loglik(pr);
    result.loglik_trace.push_back(current);
    Eigen::VectorXd weight(bins);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        for (Eigen::Index j = 0; j < bins; ++j) {
            weight(j) = freq(j) > 0.0 ? freq(j) / std::max(pr(j), kProbabilityFloor) : 0.0;
        }
        Eigen::VectorXd next = p.cwiseProduct(povm.transpose() * weight);
        next /= next.sum();
        double change = 0.0;
        for (Eigen::Index n = 0; n < dim; ++n) {
            if (p(n) > 0.0) {
                change = std::max(change, std::abs(next(n) - p(n)) / p(n));
            }
        }
        p = next;
        pr = povm * p;
        const double updated = loglik(pr);
        const double gain = updated - current;
        current = updated;
        result.loglik_trace.push_back(current);
        result.iterations = iter;
        if (gain < options.loglik_tolerance || change < options.relative_change_tolerance) {
            result.converged = true;
            break;
        }
    }
    std::vector<double> probs(static_cast<std::size_t>(dim));
    for (Eigen::Index n = 0; n < dim; ++n) {
        probs[static_cast<std::size_t>(n)] = std::max(0.0, p(n));
    }
    result.dist = PhotonNumberDistribution(std::move(probs));
    return result;
}

DiagonalMleResult mle_diagonal(const BinnedData &binned, std::size_t cutoff, const MleOptions &options) {
    if (cutoff < 4) {
        throw DomainError("reconstruction cutoff must be >= 4");
    }
    if (binned.total() == 0) {
        throw DomainError("binned data holds no samples");
    }
    const Eigen::MatrixXd povm = diagonal_povm(binned.edges, cutoff);
    check_range_completeness(povm.colwise().sum().transpose(), binned.edges);
    check_data_support(binned, cutoff);

    // Phase bins carry no extra information for the photon-number diagonal.
    const std::size_t slots = binned.phase_slots();
    std::vector<double> counts(binned.x_bins(), 0.0);
    for (std::size_t j = 0; j < counts.size(); ++j) {
        for (std::size_t k = 0; k < slots; ++k) {
            counts[j] += static_cast<double>(binned.counts[j * slots + k]);
        }
    }
    return mle_diagonal_from_counts(povm, counts, options);
}

MatrixMleResult mle_full(const BinnedData &binned, std::size_t cutoff, const MleOptions &options) {
    if (cutoff < 4) {
        throw DomainError("reconstruction cutoff must be >= 4");
    }
    if (binned.phase_bins < 8) {
        throw DomainError("full reconstruction needs at least 8 phase bins");
    }
    const std::vector<double> freq = frequencies(binned);
    const std::size_t bins = binned.x_bins();
    const std::size_t phases = binned.phase_bins;
    const Eigen::Index dim = static_cast<Eigen::Index>(cutoff) + 1;
    const Eigen::Index offsets = 2 * dim - 1;  // d = m - n in [-cutoff, cutoff], stored at d + cutoff

    // Quadrature overlaps X_j[m, n] = int_bin psi_m psi_n dx.
    std::vector<Eigen::MatrixXd> overlap(bins, Eigen::MatrixXd::Zero(dim, dim));
    std::vector<double> psi(cutoff + 1);
    for (std::size_t j = 0; j < bins; ++j) {
        for_each_node(binned.edges[j], binned.edges[j + 1], [&](double x, double w) {
            hermite_gauss_row(cutoff, x, psi);
            Eigen::Map<Eigen::VectorXd> v(psi.data(), dim);
            overlap[j].noalias() += w * v * v.transpose();
        });
    }
    Eigen::VectorXd column_sums = Eigen::VectorXd::Zero(dim);
    for (const auto &x : overlap) {
        column_sums += x.diagonal();
    }
    check_range_completeness(column_sums, binned.edges);
    check_data_support(binned, cutoff);

    // Phase factors (1/pi) int_bin e^{i d theta} d theta.
    Eigen::MatrixXcd phase(static_cast<Eigen::Index>(phases), offsets);
    const double width = std::numbers::pi / static_cast<double>(phases);
    for (std::size_t k = 0; k < phases; ++k) {
        const double lo = width * static_cast<double>(k);
        const double hi = lo + width;
        for (Eigen::Index idx = 0; idx < offsets; ++idx) {
            const double d = static_cast<double>(idx - static_cast<Eigen::Index>(cutoff));
            std::complex<double> value;
            if (d == 0.0) {
                value = width / std::numbers::pi;
            } else {
                value = (std::polar(1.0, d * hi) - std::polar(1.0, d * lo)) /
                        (std::complex<double>(0.0, 1.0) * std::numbers::pi * d);
            }
            phase(static_cast<Eigen::Index>(k), idx) = value;
        }
    }

    auto probabilities = [&](const Eigen::MatrixXcd &rho) {
        std::vector<double> pr(bins * phases);
        Eigen::VectorXcd diag_sums(offsets);
        for (std::size_t j = 0; j < bins; ++j) {
            diag_sums.setZero();
            for (Eigen::Index m = 0; m < dim; ++m) {
                for (Eigen::Index n = 0; n < dim; ++n) {
                    diag_sums(m - n + static_cast<Eigen::Index>(cutoff)) += rho(n, m) * overlap[j](m, n);
                }
            }
            Eigen::VectorXcd per_phase = phase * diag_sums;
            for (std::size_t k = 0; k < phases; ++k) {
                pr[j * phases + k] = std::max(per_phase(static_cast<Eigen::Index>(k)).real(), kProbabilityFloor);
            }
        }
        return pr;
    };
    auto loglik = [&](const std::vector<double> &pr) {
        double l = 0.0;
        for (std::size_t i = 0; i < pr.size(); ++i) {
            if (freq[i] > 0.0) {
                l += freq[i] * std::log(pr[i]);
            }
        }
        return l;
    };
    auto r_operator = [&](const std::vector<double> &pr) {
        Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
        Eigen::VectorXd weights(static_cast<Eigen::Index>(phases));
        for (std::size_t j = 0; j < bins; ++j) {
            bool any = false;
            for (std::size_t k = 0; k < phases; ++k) {
                const double f = freq[j * phases + k];
                weights(static_cast<Eigen::Index>(k)) = f > 0.0 ? f / pr[j * phases + k] : 0.0;
                any = any || f > 0.0;
            }
            if (!any) {
                continue;
            }
            Eigen::VectorXcd h = phase.transpose() * weights.cast<std::complex<double>>();
            for (Eigen::Index m = 0; m < dim; ++m) {
                for (Eigen::Index n = 0; n < dim; ++n) {
                    r(m, n) += overlap[j](m, n) * h(m - n + static_cast<Eigen::Index>(cutoff));
                }
            }
        }
        return r;
    };
    auto normalized = [](Eigen::MatrixXcd m) {
        m = 0.5 * (m + m.adjoint()).eval();
        m /= m.trace().real();
        return m;
    };

    Eigen::MatrixXcd rho;
    if (options.initial_matrix) {
        if (options.initial_matrix->rows() != dim || options.initial_matrix->cols() != dim) {
            throw DomainError("initial matrix does not match the cutoff");
        }
        rho = normalized(*options.initial_matrix);
    } else {
        rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    }

    MatrixMleResult result{{}, FockDensityMatrix(Eigen::MatrixXcd::Identity(1, 1))};
    std::vector<double> pr = probabilities(rho);
    double current = loglik(pr);
    result.loglik_trace.push_back(current);
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        const Eigen::MatrixXcd r = r_operator(pr);
        Eigen::MatrixXcd next = normalized(r * rho * r);
        std::vector<double> next_pr = probabilities(next);
        double updated = loglik(next_pr);
        // Diluted steps (I + eps R) rho (I + eps R) when the plain step loses likelihood.
        for (double eps = 1.0; updated < current && eps > 1e-6; eps *= 0.5) {
            const Eigen::MatrixXcd step = identity + eps * r;
            next = normalized(step * rho * step.adjoint());
            next_pr = probabilities(next);
            updated = loglik(next_pr);
        }
        result.iterations = iter;
        if (updated < current) {
            result.converged = true;
            break;
        }
        double change = 0.0;
        for (Eigen::Index m = 0; m < dim; ++m) {
            for (Eigen::Index n = 0; n < dim; ++n) {
                const double scale = std::max(std::abs(rho(m, n)), 1e-12);
                change = std::max(change, std::abs(next(m, n) - rho(m, n)) / scale);
            }
        }
        const double gain = updated - current;
        rho = std::move(next);
        pr = std::move(next_pr);
        current = updated;
        result.loglik_trace.push_back(current);
        if (gain < options.loglik_tolerance || change < options.relative_change_tolerance) {
            result.converged = true;
            break;
        }
    }
    result.rho = FockDensityMatrix(normalized(rho));
    return result;
}

DiagonalMleResult reconstruct(const QuadratureDataset &ds, const ReconstructOptions &options) {
    BinningOptions binning;
    binning.n_bins = options.n_bins;
    binning.x_range = std::max(data_quadrature_range(ds), fock_support_range(options.cutoff));
    return mle_diagonal(bin_data(ds, binning), options.cutoff, options.mle);
}

FitResult fit_params(const PhotonNumberDistribution &dist) {
    const std::size_t cutoff = dist.cutoff();
    // Cross-entropy -sum p_n log model_n: the reconstruction is treated as observed frequencies,
    // which weights the sparse high-n entries far better than a plain squared distance.
    auto distance = [&](const StateParams &params) {
        const std::vector<double> model = lossy_spats_model(params, cutoff);
        double sum = 0.0;
        for (std::size_t n = 0; n <= cutoff; ++n) {
            if (dist[n] > 0.0) {
                sum -= dist[n] * std::log(std::max(model[n], kProbabilityFloor));
            }
        }
        return sum;
    };

    constexpr int kGrid = 60;
    constexpr double kNbarMax = 4.0;
    StateParams best{0.0, 0.0};
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const StateParams params{kNbarMax * i / (kGrid - 1), static_cast<double>(j) / (kGrid - 1)};
            const double value = distance(params);
            if (value < best_value) {
                best_value = value;
                best = params;
            }
        }
    }
    auto objective = [&](std::span<const double> x) {
        if (x[0] < 0.0 || x[0] > kNbarMax || x[1] < 0.0 || x[1] > 1.0) {
            return std::numeric_limits<double>::infinity();
        }
        return distance(StateParams{x[0], x[1]});
    };
    const std::vector<double> steps = {kNbarMax / (kGrid - 1), 1.0 / (kGrid - 1)};
    SimplexOptions simplex;
    simplex.max_iterations = 2000;
    simplex.x_tolerance = 1e-10;
    simplex.f_tolerance = 1e-15;
    SimplexResult refined = nelder_mead(objective, {best.nbar, best.eta}, steps, simplex);
    if (refined.value < best_value) {
        best = StateParams{refined.x[0], refined.x[1]};
        best_value = refined.value;
    }
    const std::vector<double> model = lossy_spats_model(best, cutoff);
    double squared = 0.0;
    for (std::size_t n = 0; n <= cutoff; ++n) {
        squared += (dist[n] - model[n]) * (dist[n] - model[n]);
    }
    FitResult fit;
    fit.params = best;
    fit.residual = std::sqrt(squared);
    fit.model_mismatch = fit.residual > 0.05;
    return fit;
}

std::vector<BootstrapResult> bootstrap_multi(
    const QuadratureDataset &ds, const std::function<std::vector<double>(const QuadratureDataset &)> &pipeline,
    int n_resamples, std::uint64_t seed) {
    if (n_resamples < 2) {
        throw DomainError("bootstrap needs at least 2 resamples");
    }
    if (ds.records.empty()) {
        throw DomainError("cannot bootstrap an empty dataset");
    }
    const std::size_t n = ds.records.size();
    std::vector<BootstrapResult> results;
    QuadratureDataset resampled;
    resampled.meta = ds.meta;
    resampled.records.resize(n);
    for (int i = 0; i < n_resamples; ++i) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i))));
        for (std::size_t r = 0; r < n; ++r) {
            // Multiply-shift range reduction keeps the draw platform independent.
            const auto pick = static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
            resampled.records[r] = ds.records[pick];
        }
        const std::vector<double> outputs = pipeline(resampled);
        if (results.empty()) {
            results.resize(outputs.size());
        } else if (outputs.size() != results.size()) {
            throw DomainError("bootstrap pipeline changed its output count");
        }
        for (std::size_t k = 0; k < outputs.size(); ++k) {
            results[k].samples.push_back(outputs[k]);
        }
    }
    const double count = static_cast<double>(n_resamples);
    for (auto &result : results) {
        const auto &s = result.samples;
        if (std::all_of(s.begin(), s.end(), [&](double v) { return v == s.front(); })) {
            result.value = s.front();
            result.sigma = 0.0;
            continue;
        }
        result.value = std::accumulate(s.begin(), s.end(), 0.0) / count;
        double ss = 0.0;
        for (double v : s) {
            ss += (v - result.value) * (v - result.value);
        }
        result.sigma = std::sqrt(ss / (count - 1.0));
    }
    return results;
}

BootstrapResult bootstrap(const QuadratureDataset &ds, const DatasetPipeline &pipeline, int n_resamples,
                          std::uint64_t seed) {
    auto results = bootstrap_multi(
        ds, [&](const QuadratureDataset &d) { return std::vector<double>{pipeline(d)}; }, n_resamples, seed);
    return std::move(results.front());
}

double total_variation(const PhotonNumberDistribution &a, const PhotonNumberDistribution &b) {
    const std::size_t top = std::max(a.cutoff(), b.cutoff());
    double sum = 0.0;
    for (std::size_t n = 0; n <= top; ++n) {
        sum += std::abs(a[n] - b[n]);
    }
    return 0.5 * sum;
}

}  // namespace phasecert
