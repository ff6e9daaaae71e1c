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

#include "phasecert/homodyne.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "phasecert/errors.h"
#include "phasecert/numerics.h"

namespace phasecert {
namespace {

constexpr std::size_t kTableNodes = 4096;
constexpr std::string_view kMagic = "# quadrature-v1";

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::optional<double> parse_double(std::string_view text) {
    double v = 0.0;
    const char *first = text.data();
    const char *last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        return std::nullopt;
    }
    return v;
}

std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

DatasetMeta parse_header(std::string_view line) {
    line = trim(line);
    if (line.substr(0, kMagic.size()) != kMagic) {
        throw ParseError(1, "missing header (expected \"# quadrature-v1 ...\")");
    }
    std::istringstream fields{std::string(line.substr(kMagic.size()))};
    std::optional<std::uint64_t> count;
    std::optional<std::uint64_t> seed;
    std::optional<double> nbar;
    std::optional<double> eta;
    bool params_unknown = false;
    DatasetMeta meta;
    std::string token;
    while (fields >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw ParseError(1, "malformed header field \"" + token + "\"");
        }
        const std::string_view key = std::string_view(token).substr(0, eq);
        const std::string_view value = std::string_view(token).substr(eq + 1);
        if (key == "count") {
            count = parse_unsigned(value);
        } else if (key == "seed") {
            seed = parse_unsigned(value);
        } else if (key == "nbar" || key == "eta") {
            if (value == "na") {
                params_unknown = true;
                (key == "nbar" ? nbar : eta) = std::numeric_limits<double>::quiet_NaN();
            } else {
                (key == "nbar" ? nbar : eta) = parse_double(value);
            }
        } else if (key == "bins") {
            auto bins = parse_unsigned(value);
            if (!bins) {
                throw ParseError(1, "malformed header field \"" + token + "\"");
            }
            meta.bin_hint = static_cast<int>(*bins);
        } else {
            throw ParseError(1, "unknown header field \"" + std::string(key) + "\"");
        }
        if ((key == "count" && !count) || (key == "seed" && !seed) || (key == "nbar" && !nbar) ||
            (key == "eta" && !eta)) {
            throw ParseError(1, "malformed header field \"" + token + "\"");
        }
    }
    if (!count || !seed || !nbar || !eta) {
        throw ParseError(1, "header must declare count, seed, nbar and eta");
    }
    meta.count = static_cast<std::size_t>(*count);
    meta.seed = *seed;
    if (!params_unknown) {
        StateParams params{*nbar, *eta};
        try {
            params.validate();
        } catch (const DomainError &e) {
            throw ParseError(1, std::string("invalid nominal parameters: ") + e.what());
        }
        meta.nominal = params;
    }
    return meta;
}

}  // namespace

double quadrature_range(double mean_photon_number) {
    return 5.0 * std::sqrt(2.0 * std::max(0.0, mean_photon_number) + 1.0) + 2.0;
}

double quad_pdf(const PhotonNumberDistribution &dist, double x) {
    const auto probs = dist.probs();
    std::vector<double> psi(probs.size());
    hermite_gauss_row(probs.size() - 1, x, psi);
    double sum = 0.0;
    for (std::size_t n = 0; n < probs.size(); ++n) {
        sum += probs[n] * psi[n] * psi[n];
    }
    return sum;
}

QuadratureDataset sample(const PhotonNumberDistribution &dist, std::size_t count, std::uint64_t seed,
                         std::optional<StateParams> nominal) {
    if (count == 0) {
        throw DomainError("sample count must be >= 1");
    }
    const double x_max = quadrature_range(mean_photon(dist));
    const double h = 2.0 * x_max / static_cast<double>(kTableNodes - 1);
    const auto &nodes = gauss_legendre_20();

    std::vector<double> cdf(kTableNodes, 0.0);
    for (std::size_t i = 0; i + 1 < kTableNodes; ++i) {
        const double lo = -x_max + h * static_cast<double>(i);
        double mass = 0.0;
        for (const auto &[t, w] : nodes) {
            mass += w * quad_pdf(dist, lo + 0.5 * h * (t + 1.0));
        }
        cdf[i + 1] = cdf[i] + 0.5 * h * mass;
    }
    const double total = cdf.back();
    std::vector<double> knots;
    std::vector<double> xs;
    knots.reserve(kTableNodes);
    xs.reserve(kTableNodes);
    for (std::size_t i = 0; i < kTableNodes; ++i) {
        const double f = cdf[i] / total;
        if (knots.empty() || f > knots.back()) {
            knots.push_back(f);
            xs.push_back(-x_max + h * static_cast<double>(i));
        }
    }
    const MonotoneCubic inverse(std::move(knots), std::move(xs));

    std::mt19937_64 rng(seed);
    QuadratureDataset ds;
    ds.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = std::numbers::pi * uniform01(rng);
        const double x = inverse(uniform01(rng));
        ds.records.push_back({theta, x});
    }
    ds.meta.count = count;
    ds.meta.seed = seed;
    ds.meta.nominal = nominal;
    return ds;
}

QuadratureDataset sample_coherent(std::complex<double> beta, std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw DomainError("sample count must be >= 1");
    }
    std::mt19937_64 rng(seed);
    QuadratureDataset ds;
    ds.records.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double theta = std::numbers::pi * uniform01(rng);
        // Box-Muller; 1 - u keeps the logarithm finite.
        const double u1 = 1.0 - uniform01(rng);
        const double u2 = uniform01(rng);
        const double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        const double mean = std::numbers::sqrt2 * std::real(beta * std::polar(1.0, -theta));
        ds.records.push_back({theta, mean + gauss * std::sqrt(0.5)});
    }
    ds.meta.count = count;
    ds.meta.seed = seed;
    return ds;
}

void write_dataset(const QuadratureDataset &ds, std::ostream &out) {
    out << kMagic << " count=" << ds.records.size() << " seed=" << ds.meta.seed;
    if (ds.meta.nominal) {
        out << " nbar=" << format_double(ds.meta.nominal->nbar) << " eta=" << format_double(ds.meta.nominal->eta);
    } else {
        out << " nbar=na eta=na";
    }
    if (ds.meta.bin_hint) {
        out << " bins=" << *ds.meta.bin_hint;
    }
    out << '\n';
    std::string line;
    for (const auto &rec : ds.records) {
        line = format_double(rec.theta);
        line += ',';
        line += format_double(rec.x);
        line += '\n';
        out << line;
    }
}

void write_dataset(const QuadratureDataset &ds, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    write_dataset(ds, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

QuadratureDataset read_dataset(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw ParseError(1, "missing header");
    }
    QuadratureDataset ds;
    ds.meta = parse_header(line);
    ds.records.reserve(ds.meta.count);
    std::size_t line_no = 1;
    bool blank_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) {
            blank_seen = true;
            continue;
        }
        if (blank_seen) {
            throw ParseError(line_no - 1, "blank line inside record block");
        }
        const auto comma = row.find(',');
        if (comma == std::string_view::npos) {
            throw ParseError(line_no, "expected \"theta,x\"");
        }
        const auto theta = parse_double(trim(row.substr(0, comma)));
        const auto x = parse_double(trim(row.substr(comma + 1)));
        if (!theta || !x) {
            throw ParseError(line_no, "non-numeric value in \"" + std::string(row) + "\"");
        }
        if (!std::isfinite(*theta) || !std::isfinite(*x)) {
            throw ParseError(line_no, "non-finite value in \"" + std::string(row) + "\"");
        }
        if (*theta < 0.0 || *theta >= std::numbers::pi) {
            throw ParseError(line_no, "phase outside [0, pi)");
        }
        ds.records.push_back({*theta, *x});
    }
    if (ds.records.size() != ds.meta.count) {
        throw ParseError(line_no, "header declares count=" + std::to_string(ds.meta.count) + " but found " +
                                      std::to_string(ds.records.size()) + " records");
    }
    return ds;
}

QuadratureDataset read_dataset(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    try {
        return read_dataset(in);
    } catch (const ParseError &e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

}  // namespace phasecert
