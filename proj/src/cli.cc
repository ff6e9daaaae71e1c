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

#include "phasecert/cli.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasecert/certifiers.h"
#include "phasecert/errors.h"
#include "phasecert/homodyne.h"
#include "phasecert/pipeline.h"
#include "phasecert/tomography.h"

namespace phasecert::cli {
namespace {

using Json = nlohmann::ordered_json;

/// Bad arguments detected after CLI11 parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

Json json_number(double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

Json document(const std::string &command, Json config, Json outputs, const std::vector<std::string> &warnings) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["config"] = std::move(config);
    doc["outputs"] = std::move(outputs);
    doc["warnings"] = warnings;
    return doc;
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    file << text;
    file.flush();
    if (!file) {
        throw std::runtime_error("failed writing " + path);
    }
}

void write_json(const std::string &path, const Json &doc) {
    write_text(path, doc.dump(2) + "\n");
}

StateParams checked_params(double nbar, double eta) {
    StateParams params{nbar, eta};
    try {
        params.validate();
    } catch (const DomainError &e) {
        throw UsageError(e.what());
    }
    return params;
}

std::vector<CertifierKind> parse_certifier_list(const std::string &list) {
    std::vector<CertifierKind> kinds;
    std::stringstream stream(list);
    std::string name;
    while (std::getline(stream, name, ',')) {
        if (name.empty()) {
            continue;
        }
        auto kind = parse_certifier(name);
        if (!kind) {
            throw UsageError("unknown certifier \"" + name + "\"; valid names: " + certifier_names());
        }
        kinds.push_back(*kind);
    }
    if (kinds.empty()) {
        throw UsageError("no certifiers selected; valid names: " + certifier_names());
    }
    return kinds;
}

Json report_json(const CertificateReport &report) {
    Json points = Json::array();
    for (const auto &pt : report.points) {
        points.push_back(Json::array({pt.alpha().real(), pt.alpha().imag()}));
    }
    Json j;
    j["certifier"] = std::string(certifier_name(report.kind));
    j["value"] = json_number(report.value);
    j["sigma"] = json_number(report.sigma);
    j["confidence_k"] = report.confidence_k;
    j["detected"] = report.detected;
    j["points"] = std::move(points);
    j["params"] = {{"nbar", report.params.nbar}, {"eta", report.params.eta}};
    return j;
}

std::vector<double> axis(double lo, double hi, int steps) {
    if (lo == hi) {
        return {lo};
    }
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
    }
    return out;
}

struct SimulateConfig {
    double nbar = 0.0;
    double eta = 1.0;
    long long count = 0;
    std::uint64_t seed = 0;
    std::string out;
    bool thermal_only = false;
};

struct ReconstructConfig {
    std::string in;
    int cutoff = 30;
    int bins = 256;
    std::string out;
};

struct CertifyConfig {
    std::string in;
    std::optional<double> nbar;
    std::optional<double> eta;
    std::string certifiers = "eq1,eq2,wigner-negativity,mandel";
    double k = kDefaultConfidence;
    int resamples = 50;
    std::optional<std::uint64_t> seed;
    int cutoff = 30;
    int bins = 256;
    bool thermal_only = false;
    std::string out;
};

struct ScanConfig {
    double nbar_min = 0.0;
    double nbar_max = 2.0;
    double eta_min = 0.0;
    double eta_max = 1.0;
    int steps = 40;
    std::optional<int> nbar_steps;
    std::optional<int> eta_steps;
    std::string certifiers = "eq1,eq2,wigner-negativity,mandel";
    std::string out;
};

struct ThresholdConfig {
    std::string certifier;
    double nbar = 0.0;
    double tol = 1e-3;
    std::string out;
};

void cmd_simulate(const SimulateConfig &cfg, std::ostream &out) {
    if (cfg.count < 1) {
        throw UsageError("--count must be >= 1");
    }
    const StateParams params = checked_params(cfg.nbar, cfg.eta);
    const PhotonNumberDistribution base = cfg.thermal_only ? thermal_dist(params.nbar) : spats_dist(params.nbar);
    const QuadratureDataset ds =
        sample(apply_loss(base, params.eta), static_cast<std::size_t>(cfg.count), cfg.seed, params);
    write_dataset(ds, std::filesystem::path(cfg.out));

    double mean = 0.0;
    for (const auto &rec : ds.records) {
        mean += rec.x;
    }
    mean /= static_cast<double>(ds.records.size());
    double var = 0.0;
    for (const auto &rec : ds.records) {
        var += (rec.x - mean) * (rec.x - mean);
    }
    var /= static_cast<double>(ds.records.size());
    out << "count=" << ds.records.size() << " sample_variance=" << format_double(var) << " path=" << cfg.out
        << "\n";
}

void cmd_reconstruct(const ReconstructConfig &cfg, std::ostream &out) {
    if (cfg.cutoff < 4) {
        throw UsageError("--cutoff must be >= 4");
    }
    if (cfg.bins < 16) {
        throw UsageError("--bins must be >= 16");
    }
    const QuadratureDataset ds = read_dataset(std::filesystem::path(cfg.in));
    ReconstructOptions options;
    options.cutoff = static_cast<std::size_t>(cfg.cutoff);
    options.n_bins = cfg.bins;
    const DiagonalMleResult result = reconstruct(ds, options);
    const FitResult fit = fit_params(result.dist);

    std::vector<std::string> warnings;
    if (!result.converged) {
        warnings.push_back("maximum-likelihood iteration hit the iteration cap before converging");
    }
    if (fit.model_mismatch) {
        warnings.push_back("fit residual " + format_double(fit.residual) + " exceeds 0.05 (model mismatch)");
    }
    Json config = {{"in", cfg.in}, {"cutoff", cfg.cutoff}, {"bins", cfg.bins}};
    Json outputs;
    outputs["probabilities"] = std::vector<double>(result.dist.probs().begin(), result.dist.probs().end());
    outputs["mean_photon"] = mean_photon(result.dist);
    outputs["fit"] = {{"nbar", fit.params.nbar},
                      {"eta", fit.params.eta},
                      {"residual", fit.residual},
                      {"model_mismatch", fit.model_mismatch}};
    outputs["convergence"] = {{"iterations", result.iterations},
                              {"converged", result.converged},
                              {"final_loglik_per_sample", result.loglik_trace.back()}};
    write_json(cfg.out, document("reconstruct", std::move(config), std::move(outputs), warnings));
    out << "p0=" << format_double(result.dist[0]) << " p1=" << format_double(result.dist[1])
        << " fit_nbar=" << format_double(fit.params.nbar) << " fit_eta=" << format_double(fit.params.eta)
        << " iterations=" << result.iterations << "\n";
}

void cmd_certify(const CertifyConfig &cfg, std::ostream &out) {
    const std::vector<CertifierKind> kinds = parse_certifier_list(cfg.certifiers);
    if (!(cfg.k >= 0.0)) {
        throw UsageError("--k must be >= 0");
    }
    const bool dataset_mode = !cfg.in.empty();
    if (dataset_mode == (cfg.nbar.has_value() || cfg.eta.has_value())) {
        throw UsageError("certify needs either --in <dataset> or both --nbar and --eta");
    }

    Json config;
    Json outputs;
    std::vector<std::string> warnings;
    std::vector<CertificateReport> reports;
    config["certifiers"] = cfg.certifiers;
    config["k"] = cfg.k;
    if (dataset_mode) {
        if (!cfg.seed) {
            throw UsageError("--seed is required when certifying a dataset");
        }
        if (cfg.resamples < 2) {
            throw UsageError("--resamples must be >= 2");
        }
        if (cfg.cutoff < 4 || cfg.bins < 16) {
            throw UsageError("--cutoff must be >= 4 and --bins >= 16");
        }
        const QuadratureDataset ds = read_dataset(std::filesystem::path(cfg.in));
        DatasetCertifyOptions options;
        options.confidence_k = cfg.k;
        options.resamples = cfg.resamples;
        options.seed = *cfg.seed;
        options.reconstruct.cutoff = static_cast<std::size_t>(cfg.cutoff);
        options.reconstruct.n_bins = cfg.bins;
        DatasetCertification result = certify_dataset(ds, kinds, options);
        config["mode"] = "dataset";
        config["in"] = cfg.in;
        config["resamples"] = cfg.resamples;
        config["seed"] = *cfg.seed;
        config["cutoff"] = cfg.cutoff;
        config["bins"] = cfg.bins;
        outputs["fit"] = {{"nbar", result.fit.params.nbar},
                          {"eta", result.fit.params.eta},
                          {"residual", result.fit.residual}};
        if (result.fit.model_mismatch) {
            warnings.push_back("fit residual exceeds 0.05 (model mismatch)");
        }
        if (!result.reconstruction.converged) {
            warnings.push_back("maximum-likelihood iteration hit the iteration cap before converging");
        }
        Json means = Json::array();
        for (double m : result.bootstrap_means) {
            means.push_back(json_number(m));
        }
        outputs["bootstrap_means"] = std::move(means);
        reports = std::move(result.reports);
    } else {
        if (!cfg.nbar || !cfg.eta) {
            throw UsageError("analytic mode needs both --nbar and --eta");
        }
        const StateParams params = checked_params(*cfg.nbar, *cfg.eta);
        reports = analytic_certificates(params, kinds, cfg.k, !cfg.thermal_only);
        config["mode"] = "analytic";
        config["nbar"] = params.nbar;
        config["eta"] = params.eta;
        config["add_photon"] = !cfg.thermal_only;
    }

    Json list = Json::array();
    for (const auto &report : reports) {
        list.push_back(report_json(report));
        out << certifier_name(report.kind) << " value=" << format_double(report.value)
            << " sigma=" << format_double(report.sigma) << " detected=" << (report.detected ? "true" : "false")
            << "\n";
    }
    outputs["reports"] = std::move(list);
    if (!cfg.out.empty()) {
        write_json(cfg.out, document("certify", std::move(config), std::move(outputs), warnings));
    }
}

void cmd_scan(const ScanConfig &cfg, std::ostream &out) {
    const std::vector<CertifierKind> kinds = parse_certifier_list(cfg.certifiers);
    const int nbar_steps = cfg.nbar_steps.value_or(cfg.steps);
    const int eta_steps = cfg.eta_steps.value_or(cfg.steps);
    if (nbar_steps < 2 || eta_steps < 2) {
        throw UsageError("--steps must be >= 2");
    }
    if (!(cfg.nbar_min >= 0.0 && cfg.nbar_max <= 4.0 && cfg.nbar_min <= cfg.nbar_max)) {
        throw UsageError("nbar range must satisfy 0 <= min <= max <= 4");
    }
    if (!(cfg.eta_min >= 0.0 && cfg.eta_max <= 1.0 && cfg.eta_min <= cfg.eta_max)) {
        throw UsageError("eta range must satisfy 0 <= min <= max <= 1");
    }
    const auto nbar_grid = axis(cfg.nbar_min, cfg.nbar_max, nbar_steps);
    const auto eta_grid = axis(cfg.eta_min, cfg.eta_max, eta_steps);
    const RegionMap map = region_scan(nbar_grid, eta_grid, kinds);

    std::ostringstream csv;
    csv << "nbar,eta,eq1,eq2,wmin,mandel,label\n";
    std::size_t inequality_only = 0;
    for (const auto &cell : map.cells) {
        csv << format_double(cell.nbar) << ',' << format_double(cell.eta) << ',' << format_double(cell.eq1) << ','
            << format_double(cell.eq2) << ',' << format_double(cell.wmin) << ',' << format_double(cell.mandel) << ','
            << region_label_name(cell.label) << '\n';
        inequality_only += cell.label == RegionLabel::DetectedOnlyByInequality ? 1 : 0;
    }
    write_text(cfg.out, csv.str());
    out << "rows=" << map.cells.size() << " inequality_only=" << inequality_only << " path=" << cfg.out << "\n";
}

void cmd_threshold(const ThresholdConfig &cfg, std::ostream &out) {
    const auto kind = parse_certifier(cfg.certifier);
    if (!kind) {
        throw UsageError("unknown certifier \"" + cfg.certifier + "\"; valid names: " + certifier_names());
    }
    if (!(cfg.nbar >= 0.0) || !std::isfinite(cfg.nbar)) {
        throw UsageError("--nbar must be >= 0");
    }
    if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) {
        throw UsageError("--tol must lie in (0, 1)");
    }
    const ThresholdResult result = critical_eta(*kind, cfg.nbar, cfg.tol);
    std::vector<std::string> warnings;
    if (!result.single_crossing) {
        warnings.push_back("detection is not monotone in eta; the bisection assumed a single crossing");
    }
    Json outputs;
    switch (result.status) {
        case ThresholdStatus::Found: {
            std::ostringstream value;
            value << std::fixed << std::setprecision(3) << result.eta;
            out << "critical_eta=" << value.str() << "\n";
            outputs["status"] = "found";
            outputs["critical_eta"] = result.eta;
            break;
        }
        case ThresholdStatus::DetectsEverywhere:
            out << "no-threshold (detects for every eta in [1e-4, 1])\n";
            outputs["status"] = "no-threshold";
            outputs["detail"] = "detects-everywhere";
            break;
        case ThresholdStatus::DetectsNowhere:
            out << "no-threshold (no detection even at eta = 1)\n";
            outputs["status"] = "no-threshold";
            outputs["detail"] = "detects-nowhere";
            break;
    }
    for (const auto &w : warnings) {
        out << "warning: " << w << "\n";
    }
    outputs["single_crossing"] = result.single_crossing;
    if (!cfg.out.empty()) {
        Json config = {{"certifier", cfg.certifier}, {"nbar", cfg.nbar}, {"tol", cfg.tol}};
        write_json(cfg.out, document("threshold", std::move(config), std::move(outputs), warnings));
    }
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Phase-space nonclassicality certification of lossy photon-added thermal states", "phasecert"};
    app.require_subcommand(1);

    SimulateConfig simulate;
    auto *sim = app.add_subcommand("simulate", "Sample phase-randomized homodyne data");
    sim->add_option("--nbar", simulate.nbar, "Thermal mean photon number")->required();
    sim->add_option("--eta", simulate.eta, "Detection efficiency")->required();
    sim->add_option("--count", simulate.count, "Number of quadrature samples")->required();
    sim->add_option("--seed", simulate.seed, "RNG seed")->required();
    sim->add_option("--out", simulate.out, "Output dataset path")->required();
    sim->add_flag("--no-add-photon", simulate.thermal_only, "Simulate the lossy thermal state instead");

    ReconstructConfig recon;
    auto *rec = app.add_subcommand("reconstruct", "Maximum-likelihood photon-number reconstruction");
    rec->add_option("--in", recon.in, "Input dataset")->required();
    rec->add_option("--cutoff", recon.cutoff, "Fock cutoff");
    rec->add_option("--bins", recon.bins, "Quadrature bins");
    rec->add_option("--out", recon.out, "Results document path")->required();

    CertifyConfig certify;
    auto *cert = app.add_subcommand("certify", "Evaluate nonclassicality certifiers");
    cert->add_option("--in", certify.in, "Dataset (statistical mode)");
    cert->add_option("--nbar", certify.nbar, "Thermal mean photon number (analytic mode)");
    cert->add_option("--eta", certify.eta, "Detection efficiency (analytic mode)");
    cert->add_option("--certifiers", certify.certifiers, "Comma-separated list: " + certifier_names());
    cert->add_option("--k", certify.k, "Sigmas required for detection");
    cert->add_option("--resamples", certify.resamples, "Bootstrap resamples");
    cert->add_option("--seed", certify.seed, "Bootstrap seed (dataset mode)");
    cert->add_option("--cutoff", certify.cutoff, "Fock cutoff (dataset mode)");
    cert->add_option("--bins", certify.bins, "Quadrature bins (dataset mode)");
    cert->add_flag("--no-add-photon", certify.thermal_only, "Analytic mode: certify the lossy thermal state");
    cert->add_option("--out", certify.out, "Results document path");

    ScanConfig scan;
    auto *scn = app.add_subcommand("scan", "Classify the (nbar, eta) plane");
    scn->add_option("--nbar-min", scan.nbar_min);
    scn->add_option("--nbar-max", scan.nbar_max);
    scn->add_option("--eta-min", scan.eta_min);
    scn->add_option("--eta-max", scan.eta_max);
    scn->add_option("--steps", scan.steps, "Grid points per axis");
    scn->add_option("--nbar-steps", scan.nbar_steps);
    scn->add_option("--eta-steps", scan.eta_steps);
    scn->add_option("--certifiers", scan.certifiers);
    scn->add_option("--out", scan.out, "CSV output path")->required();

    ThresholdConfig threshold;
    auto *thr = app.add_subcommand("threshold", "Critical efficiency of a certifier");
    thr->add_option("--certifier", threshold.certifier, certifier_names())->required();
    thr->add_option("--nbar", threshold.nbar)->required();
    thr->add_option("--tol", threshold.tol);
    thr->add_option("--out", threshold.out, "Results document path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (sim->parsed()) {
            cmd_simulate(simulate, out);
        } else if (rec->parsed()) {
            cmd_reconstruct(recon, out);
        } else if (cert->parsed()) {
            cmd_certify(certify, out);
        } else if (scn->parsed()) {
            cmd_scan(scan, out);
        } else if (thr->parsed()) {
            cmd_threshold(threshold, out);
        }
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kSuccess;
}

}  // namespace phasecert::cli
