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

#include "phasecert/pipeline.h"

#include "phasecert/phase_space.h"

namespace phasecert {
namespace {

double evaluate_at(CertifierKind kind, const PhaseSpaceState &state, const std::vector<PhasePoint> &points) {
    switch (kind) {
        case CertifierKind::MultiPointWigner:
            return eq1_value(state, points[0], points[1]);
        case CertifierKind::WignerVsQ:
            return eq2_value(state, points[0]);
        case CertifierKind::WignerNegativity:
            return state.wigner(points[0]);
        case CertifierKind::MandelQ:
            return mandel_certifier_value(state.photon_numbers());
    }
    return 0.0;
}

}  // namespace

DatasetCertification certify_dataset(const QuadratureDataset &ds, std::span<const CertifierKind> kinds,
                                     const DatasetCertifyOptions &options) {
    DatasetCertification out{{}, {}, reconstruct(ds, options.reconstruct), {}};
    out.fit = fit_params(out.reconstruction.dist);
    const PhaseSpaceState model(lossy_spats(out.fit.params));

    std::vector<std::vector<PhasePoint>> points;
    for (CertifierKind kind : kinds) {
        points.push_back(evaluate_certifier(kind, model).points);
    }
    auto evaluate_all = [&](const PhotonNumberDistribution &dist) {
        const PhaseSpaceState state(dist);
        std::vector<double> values;
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            values.push_back(evaluate_at(kinds[i], state, points[i]));
        }
        return values;
    };

    const std::vector<double> point_values = evaluate_all(out.reconstruction.dist);
    const auto resampled = bootstrap_multi(
        ds,
        [&](const QuadratureDataset &d) { return evaluate_all(reconstruct(d, options.reconstruct).dist); },
        options.resamples, options.seed);

    for (std::size_t i = 0; i < kinds.size(); ++i) {
        out.reports.push_back(make_report(kinds[i], point_values[i], resampled[i].sigma, points[i], out.fit.params,
                                          options.confidence_k));
        out.bootstrap_means.push_back(resampled[i].value);
    }
    return out;
}

}  // namespace phasecert
