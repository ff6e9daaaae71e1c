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

#ifndef PHASECERT_PIPELINE_H
#define PHASECERT_PIPELINE_H

#include <cstdint>
#include <span>
#include <vector>

#include "phasecert/certifiers.h"
#include "phasecert/homodyne.h"
#include "phasecert/tomography.h"

namespace phasecert {

struct DatasetCertifyOptions {
    double confidence_k = kDefaultConfidence;
    int resamples = 50;
    std::uint64_t seed = 0;
    ReconstructOptions reconstruct;
};

struct DatasetCertification {
    std::vector<CertificateReport> reports;
    /// Mean of the bootstrap outputs, parallel to `reports`.
    std::vector<double> bootstrap_means;
    DiagonalMleResult reconstruction;
    FitResult fit;
};

/// Statistical certification of a measured dataset.
///
/// The full dataset is reconstructed and the lossy photon-added thermal model is fitted to it.
/// Each certifier's phase-space points are optimized on the fitted model and then held fixed;
/// the reported value is the certifier evaluated on the reconstruction at those points, and
/// sigma is the bootstrap standard deviation of the same quantity over resampled datasets.
DatasetCertification certify_dataset(const QuadratureDataset &ds, std::span<const CertifierKind> kinds,
                                     const DatasetCertifyOptions &options = {});

}  // namespace phasecert

#endif
