// Copyright 2026 The mmqpt Authors
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

#ifndef MMQPT_REPORT_H
#define MMQPT_REPORT_H

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mmqpt/process_tensor.h"

namespace mmqpt {

/// P(j | n) = E^{n,n}_{j,j}; rows are inputs n, columns outputs j.
Eigen::MatrixXd diagonal_transitions(const ProcessTensor &e);

/// "1 0" style label of a flat Fock index.
std::string fock_label(std::size_t flat, const FockSpace &space);

/// "in|out" labels of Jamiolkowski rows (and columns).
std::vector<std::string> jamiolkowski_labels(const FockSpace &space);

/// E^{(1,1),(1,1)}_{(1,1),(1,1)}, the coincidence probability for one photon in each input.
double hom_element(const ProcessTensor &e);

/// HOM element, trace-preservation defect, eigenvalue range, Hermiticity defect and the largest
/// phase-forbidden magnitude.
nlohmann::json tensor_summary(const ProcessTensor &e);

std::string labeled_csv(const Eigen::MatrixXd &m, const std::vector<std::string> &rows,
                        const std::vector<std::string> &cols);

/// Heatmap of m. Symmetric colour scale around 0 when `diverging`, else 0..max.
std::string svg_heatmap(const Eigen::MatrixXd &m, const std::vector<std::string> &rows,
                        const std::vector<std::string> &cols, const std::string &title, bool diverging);

/// Writes diagonal.csv/.svg, real.csv/.svg, imag.csv/.svg and summary.json into dir. Returns the
/// written paths.
std::vector<std::filesystem::path> write_report(const ProcessTensor &e, const std::filesystem::path &dir,
                                                const nlohmann::json &manifest);

}  // namespace mmqpt

#endif  // MMQPT_REPORT_H
