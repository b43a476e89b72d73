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

// On-disk formats.
//
// Tensor container (QPTE1):
//   line 1   "QPTE1"
//   line 2   compact JSON header {"format", "layout": "input-major", "conventions", "tensors": [{name,
//            modes, cutoff, dim}], ...metadata}
//   payload  for each tensor in header order, dim*dim complex entries row-major, each as two
//            little-endian IEEE-754 doubles (re, im). dim = total_dim^2.
//
// Quadrature dataset (QPTQ1):
//   line 1   "QPTQ1"
//   line 2   compact JSON header {"format", "modes", "probes", "binned", "records", "record_bytes", ...metadata}
//   payload  per record: probe index (uint32 LE), then modes phases, modes quadratures and the
//            weight as little-endian doubles.

#ifndef MMQPT_FORMATS_H
#define MMQPT_FORMATS_H

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmqpt/maxlik.h"
#include "mmqpt/process_tensor.h"
#include "mmqpt/simulator.h"

namespace mmqpt {

/// Malformed file or configuration. `where` names the field or byte position.
class FormatError : public std::runtime_error {
   public:
    FormatError(const std::string &where, const std::string &what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where) {}
    const std::string &where() const { return where_; }

   private:
    std::string where_;
};

struct NamedTensor {
    std::string name;
    ProcessTensor tensor;
};

struct TensorContainer {
    std::vector<NamedTensor> tensors;
    /// Extra header fields (manifest, diagnostics summary, ...). Reserved keys are overwritten.
    nlohmann::json metadata = nlohmann::json::object();

    /// Named tensor; an empty name selects "report" if present, else the first tensor.
    const ProcessTensor &get(const std::string &name = "") const;
};

enum class TensorFormat { kBinary, kJson, kCsv };

TensorFormat parse_tensor_format(const std::string &s);

void write_tensor_container(std::ostream &out, const TensorContainer &c);
TensorContainer read_tensor_container(std::istream &in);

nlohmann::json tensor_container_to_json(const TensorContainer &c);
TensorContainer tensor_container_from_json(const nlohmann::json &j);

/// Long-form CSV "tensor,n,m,j,k,re,im" with multi-indices written as "i1 i2"; 10 significant
/// digits, so a re-read tensor agrees to about 1e-9 only.
void write_tensor_csv(std::ostream &out, const TensorContainer &c);
TensorContainer read_tensor_csv(std::istream &in);

void save_tensors(const std::filesystem::path &path, const TensorContainer &c, TensorFormat format);
/// Detects the binary, JSON and CSV variants from the first bytes.
TensorContainer load_tensors(const std::filesystem::path &path);

struct DatasetFile {
    QuadratureDataset data;
    nlohmann::json metadata = nlohmann::json::object();
};

void write_dataset(std::ostream &out, const DatasetFile &f);
DatasetFile read_dataset(std::istream &in);
void write_dataset_csv(std::ostream &out, const QuadratureDataset &d);
void save_dataset(const std::filesystem::path &path, const DatasetFile &f);
DatasetFile load_dataset(const std::filesystem::path &path);

nlohmann::json density_matrix_to_json(const DensityMatrix &rho);
DensityMatrix density_matrix_from_json(const nlohmann::json &j);

nlohmann::json probe_to_json(const CoherentProbe &p);
CoherentProbe probe_from_json(const nlohmann::json &j, const std::string &where);

/// {"kind": "beam_splitter", "transmittance", "global_phase"} | {"kind": "identity"} |
/// {"kind": "matrix", "matrix": [[[re, im], ...], ...], "global_phase"}
nlohmann::json model_to_json(const BeamSplitterModel &m);
BeamSplitterModel model_from_json(const nlohmann::json &j, const std::string &where = "model");

/// Simulation run configuration. Every field is optional and defaults to the standard schedule:
/// {"model", "seed", "phase_noise_sigma", "schedule": {"total_energy", "n_pairs",
///  "lo_phase_sets", "samples_per_setting", "probes"}}
SimulationRun run_from_json(const nlohmann::json &j);
nlohmann::json run_to_json(const SimulationRun &run);

/// {"max_iterations", "loglik_rel_tol", "eigenvalue_floor", "probability_floor",
///  "enforce_phase_invariance", "working_cutoff", "report_cutoff", "threads"}
ReconstructionOptions options_from_json(const nlohmann::json &j, ReconstructionOptions base = {});
nlohmann::json options_to_json(const ReconstructionOptions &o);

/// Parses a JSON document; syntax errors become FormatError with line/column.
nlohmann::json parse_json_file(const std::filesystem::path &path);

}  // namespace mmqpt

#endif  // MMQPT_FORMATS_H
