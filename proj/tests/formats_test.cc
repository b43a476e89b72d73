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

#include "mmqpt/formats.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.h"

using namespace mmqpt;
using nlohmann::json;

namespace {

TensorContainer sample_container() {
    std::mt19937_64 rng(1);
    TensorContainer c;
    c.tensors.push_back({"report", build_bs_tensor(BeamSplitterModel::with_transmittance(0.3, 0.2), FockSpace(2, 2))});
    c.tensors.push_back({"working", ProcessTensor(FockSpace(2, 1), oracle::random_psd(16, rng))});
    c.metadata["manifest"] = {{"tool", "test"}, {"seed", 3}};
    return c;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() /
               ("mmqpt_formats_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir);
    return dir;
}

void expect_same(const TensorContainer &a, const TensorContainer &b, double tol) {
    ASSERT_EQ(a.tensors.size(), b.tensors.size());
    for (std::size_t i = 0; i < a.tensors.size(); i++) {
        EXPECT_EQ(a.tensors[i].name, b.tensors[i].name);
        EXPECT_EQ(a.tensors[i].tensor.space(), b.tensors[i].tensor.space());
        const CMatrix diff = a.tensors[i].tensor.jamiolkowski() - b.tensors[i].tensor.jamiolkowski();
        EXPECT_LE(diff.cwiseAbs().maxCoeff(), tol * a.tensors[i].tensor.jamiolkowski().cwiseAbs().maxCoeff());
    }
}

QuadratureDataset sample_dataset() {
    QuadratureDataset d(2, {{{Complex(0.1, 0.2), Complex(-0.3, 0)}, "a"}, {{0.0, 0.0}, "vacuum"}});
    d.add(0, std::array{0.67, 0.67}, std::array{0.125, -1.5});
    d.add(1, std::array{2.64, 2.64}, std::array{1e-300, 3.0}, 2.5);
    return d;
}

}  // namespace

TEST(TensorBinary, RoundTripIsByteIdentical) {
    const TensorContainer c = sample_container();
    std::stringstream first;
    write_tensor_container(first, c);
    const std::string bytes = first.str();
    EXPECT_EQ(bytes.substr(0, 6), "QPTE1\n");
    const TensorContainer back = read_tensor_container(first);
    expect_same(c, back, 0.0);
    EXPECT_EQ(back.metadata["manifest"]["seed"], 3);
    std::stringstream second;
    write_tensor_container(second, back);
    EXPECT_EQ(second.str(), bytes);
}

TEST(TensorBinary, RejectsDamage) {
    std::stringstream s;
    write_tensor_container(s, sample_container());
    const std::string bytes = s.str();
    std::stringstream truncated(bytes.substr(0, bytes.size() - 5));
    EXPECT_THROW(read_tensor_container(truncated), FormatError);
    std::stringstream magic("QPTX1\n{}\n");
    EXPECT_THROW(read_tensor_container(magic), FormatError);
    std::stringstream header("QPTE1\nnot json\n");
    EXPECT_THROW(read_tensor_container(header), FormatError);
}

TEST(TensorJson, RoundTrip) {
    const TensorContainer c = sample_container();
    const json j = tensor_container_to_json(c);
    EXPECT_EQ(j["layout"], "input-major");
    const TensorContainer back = tensor_container_from_json(json::parse(j.dump()));
    expect_same(c, back, 0.0);
    json bad = j;
    bad["tensors"][0].erase("cutoff");
    try {
        tensor_container_from_json(bad);
        FAIL() << "expected FormatError";
    } catch (const FormatError &e) {
        EXPECT_NE(e.where().find("tensors[0]"), std::string::npos);
    }
}

TEST(TensorCsv, RoundTrip) {
    const TensorContainer c = sample_container();
    std::stringstream s;
    write_tensor_csv(s, c);
    const std::string text = s.str();
    EXPECT_NE(text.find("tensor,modes,cutoff,n,m,j,k,re,im"), std::string::npos);
    const TensorContainer back = read_tensor_csv(s);
    expect_same(c, back, 1e-9);
}

TEST(TensorFiles, FormatDetection) {
    const auto dir = temp_dir();
    const TensorContainer c = sample_container();
    for (auto [name, fmt] : {std::pair{"t.bin", TensorFormat::kBinary}, std::pair{"t.json", TensorFormat::kJson},
                             std::pair{"t.csv", TensorFormat::kCsv}}) {
        save_tensors(dir / name, c, fmt);
        expect_same(c, load_tensors(dir / name), fmt == TensorFormat::kCsv ? 1e-9 : 0.0);
    }
    EXPECT_EQ(parse_tensor_format("json"), TensorFormat::kJson);
    EXPECT_THROW(parse_tensor_format("xml"), FormatError);
    EXPECT_THROW(load_tensors(dir / "missing.bin"), std::exception);
    std::filesystem::remove_all(dir);
}

TEST(TensorContainer, Lookup) {
    TensorContainer c = sample_container();
    EXPECT_EQ(c.get().space(), FockSpace(2, 2));
    EXPECT_EQ(c.get("working").space(), FockSpace(2, 1));
    EXPECT_THROW(c.get("nope"), FormatError);
    std::swap(c.tensors[0], c.tensors[1]);
    c.tensors[0].name = "first";
    c.tensors[1].name = "second";
    EXPECT_EQ(c.get().space(), FockSpace(2, 1));
    EXPECT_THROW(TensorContainer{}.get(), FormatError);
}

TEST(Dataset, RoundTrip) {
    DatasetFile f{sample_dataset(), {{"seed", 9}}};
    f.data.set_binned(true);
    std::stringstream s;
    write_dataset(s, f);
    const std::string bytes = s.str();
    EXPECT_EQ(bytes.substr(0, 6), "QPTQ1\n");
    const DatasetFile back = read_dataset(s);
    EXPECT_EQ(back.data, f.data);
    EXPECT_EQ(back.metadata["seed"], 9);
    std::stringstream again;
    write_dataset(again, back);
    EXPECT_EQ(again.str(), bytes);
    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    EXPECT_THROW(read_dataset(truncated), FormatError);

    std::stringstream csv;
    write_dataset_csv(csv, f.data);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "probe,theta1,theta2,x1,x2,weight");
    EXPECT_NE(csv.str().find("\n1,2.6400000000000001,2.6400000000000001,1e-300,3,2.5\n"), std::string::npos);
}

TEST(Dataset, Files) {
    const auto dir = temp_dir();
    DatasetFile f{sample_dataset(), json::object()};
    save_dataset(dir / "d.qptq", f);
    EXPECT_EQ(load_dataset(dir / "d.qptq").data, f.data);
    std::filesystem::remove_all(dir);
}

TEST(Json, DensityMatrixRoundTrip) {
    std::mt19937_64 rng(2);
    const DensityMatrix rho{oracle::random_density(9, rng), FockSpace(2, 2)};
    const DensityMatrix back = density_matrix_from_json(json::parse(density_matrix_to_json(rho).dump()));
    EXPECT_EQ(back.space, rho.space);
    EXPECT_EQ(back.matrix, rho.matrix);
}

TEST(Json, Probes) {
    const CoherentProbe p = probe_from_json(json::parse(R"({"label": "x", "amplitudes": [0.5, [0.1, -0.2]]})"), "p");
    EXPECT_EQ(p.label, "x");
    EXPECT_EQ(p.amplitudes[0], Complex(0.5, 0));
    EXPECT_EQ(p.amplitudes[1], Complex(0.1, -0.2));
    EXPECT_EQ(probe_from_json(probe_to_json(p), "p"), p);
    EXPECT_THROW(probe_from_json(json::parse(R"({"amplitudes": ["a"]})"), "p"), FormatError);
    EXPECT_THROW(probe_from_json(json::parse(R"({"label": "y"})"), "p"), FormatError);
}

TEST(Json, Models) {
    const auto m = BeamSplitterModel::with_transmittance(0.3, 0.7);
    const auto back = model_from_json(model_to_json(m));
    EXPECT_LT((back.mode_matrix - m.mode_matrix).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(back.global_phase, m.global_phase);
    const auto id = model_from_json(json::parse(R"({"kind": "identity"})"));
    EXPECT_EQ(id.mode_matrix, Eigen::Matrix2cd::Identity());
    const auto bs = model_from_json(json::parse(R"({"transmittance": 0.5})"));
    EXPECT_LT((bs.mode_matrix - BeamSplitterModel::symmetric().mode_matrix).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(model_from_json(json::parse(R"({"kind": "prism"})")), FormatError);
    EXPECT_THROW(model_from_json(json::parse(R"({"transmittance": 2})")), FormatError);
}

TEST(Json, RunConfig) {
    const SimulationRun d = run_from_json(json::object());
    EXPECT_EQ(d.schedule.probes.size(), 17u);
    EXPECT_EQ(d.schedule.samples_per_setting, 30000);
    EXPECT_EQ(d.seed, 1u);
    const SimulationRun r = run_from_json(json::parse(R"({
        "seed": 5,
        "schedule": {"samples_per_setting": 10, "lo_phase_sets": [[0.1, 0.2]],
                     "probes": [{"amplitudes": [0.3, 0]}, {"label": "v", "amplitudes": [0, 0]}]}})"));
    EXPECT_EQ(r.seed, 5u);
    ASSERT_EQ(r.schedule.probes.size(), 2u);
    EXPECT_EQ(r.schedule.probes[0].label, "p0");
    EXPECT_EQ(r.schedule.lo_phase_sets.size(), 1u);
    const SimulationRun again = run_from_json(run_to_json(r));
    EXPECT_EQ(again.schedule.probes, r.schedule.probes);
    EXPECT_EQ(again.schedule.lo_phase_sets, r.schedule.lo_phase_sets);
    EXPECT_THROW(run_from_json(json::parse(R"({"schedule": {"n_pairs": 15}})")), FormatError);
    EXPECT_THROW(run_from_json(json::parse(R"({"schedule": {"lo_phase_sets": [[0.1]]}})")), FormatError);
    EXPECT_THROW(run_from_json(json::parse(R"({"phase_noise_sigma": -1})")), FormatError);
    EXPECT_THROW(run_from_json(json::parse(R"({"seed": "x"})")), FormatError);
}

TEST(Json, ReconstructionOptions) {
    ReconstructionOptions o;
    o.max_iterations = 17;
    o.working_cutoff = 3;
    o.enforce_phase_invariance = false;
    const ReconstructionOptions back = options_from_json(options_to_json(o));
    EXPECT_EQ(back.max_iterations, 17);
    EXPECT_EQ(back.working_cutoff, 3);
    EXPECT_FALSE(back.enforce_phase_invariance);
    EXPECT_EQ(options_from_json(json::object()).max_iterations, 200);
}

TEST(Json, ParseFileErrors) {
    const auto dir = temp_dir();
    std::ofstream(dir / "bad.json") << "{\"a\": }";
    EXPECT_THROW(parse_json_file(dir / "bad.json"), FormatError);
    EXPECT_THROW(parse_json_file(dir / "missing.json"), FormatError);
    std::filesystem::remove_all(dir);
}
