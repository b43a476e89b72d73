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

#include "mmqpt/report.h"

#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <fstream>

using namespace mmqpt;

TEST(Report, DiagonalTransitionsOfTheBeamSplitter) {
    FockSpace s(2, 2);
    const Eigen::MatrixXd p = diagonal_transitions(build_bs_tensor(BeamSplitterModel::symmetric(), s));
    const auto i11 = flat_index(std::array{1, 1}, s);
    const auto i20 = flat_index(std::array{2, 0}, s);
    const auto i10 = flat_index(std::array{1, 0}, s);
    EXPECT_NEAR(p(i11, i11), 0.0, 1e-15);
    EXPECT_NEAR(p(i11, i20), 0.5, 1e-12);
    EXPECT_NEAR(p(i10, i10), 0.5, 1e-12);
    EXPECT_NEAR(p(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(hom_element(build_bs_tensor(BeamSplitterModel::symmetric(), s)), 0.0, 1e-15);
}

TEST(Report, IdentityPattern) {
    FockSpace s(2, 2);
    const Eigen::MatrixXd p = diagonal_transitions(identity_tensor(s));
    EXPECT_EQ(p, Eigen::MatrixXd::Identity(9, 9));
    EXPECT_EQ(hom_element(identity_tensor(s)), 1.0);
    EXPECT_THROW(hom_element(identity_tensor(FockSpace(2, 0))), std::invalid_argument);
}

TEST(Report, Labels) {
    FockSpace s(2, 2);
    EXPECT_EQ(fock_label(5, s), "1 2");
    const auto labels = jamiolkowski_labels(s);
    ASSERT_EQ(labels.size(), 81u);
    EXPECT_EQ(labels[1 * 9 + 3], "0 1|1 0");
}

TEST(Report, Summary) {
    const auto j = tensor_summary(identity_tensor(FockSpace(2, 2)));
    EXPECT_EQ(j["modes"], 2);
    EXPECT_EQ(j["cutoff"], 2);
    EXPECT_EQ(j["trace_preservation_defect"], 0.0);
    EXPECT_EQ(j["hom_element"], 1.0);
    EXPECT_NEAR(j["max_eigenvalue"].get<double>(), 9.0, 1e-12);
}

TEST(Report, CsvAndSvg) {
    Eigen::MatrixXd m(2, 2);
    m << 1, -0.5, 0.25, 0;
    const std::string csv = labeled_csv(m, {"a", "b"}, {"x", "y"});
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "label,x,y");
    const std::string svg = svg_heatmap(m, {"a", "b"}, {"x", "y"}, "t", true);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find(">t (scale"), std::string::npos);
}

TEST(Report, WritesFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "mmqpt_report_test";
    std::filesystem::remove_all(dir);
    const auto files = write_report(build_bs_tensor(BeamSplitterModel::symmetric(), FockSpace(2, 2)), dir,
                                    {{"tool", "test"}});
    EXPECT_EQ(files.size(), 7u);
    for (const char *name : {"diagonal.csv", "diagonal.svg", "real.csv", "real.svg", "imag.csv", "imag.svg",
                             "summary.json"}) {
        EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
    }
    std::ifstream in(dir / "summary.json");
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["manifest"]["tool"], "test");
    std::filesystem::remove_all(dir);
}
