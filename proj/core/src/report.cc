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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "mmqpt/linalg.h"

namespace mmqpt {

Eigen::MatrixXd diagonal_transitions(const ProcessTensor &e) {
    const std::size_t d = static_cast<std::size_t>(e.state_dim());
    Eigen::MatrixXd p(d, d);
    for (std::size_t n = 0; n < d; n++) {
        for (std::size_t j = 0; j < d; j++) {
            p(n, j) = e.jamiolkowski()(n * d + j, n * d + j).real();
        }
    }
    return p;
}

std::string fock_label(std::size_t flat, const FockSpace &space) {
    std::string s;
    for (int i : multi_index(flat, space)) {
        if (!s.empty()) {
            s += ' ';
        }
        s += std::to_string(i);
    }
    return s;
}

std::vector<std::string> jamiolkowski_labels(const FockSpace &space) {
    const std::size_t d = space.total_dim();
    std::vector<std::string> out;
    out.reserve(d * d);
    for (std::size_t n = 0; n < d; n++) {
        for (std::size_t j = 0; j < d; j++) {
            out.push_back(fock_label(n, space) + "|" + fock_label(j, space));
        }
    }
    return out;
}

double hom_element(const ProcessTensor &e) {
    const FockSpace &s = e.space();
    if (s.modes() != 2 || s.cutoff() < 1) {
        throw std::invalid_argument("hom_element: needs 2 modes and cutoff >= 1");
    }
    const std::array<int, 2> one_one = {1, 1};
    const std::size_t i = flat_index(one_one, s);
    return e.element(i, i, i, i).real();
}

nlohmann::json tensor_summary(const ProcessTensor &e) {
    const auto range = eigen_range(hermitian_part(e.jamiolkowski()));
    const auto mask = phase_mask(e.space());
    double forbidden = 0;
    for (Eigen::Index r = 0; r < mask.rows(); r++) {
        for (Eigen::Index c = 0; c < mask.cols(); c++) {
            if (!mask(r, c)) {
                forbidden = std::max(forbidden, std::abs(e.jamiolkowski()(r, c)));
            }
        }
    }
    nlohmann::json j = {{"modes", e.space().modes()},
                        {"cutoff", e.space().cutoff()},
                        {"trace_preservation_defect", trace_preservation_defect(e)},
                        {"min_eigenvalue", range.min},
                        {"max_eigenvalue", range.max},
                        {"hermiticity_defect", hermiticity_defect(e.jamiolkowski())},
                        {"max_forbidden_magnitude", forbidden}};
    if (e.space().modes() == 2 && e.space().cutoff() >= 1) {
        j["hom_element"] = hom_element(e);
    }
    return j;
}

std::string labeled_csv(const Eigen::MatrixXd &m, const std::vector<std::string> &rows,
                        const std::vector<std::string> &cols) {
    std::ostringstream out;
    out << std::setprecision(12) << "label";
    for (const auto &c : cols) {
        out << ',' << c;
    }
    out << '\n';
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        out << rows[r];
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            out << ',' << m(r, c);
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string colour(double v, double scale, bool diverging) {
    double t = scale > 0 ? v / scale : 0.0;
    int r, g, b;
    if (diverging) {
        t = std::clamp(t, -1.0, 1.0);
        if (t >= 0) {
            r = 255;
            g = b = static_cast<int>(std::lround(255 * (1 - t)));
        } else {
            b = 255;
            r = g = static_cast<int>(std::lround(255 * (1 + t)));
        }
    } else {
        t = std::clamp(t, 0.0, 1.0);
        r = static_cast<int>(std::lround(255 * (1 - t)));
        g = static_cast<int>(std::lround(255 * (1 - 0.6 * t)));
        b = 255;
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string svg_heatmap(const Eigen::MatrixXd &m, const std::vector<std::string> &rows,
                        const std::vector<std::string> &cols, const std::string &title, bool diverging) {
    const double cell = m.rows() > 100 ? 2.0 : (m.rows() > 30 ? 8.0 : 24.0);
    const bool labels = m.rows() <= 30 && m.cols() <= 30;
    const double margin = labels ? 60.0 : 10.0;
    const double top = margin + 20.0;
    const double w = margin + cell * m.cols() + 10;
    const double h = top + cell * m.rows() + 10;
    const double scale = diverging ? m.cwiseAbs().maxCoeff() : std::max(0.0, m.maxCoeff());

    std::ostringstream out;
    out << std::setprecision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\">\n";
    out << "<text x=\"" << margin << "\" y=\"14\" font-size=\"12\">" << title << " (scale " << scale << ")</text>\n";
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            if (m(r, c) == 0 && !labels) {
                continue;
            }
            out << "<rect x=\"" << margin + c * cell << "\" y=\"" << top + r * cell << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << colour(m(r, c), scale, diverging) << "\"/>\n";
        }
    }
    if (labels) {
        for (Eigen::Index r = 0; r < m.rows(); r++) {
            out << "<text x=\"" << margin - 4 << "\" y=\"" << top + (r + 0.7) * cell
                << "\" font-size=\"9\" text-anchor=\"end\">" << rows[r] << "</text>\n";
        }
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            const double x = margin + (c + 0.6) * cell;
            out << "<text x=\"" << x << "\" y=\"" << top - 4 << "\" font-size=\"9\" transform=\"rotate(-60 " << x
                << ' ' << top - 4 << ")\">" << cols[c] << "</text>\n";
        }
    }
    out << "<rect x=\"" << margin << "\" y=\"" << top << "\" width=\"" << cell * m.cols() << "\" height=\""
        << cell * m.rows() << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "</svg>\n";
    return out.str();
}

std::vector<std::filesystem::path> write_report(const ProcessTensor &e, const std::filesystem::path &dir,
                                                const nlohmann::json &manifest) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string &name, const std::string &text) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out) {
            throw std::runtime_error("cannot write " + path.string());
        }
        written.push_back(path);
    };

    const FockSpace &s = e.space();
    std::vector<std::string> kets;
    for (int i = 0; i < s.total_dim(); i++) {
        kets.push_back(fock_label(i, s));
    }
    const auto diag = diagonal_transitions(e);
    emit("diagonal.csv", labeled_csv(diag, kets, kets));
    emit("diagonal.svg", svg_heatmap(diag, kets, kets, "P(out | in)", false));

    const auto labels = jamiolkowski_labels(s);
    const Eigen::MatrixXd re = e.jamiolkowski().real();
    const Eigen::MatrixXd im = e.jamiolkowski().imag();
    emit("real.csv", labeled_csv(re, labels, labels));
    emit("real.svg", svg_heatmap(re, labels, labels, "Re E", true));
    emit("imag.csv", labeled_csv(im, labels, labels));
    emit("imag.svg", svg_heatmap(im, labels, labels, "Im E", true));

    nlohmann::json summary = tensor_summary(e);
    summary["manifest"] = manifest;
    emit("summary.json", summary.dump(2) + "\n");
    return written;
}

}  // namespace mmqpt
