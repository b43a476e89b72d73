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

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mmqpt {

using nlohmann::json;

namespace {

constexpr const char *kTensorMagic = "QPTE1";
constexpr const char *kDatasetMagic = "QPTQ1";

void put_u32(std::string &buf, std::uint32_t v) {
    for (int i = 0; i < 4; i++) {
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_f64(std::string &buf, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; i++) {
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

std::uint32_t get_u32(const unsigned char *p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; i--) {
        v = (v << 8) | p[i];
    }
    return v;
}

double get_f64(const unsigned char *p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; i--) {
        v = (v << 8) | p[i];
    }
    return std::bit_cast<double>(v);
}

void read_exact(std::istream &in, char *dst, std::size_t n, const char *what) {
    in.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n) {
        throw FormatError(what, "unexpected end of file");
    }
}

json read_header(std::istream &in, const char *magic) {
    std::string line;
    if (!std::getline(in, line) || line != magic) {
        throw FormatError("header", std::string("missing magic line '") + magic + "'");
    }
    if (!std::getline(in, line)) {
        throw FormatError("header", "missing JSON header line");
    }
    try {
        return json::parse(line);
    } catch (const json::parse_error &e) {
        throw FormatError("header", e.what());
    }
}

template <typename T>
T field(const json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(where + "." + key, "missing field");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw FormatError(where + "." + key, std::string("wrong type (") + e.what() + ")");
    }
}

template <typename T>
T field_or(const json &j, const char *key, T fallback, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        return fallback;
    }
    return field<T>(j, key, where);
}

Complex complex_from_json(const json &j, const std::string &where) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw FormatError(where, "expected a number or [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json matrix_part(const CMatrix &m, bool imag) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            row.push_back(imag ? m(r, c).imag() : m(r, c).real());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_parts(const json &re, const json &im, Eigen::Index dim, const std::string &where) {
    if (!re.is_array() || !im.is_array() || static_cast<Eigen::Index>(re.size()) != dim ||
        static_cast<Eigen::Index>(im.size()) != dim) {
        throw FormatError(where, "expected " + std::to_string(dim) + " rows in 'real' and 'imag'");
    }
    CMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; r++) {
        if (static_cast<Eigen::Index>(re[r].size()) != dim || static_cast<Eigen::Index>(im[r].size()) != dim) {
            throw FormatError(where + ".row" + std::to_string(r), "wrong row length");
        }
        for (Eigen::Index c = 0; c < dim; c++) {
            m(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
        }
    }
    return m;
}

json conventions() {
    return {
        {"element", "row n*d+j, column m*d+k holds E^{n,m}_{j,k}"},
        {"flat_index", "row-major, first mode most significant"},
        {"quadrature", "x=(a+a^dag)/sqrt(2), vacuum variance 1/2"},
        {"phase", "<n|x,theta> = exp(+i n theta) psi_n(x)"},
    };
}

json container_header(const TensorContainer &c) {
    json h = c.metadata.is_object() ? c.metadata : json::object();
    h["format"] = kTensorMagic;
    h["layout"] = "input-major";
    h["conventions"] = conventions();
    json list = json::array();
    for (const auto &t : c.tensors) {
        list.push_back({{"name", t.name},
                        {"modes", t.tensor.space().modes()},
                        {"cutoff", t.tensor.space().cutoff()},
                        {"dim", t.tensor.jamiolkowski().rows()}});
    }
    h["tensors"] = std::move(list);
    return h;
}

json strip_reserved(json h, std::initializer_list<const char *> keys) {
    for (const char *k : keys) {
        h.erase(k);
    }
    return h;
}

std::string multi_label(std::size_t flat, const FockSpace &space) {
    std::string s;
    for (int i : multi_index(flat, space)) {
        if (!s.empty()) {
            s += ' ';
        }
        s += std::to_string(i);
    }
    return s;
}

MultiIndex parse_label(const std::string &s, const std::string &where) {
    MultiIndex idx;
    std::istringstream in(s);
    int v;
    while (in >> v) {
        idx.push_back(v);
    }
    if (idx.empty()) {
        throw FormatError(where, "empty multi-index");
    }
    return idx;
}

}  // namespace

const ProcessTensor &TensorContainer::get(const std::string &name) const {
    if (tensors.empty()) {
        throw FormatError("tensors", "container holds no tensor");
    }
    const std::string want = name.empty() ? "report" : name;
    for (const auto &t : tensors) {
        if (t.name == want) {
            return t.tensor;
        }
    }
    if (name.empty()) {
        return tensors.front().tensor;
    }
    throw FormatError("tensors", "no tensor named '" + name + "'");
}

TensorFormat parse_tensor_format(const std::string &s) {
    if (s == "bin") {
        return TensorFormat::kBinary;
    }
    if (s == "json") {
        return TensorFormat::kJson;
    }
    if (s == "csv") {
        return TensorFormat::kCsv;
    }
    throw FormatError("format", "unknown format '" + s + "' (expected bin, json or csv)");
}

void write_tensor_container(std::ostream &out, const TensorContainer &c) {
    std::string buf = std::string(kTensorMagic) + "\n" + container_header(c).dump() + "\n";
    for (const auto &t : c.tensors) {
        const CMatrix &m = t.tensor.jamiolkowski();
        buf.reserve(buf.size() + static_cast<std::size_t>(m.size()) * 16);
        for (Eigen::Index r = 0; r < m.rows(); r++) {
            for (Eigen::Index col = 0; col < m.cols(); col++) {
                put_f64(buf, m(r, col).real());
                put_f64(buf, m(r, col).imag());
            }
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

TensorContainer read_tensor_container(std::istream &in) {
    json h = read_header(in, kTensorMagic);
    TensorContainer c;
    const json list = h.value("tensors", json::array());
    for (std::size_t i = 0; i < list.size(); i++) {
        const std::string where = "tensors[" + std::to_string(i) + "]";
        const FockSpace space(field<int>(list[i], "modes", where), field<int>(list[i], "cutoff", where));
        const Eigen::Index dim = field<Eigen::Index>(list[i], "dim", where);
        if (dim != static_cast<Eigen::Index>(space.total_dim()) * space.total_dim()) {
            throw FormatError(where + ".dim", "inconsistent with modes and cutoff");
        }
        std::vector<char> raw(static_cast<std::size_t>(dim * dim * 16));
        read_exact(in, raw.data(), raw.size(), where.c_str());
        const auto *p = reinterpret_cast<const unsigned char *>(raw.data());
        CMatrix m(dim, dim);
        for (Eigen::Index r = 0; r < dim; r++) {
            for (Eigen::Index col = 0; col < dim; col++) {
                m(r, col) = Complex(get_f64(p), get_f64(p + 8));
                p += 16;
            }
        }
        c.tensors.push_back({field<std::string>(list[i], "name", where), ProcessTensor(space, std::move(m))});
    }
    c.metadata = strip_reserved(std::move(h), {"format", "layout", "conventions", "tensors"});
    return c;
}

json tensor_container_to_json(const TensorContainer &c) {
    json h = container_header(c);
    for (std::size_t i = 0; i < c.tensors.size(); i++) {
        h["tensors"][i]["real"] = matrix_part(c.tensors[i].tensor.jamiolkowski(), false);
        h["tensors"][i]["imag"] = matrix_part(c.tensors[i].tensor.jamiolkowski(), true);
    }
    return h;
}

TensorContainer tensor_container_from_json(const json &j) {
    TensorContainer c;
    if (!j.is_object() || !j.contains("tensors") || !j["tensors"].is_array()) {
        throw FormatError("tensors", "missing tensor list");
    }
    const json &list = j["tensors"];
    for (std::size_t i = 0; i < list.size(); i++) {
        const std::string where = "tensors[" + std::to_string(i) + "]";
        const FockSpace space(field<int>(list[i], "modes", where), field<int>(list[i], "cutoff", where));
        const Eigen::Index dim = static_cast<Eigen::Index>(space.total_dim()) * space.total_dim();
        CMatrix m = matrix_from_parts(list[i].value("real", json()), list[i].value("imag", json()), dim, where);
        c.tensors.push_back({field_or<std::string>(list[i], "name", "tensor", where), ProcessTensor(space, m)});
    }
    c.metadata = strip_reserved(j, {"format", "layout", "conventions", "tensors"});
    return c;
}

void write_tensor_csv(std::ostream &out, const TensorContainer &c) {
    out << "# mmqpt tensor export (lossy, 10 significant digits)\n";
    out << "tensor,modes,cutoff,n,m,j,k,re,im\n";
    out << std::setprecision(10);
    for (const auto &t : c.tensors) {
        const FockSpace &s = t.tensor.space();
        const std::size_t d = s.total_dim();
        const CMatrix &jam = t.tensor.jamiolkowski();
        for (std::size_t n = 0; n < d; n++) {
            for (std::size_t m = 0; m < d; m++) {
                for (std::size_t j = 0; j < d; j++) {
                    for (std::size_t k = 0; k < d; k++) {
                        const Complex v = jam(n * d + j, m * d + k);
                        if (v == Complex(0)) {
                            continue;
                        }
                        out << t.name << ',' << s.modes() << ',' << s.cutoff() << ',' << multi_label(n, s) << ','
                            << multi_label(m, s) << ',' << multi_label(j, s) << ',' << multi_label(k, s) << ','
                            << v.real() << ',' << v.imag() << '\n';
                    }
                }
            }
        }
    }
}

TensorContainer read_tensor_csv(std::istream &in) {
    struct Partial {
        FockSpace space;
        CMatrix m;
    };
    std::vector<std::string> order;
    std::map<std::string, Partial> parts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (line.empty() || line[0] == '#' || line.rfind("tensor,", 0) == 0) {
            continue;
        }
        const std::string where = "line " + std::to_string(lineno);
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cols.push_back(cell);
        }
        if (cols.size() != 9) {
            throw FormatError(where, "expected 9 columns");
        }
        try {
            const FockSpace space(std::stoi(cols[1]), std::stoi(cols[2]));
            auto it = parts.find(cols[0]);
            if (it == parts.end()) {
                const Eigen::Index dim = static_cast<Eigen::Index>(space.total_dim()) * space.total_dim();
                it = parts.emplace(cols[0], Partial{space, CMatrix::Zero(dim, dim)}).first;
                order.push_back(cols[0]);
            }
            const std::size_t d = space.total_dim();
            const auto n = flat_index(parse_label(cols[3], where), space);
            const auto m = flat_index(parse_label(cols[4], where), space);
            const auto j = flat_index(parse_label(cols[5], where), space);
            const auto k = flat_index(parse_label(cols[6], where), space);
            it->second.m(n * d + j, m * d + k) = Complex(std::stod(cols[7]), std::stod(cols[8]));
        } catch (const FormatError &) {
            throw;
        } catch (const std::exception &e) {
            throw FormatError(where, e.what());
        }
    }
    TensorContainer c;
    for (const auto &name : order) {
        auto &p = parts.at(name);
        c.tensors.push_back({name, ProcessTensor(p.space, std::move(p.m))});
    }
    if (c.tensors.empty()) {
        throw FormatError("csv", "no tensor rows");
    }
    return c;
}

void save_tensors(const std::filesystem::path &path, const TensorContainer &c, TensorFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError(path.string(), "cannot open for writing");
    }
    switch (format) {
        case TensorFormat::kBinary:
            write_tensor_container(out, c);
            break;
        case TensorFormat::kJson:
            out << tensor_container_to_json(c).dump() << '\n';
            break;
        case TensorFormat::kCsv:
            write_tensor_csv(out, c);
            break;
    }
    if (!out) {
        throw FormatError(path.string(), "write failed");
    }
}

TensorContainer load_tensors(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError(path.string(), "cannot open for reading");
    }
    const int first = in.peek();
    if (first == 'Q') {
        return read_tensor_container(in);
    }
    if (first == '{') {
        try {
            return tensor_container_from_json(json::parse(in));
        } catch (const json::parse_error &e) {
            throw FormatError(path.string(), e.what());
        }
    }
    return read_tensor_csv(in);
}

void write_dataset(std::ostream &out, const DatasetFile &f) {
    const QuadratureDataset &d = f.data;
    json h = f.metadata.is_object() ? f.metadata : json::object();
    h["format"] = kDatasetMagic;
    h["modes"] = d.modes();
    json probes = json::array();
    for (const auto &p : d.probes()) {
        probes.push_back(probe_to_json(p));
    }
    h["probes"] = std::move(probes);
    h["binned"] = d.binned();
    h["records"] = d.size();
    h["record_bytes"] = 4 + 8 * (2 * d.modes() + 1);
    std::string buf = std::string(kDatasetMagic) + "\n" + h.dump() + "\n";
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    constexpr std::size_t kBatch = 1 << 14;
    buf.clear();
    for (std::size_t i = 0; i < d.size(); i++) {
        put_u32(buf, d.probe_id(i));
        for (double t : d.thetas(i)) {
            put_f64(buf, t);
        }
        for (double x : d.xs(i)) {
            put_f64(buf, x);
        }
        put_f64(buf, d.weight(i));
        if ((i + 1) % kBatch == 0) {
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

DatasetFile read_dataset(std::istream &in) {
    json h = read_header(in, kDatasetMagic);
    const int modes = field<int>(h, "modes", "header");
    if (modes < 1) {
        throw FormatError("header.modes", "must be >= 1");
    }
    std::vector<CoherentProbe> probes;
    const json plist = h.value("probes", json::array());
    for (std::size_t i = 0; i < plist.size(); i++) {
        probes.push_back(probe_from_json(plist[i], "header.probes[" + std::to_string(i) + "]"));
    }
    DatasetFile f;
    try {
        f.data = QuadratureDataset(modes, std::move(probes));
    } catch (const std::invalid_argument &e) {
        throw FormatError("header.probes", e.what());
    }
    const auto records = field<std::size_t>(h, "records", "header");
    const std::size_t rec_bytes = 4 + 8 * (2 * modes + 1);
    if (field<std::size_t>(h, "record_bytes", "header") != rec_bytes) {
        throw FormatError("header.record_bytes", "inconsistent with the mode count");
    }
    f.data.reserve(records);
    std::vector<char> raw(rec_bytes * std::min<std::size_t>(records, 1 << 14));
    std::vector<double> th(modes), xs(modes);
    std::size_t done = 0;
    while (done < records) {
        const std::size_t batch = std::min<std::size_t>(records - done, 1 << 14);
        read_exact(in, raw.data(), batch * rec_bytes, "records");
        const auto *p = reinterpret_cast<const unsigned char *>(raw.data());
        for (std::size_t i = 0; i < batch; i++) {
            const std::uint32_t id = get_u32(p);
            p += 4;
            for (int m = 0; m < modes; m++, p += 8) {
                th[m] = get_f64(p);
            }
            for (int m = 0; m < modes; m++, p += 8) {
                xs[m] = get_f64(p);
            }
            const double w = get_f64(p);
            p += 8;
            try {
                f.data.add(id, th, xs, w);
            } catch (const std::invalid_argument &e) {
                throw FormatError("record " + std::to_string(done + i), e.what());
            }
        }
        done += batch;
    }
    f.data.set_binned(field_or<bool>(h, "binned", false, "header"));
    f.metadata = strip_reserved(std::move(h), {"format", "modes", "probes", "binned", "records", "record_bytes"});
    return f;
}

void write_dataset_csv(std::ostream &out, const QuadratureDataset &d) {
    out << "probe";
    for (int m = 0; m < d.modes(); m++) {
        out << ",theta" << m + 1;
    }
    for (int m = 0; m < d.modes(); m++) {
        out << ",x" << m + 1;
    }
    out << ",weight\n" << std::setprecision(17);
    for (std::size_t i = 0; i < d.size(); i++) {
        out << d.probe_id(i);
        for (double t : d.thetas(i)) {
            out << ',' << t;
        }
        for (double x : d.xs(i)) {
            out << ',' << x;
        }
        out << ',' << d.weight(i) << '\n';
    }
}

void save_dataset(const std::filesystem::path &path, const DatasetFile &f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError(path.string(), "cannot open for writing");
    }
    write_dataset(out, f);
    if (!out) {
        throw FormatError(path.string(), "write failed");
    }
}

DatasetFile load_dataset(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError(path.string(), "cannot open for reading");
    }
    return read_dataset(in);
}

json density_matrix_to_json(const DensityMatrix &rho) {
    return {{"format", "QPTD1"},
            {"modes", rho.space.modes()},
            {"cutoff", rho.space.cutoff()},
            {"real", matrix_part(rho.matrix, false)},
            {"imag", matrix_part(rho.matrix, true)}};
}

DensityMatrix density_matrix_from_json(const json &j) {
    const FockSpace space(field<int>(j, "modes", "density"), field<int>(j, "cutoff", "density"));
    return {matrix_from_parts(j.value("real", json()), j.value("imag", json()), space.total_dim(), "density"),
            space};
}

json probe_to_json(const CoherentProbe &p) {
    json amps = json::array();
    for (const auto &a : p.amplitudes) {
        amps.push_back(complex_to_json(a));
    }
    return {{"label", p.label}, {"amplitudes", std::move(amps)}};
}

CoherentProbe probe_from_json(const json &j, const std::string &where) {
    CoherentProbe p;
    p.label = field_or<std::string>(j, "label", "", where);
    if (!j.is_object() || !j.contains("amplitudes") || !j["amplitudes"].is_array()) {
        throw FormatError(where + ".amplitudes", "missing amplitude list");
    }
    for (std::size_t i = 0; i < j["amplitudes"].size(); i++) {
        p.amplitudes.push_back(complex_from_json(j["amplitudes"][i], where + ".amplitudes[" + std::to_string(i) + "]"));
    }
    return p;
}

json model_to_json(const BeamSplitterModel &m) {
    json mat = json::array();
    for (int r = 0; r < 2; r++) {
        json row = json::array();
        for (int c = 0; c < 2; c++) {
            row.push_back(complex_to_json(m.mode_matrix(r, c)));
        }
        mat.push_back(std::move(row));
    }
    return {{"kind", "matrix"}, {"matrix", std::move(mat)}, {"transmittance", m.transmittance},
            {"global_phase", m.global_phase}};
}

BeamSplitterModel model_from_json(const json &j, const std::string &where) {
    if (!j.is_object()) {
        throw FormatError(where, "expected an object");
    }
    const std::string kind = field_or<std::string>(j, "kind", "beam_splitter", where);
    const double phase = field_or<double>(j, "global_phase", 0.0, where);
    try {
        if (kind == "beam_splitter") {
            return BeamSplitterModel::with_transmittance(field_or<double>(j, "transmittance", 0.5, where), phase);
        }
        if (kind == "identity") {
            auto m = BeamSplitterModel::identity();
            m.global_phase = phase;
            return m;
        }
        if (kind == "matrix") {
            const json &mat = j.value("matrix", json());
            if (!mat.is_array() || mat.size() != 2 || !mat[0].is_array() || mat[0].size() != 2 ||
                !mat[1].is_array() || mat[1].size() != 2) {
                throw FormatError(where + ".matrix", "expected a 2x2 array of complex entries");
            }
            Eigen::Matrix2cd m;
            for (int r = 0; r < 2; r++) {
                for (int c = 0; c < 2; c++) {
                    m(r, c) = complex_from_json(mat[r][c], where + ".matrix");
                }
            }
            return BeamSplitterModel::from_matrix(m, phase);
        }
    } catch (const std::invalid_argument &e) {
        throw FormatError(where, e.what());
    }
    throw FormatError(where + ".kind", "unknown model kind '" + kind + "'");
}

SimulationRun run_from_json(const json &j) {
    if (!j.is_object()) {
        throw FormatError("config", "expected a JSON object");
    }
    SimulationRun run;
    if (j.contains("model")) {
        run.model = model_from_json(j["model"]);
    }
    run.seed = field_or<std::uint64_t>(j, "seed", 1, "config");
    run.phase_noise_sigma = field_or<double>(j, "phase_noise_sigma", 0.0, "config");
    if (run.phase_noise_sigma < 0) {
        throw FormatError("config.phase_noise_sigma", "must be >= 0");
    }
    const json sched = j.value("schedule", json::object());
    if (!sched.is_object()) {
        throw FormatError("config.schedule", "expected an object");
    }
    const std::string w = "config.schedule";
    const double energy = field_or<double>(sched, "total_energy", 0.9, w);
    const int pairs = field_or<int>(sched, "n_pairs", 16, w);
    auto sets = field_or<std::vector<std::vector<double>>>(sched, "lo_phase_sets", {}, w);
    for (std::size_t i = 0; i < sets.size(); i++) {
        if (sets[i].size() != 2) {
            throw FormatError(w + ".lo_phase_sets[" + std::to_string(i) + "]", "expected 2 phases");
        }
    }
    try {
        run.schedule = default_probe_schedule(energy, pairs, std::move(sets));
    } catch (const std::invalid_argument &e) {
        throw FormatError(w, e.what());
    }
    if (sched.contains("probes")) {
        const json &plist = sched["probes"];
        if (!plist.is_array()) {
            throw FormatError(w + ".probes", "expected an array");
        }
        run.schedule.probes.clear();
        for (std::size_t i = 0; i < plist.size(); i++) {
            const std::string pw = w + ".probes[" + std::to_string(i) + "]";
            auto p = probe_from_json(plist[i], pw);
            if (p.amplitudes.size() != 2) {
                throw FormatError(pw + ".amplitudes", "expected 2 amplitudes");
            }
            if (p.label.empty()) {
                p.label = "p" + std::to_string(i);
            }
            run.schedule.probes.push_back(std::move(p));
        }
    }
    run.schedule.samples_per_setting = field_or<int>(sched, "samples_per_setting", 30000, w);
    if (run.schedule.samples_per_setting < 1) {
        throw FormatError(w + ".samples_per_setting", "must be >= 1");
    }
    return run;
}

json run_to_json(const SimulationRun &run) {
    json probes = json::array();
    for (const auto &p : run.schedule.probes) {
        probes.push_back(probe_to_json(p));
    }
    return {{"model", model_to_json(run.model)},
            {"seed", run.seed},
            {"phase_noise_sigma", run.phase_noise_sigma},
            {"schedule",
             {{"total_energy", run.schedule.total_energy},
              {"lo_phase_sets", run.schedule.lo_phase_sets},
              {"samples_per_setting", run.schedule.samples_per_setting},
              {"probes", std::move(probes)}}}};
}

ReconstructionOptions options_from_json(const json &j, ReconstructionOptions o) {
    if (j.is_null()) {
        return o;
    }
    const std::string w = "reconstruction";
    o.max_iterations = field_or<int>(j, "max_iterations", o.max_iterations, w);
    o.loglik_rel_tol = field_or<double>(j, "loglik_rel_tol", o.loglik_rel_tol, w);
    o.eigenvalue_floor = field_or<double>(j, "eigenvalue_floor", o.eigenvalue_floor, w);
    o.probability_floor = field_or<double>(j, "probability_floor", o.probability_floor, w);
    o.enforce_phase_invariance = field_or<bool>(j, "enforce_phase_invariance", o.enforce_phase_invariance, w);
    o.working_cutoff = field_or<int>(j, "working_cutoff", o.working_cutoff, w);
    o.report_cutoff = field_or<int>(j, "report_cutoff", o.report_cutoff, w);
    o.threads = field_or<int>(j, "threads", o.threads, w);
    try {
        o.validate();
    } catch (const std::invalid_argument &e) {
        throw FormatError(w, e.what());
    }
    return o;
}

json options_to_json(const ReconstructionOptions &o) {
    return {{"max_iterations", o.max_iterations},
            {"loglik_rel_tol", o.loglik_rel_tol},
            {"eigenvalue_floor", o.eigenvalue_floor},
            {"probability_floor", o.probability_floor},
            {"enforce_phase_invariance", o.enforce_phase_invariance},
            {"working_cutoff", o.working_cutoff},
            {"report_cutoff", o.report_cutoff}};
}

json parse_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError(path.string(), "cannot open for reading");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw FormatError(path.string(), e.what());
    }
}

}  // namespace mmqpt
