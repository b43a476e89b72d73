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

#include "cli.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mmqpt/formats.h"
#include "mmqpt/linalg.h"
#include "mmqpt/maxlik.h"
#include "mmqpt/process_tensor.h"
#include "mmqpt/report.h"
#include "mmqpt/simulator.h"

namespace mmqpt::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char *kVersion = "0.1.0";
constexpr double kDefaultBinWidth = 0.1;

class InputError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class PhysicalityFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Manifest {
    json j;

    explicit Manifest(const std::string &command) {
        j = {{"tool", "mmqpt"},
             {"version", kVersion},
             {"command", command},
             {"inputs", json::array()},
             {"outputs", json::array()},
             {"overrides", json::object()},
             {"seed", nullptr}};
    }

    void input(const std::string &path) {
        if (!fs::exists(path)) {
            throw InputError("input file not found: " + path);
        }
        j["inputs"].push_back(path);
    }

    void output(const std::string &path) {
        const fs::path parent = fs::path(path).parent_path();
        if (!parent.empty() && !fs::is_directory(parent)) {
            throw InputError("output directory does not exist: " + parent.string());
        }
        j["outputs"].push_back(path);
    }
};

/// Flags shared by the commands that reconstruct.
struct ReconFlags {
    std::string config;
    int cutoff = 4;
    int report_cutoff = 2;
    int max_iters = 200;
    double tol = 1e-8;
    double bins = kDefaultBinWidth;
    int threads = 0;

    void add(CLI::App *app) {
        app->add_option("--config", config, "JSON file; its \"reconstruction\" object sets defaults")
            ->check(CLI::ExistingFile);
        app->add_option("--cutoff", cutoff, "Working Fock cutoff N per mode")->capture_default_str();
        app->add_option("--report-cutoff", report_cutoff, "Reported Fock cutoff N'")->capture_default_str();
        app->add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
        app->add_option("--tol", tol, "Relative log-likelihood stopping tolerance")->capture_default_str();
        app->add_option("--bins", bins, "Quadrature bin width (0 disables binning)")->capture_default_str();
        app->add_option("--threads", threads, "Worker threads (0: MMQPT_THREADS or hardware)")
            ->capture_default_str();
    }

    ReconstructionOptions resolve(CLI::App *app, Manifest &m, json *config_doc = nullptr) const {
        ReconstructionOptions o;
        json doc;
        if (!config.empty()) {
            m.input(config);
            doc = parse_json_file(config);
            o = options_from_json(doc.is_object() ? doc.value("reconstruction", json()) : json(), o);
        }
        if (config_doc) {
            *config_doc = doc;
        }
        auto over = [&](const char *flag, auto &field, auto value) {
            if (app->count(flag)) {
                field = value;
                m.j["overrides"][flag] = value;
            }
        };
        over("--cutoff", o.working_cutoff, cutoff);
        over("--report-cutoff", o.report_cutoff, report_cutoff);
        over("--max-iters", o.max_iterations, max_iters);
        over("--tol", o.loglik_rel_tol, tol);
        over("--threads", o.threads, threads);
        if (app->count("--bins")) {
            m.j["overrides"]["--bins"] = bins;
        }
        if (bins < 0) {
            throw InputError("--bins must be >= 0");
        }
        try {
            o.validate();
        } catch (const std::invalid_argument &e) {
            throw InputError(e.what());
        }
        return o;
    }
};

double bin_width(const ReconFlags &f, const json &config_doc, const CLI::App *app) {
    if (!app->count("--bins") && config_doc.is_object() && config_doc.contains("bins")) {
        const auto &b = config_doc["bins"];
        if (!b.is_number() || b.get<double>() < 0) {
            throw FormatError("config.bins", "expected a non-negative number");
        }
        return b.get<double>();
    }
    return f.bins;
}

TensorContainer single(const std::string &name, ProcessTensor t, const Manifest &m) {
    TensorContainer c;
    c.tensors.push_back({name, std::move(t)});
    c.metadata["manifest"] = m.j;
    return c;
}

void write_json(const std::string &path, const json &j) {
    std::ofstream out(path);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
}

json stats_json(const FidelityStats &s) {
    return {{"values", s.values}, {"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
}

json diagnostics_json(const IterationDiagnostics &d) {
    return {{"iteration", d.iteration},
            {"log_likelihood", d.log_likelihood},
            {"tp_defect", d.tp_defect},
            {"hermiticity_defect", d.hermiticity_defect},
            {"rehermitization_drift", d.rehermitization_drift},
            {"min_eigenvalue", d.min_eigenvalue},
            {"max_eigenvalue", d.max_eigenvalue},
            {"clamped_probabilities", d.clamped_probabilities},
            {"wall_seconds", d.wall_seconds}};
}

Complex parse_complex(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    if (s.empty()) {
        throw InputError("empty amplitude");
    }
    std::size_t pos = 0;
    double first = 0;
    auto fail = [&] { return InputError("cannot parse complex amplitude '" + s + "'"); };
    if (s == "i" || s == "+i") {
        return {0, 1};
    }
    if (s == "-i") {
        return {0, -1};
    }
    try {
        first = std::stod(s, &pos);
    } catch (const std::exception &) {
        throw fail();
    }
    if (pos == s.size()) {
        return {first, 0};
    }
    if (s[pos] == 'i' && pos + 1 == s.size()) {
        return {0, first};
    }
    const std::string rest = s.substr(pos);
    if (rest == "+i") {
        return {first, 1};
    }
    if (rest == "-i") {
        return {first, -1};
    }
    std::size_t pos2 = 0;
    double second = 0;
    try {
        second = std::stod(rest, &pos2);
    } catch (const std::exception &) {
        throw fail();
    }
    if (pos2 + 1 != rest.size() || rest[pos2] != 'i' || (rest[0] != '+' && rest[0] != '-')) {
        throw fail();
    }
    return {first, second};
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------

struct SimulateCmd {
    std::string config;
    std::string out;
    std::string csv;
    std::uint64_t seed = 1;

    void add(CLI::App *app) {
        app->add_option("--config", config, "Run configuration JSON (model, seed, schedule)")
            ->check(CLI::ExistingFile);
        app->add_option("-o,--out", out, "Dataset file to write")->required();
        app->add_option("--csv", csv, "Also export the records as CSV");
        app->add_option("--seed", seed, "Master seed (overrides the config)")->capture_default_str();
    }

    int run(CLI::App *app, std::ostream &os) {
        Manifest m("simulate");
        SimulationRun r;
        r.schedule = default_probe_schedule();
        if (!config.empty()) {
            m.input(config);
            r = run_from_json(parse_json_file(config));
        }
        if (app->count("--seed")) {
            r.seed = seed;
            m.j["overrides"]["--seed"] = seed;
        }
        m.j["seed"] = r.seed;
        m.output(out);
        if (!csv.empty()) {
            m.output(csv);
        }
        DatasetFile f{generate_dataset(r), json::object()};
        f.metadata["seed"] = r.seed;
        f.metadata["phase_sets"] = r.schedule.lo_phase_sets;
        f.metadata["samples_per_setting"] = r.schedule.samples_per_setting;
        f.metadata["model"] = model_to_json(r.model);
        f.metadata["manifest"] = m.j;
        save_dataset(out, f);
        if (!csv.empty()) {
            std::ofstream c(csv);
            write_dataset_csv(c, f.data);
        }

        os << "records: " << f.data.size() << "\n";
        os << std::left << std::setw(10) << "probe" << std::setw(12) << "E_in" << std::setw(12) << "E_out"
           << "records\n";
        std::vector<std::size_t> per(r.schedule.probes.size(), 0);
        for (std::size_t i = 0; i < f.data.size(); i++) {
            per[f.data.probe_id(i)]++;
        }
        os << std::fixed << std::setprecision(4);
        for (std::size_t p = 0; p < r.schedule.probes.size(); p++) {
            const auto &a = r.schedule.probes[p].amplitudes;
            const auto b = bs_transform({a[0], a[1]}, r.model);
            os << std::setw(10) << r.schedule.probes[p].label << std::setw(12) << std::norm(a[0]) + std::norm(a[1])
               << std::setw(12) << std::norm(b[0]) + std::norm(b[1]) << per[p] << "\n";
        }
        return kOk;
    }
};

struct ReconstructCmd {
    std::string data;
    std::string out;
    std::string diagnostics;
    std::string format = "bin";
    ReconFlags flags;

    void add(CLI::App *app) {
        app->add_option("data", data, "Dataset file")->required()->check(CLI::ExistingFile);
        app->add_option("-o,--out", out, "Tensor container to write (report and working tensors)")->required();
        app->add_option("--diagnostics", diagnostics, "Diagnostics JSON (default: <out>.diagnostics.json)");
        app->add_option("--format", format, "Tensor format")
            ->check(CLI::IsMember({"bin", "json", "csv"}))
            ->capture_default_str();
        flags.add(app);
    }

    int run(CLI::App *app, std::ostream &os) {
        Manifest m("reconstruct");
        m.input(data);
        json doc;
        ReconstructionOptions opts = flags.resolve(app, m, &doc);
        const double bins = bin_width(flags, doc, app);
        if (diagnostics.empty()) {
            diagnostics = out + ".diagnostics.json";
        }
        m.output(out);
        m.output(diagnostics);
        const TensorFormat fmt = parse_tensor_format(format);

        DatasetFile f = load_dataset(data);
        if (f.metadata.contains("seed")) {
            m.j["seed"] = f.metadata["seed"];
        }
        if (f.data.modes() != 2) {
            throw DataModelMismatch("dataset has " + std::to_string(f.data.modes()) +
                                    " modes; the two-mode Fock model needs 2");
        }
        QuadratureDataset work = bins > 0 && !f.data.binned() ? bin_dataset(f.data, bins, 0.0) : f.data;

        bool physical = true;
        int first_bad = -1;
        auto observer = [&](const IterationDiagnostics &d, const ProcessTensor &) {
            if (!is_physical(d) && physical) {
                physical = false;
                first_bad = d.iteration;
            }
        };
        const ReconstructionResult res = [&] {
            try {
                return reconstruct(work, opts, observer);
            } catch (const ConfigMismatch &e) {
                throw DataModelMismatch(e.what());
            }
        }();

        TensorContainer c;
        c.tensors.push_back({"report", res.tensor});
        c.tensors.push_back({"working", res.working_tensor});
        c.metadata["manifest"] = m.j;
        c.metadata["options"] = options_to_json(opts);
        c.metadata["iterations_run"] = res.iterations_run;
        c.metadata["converged"] = res.converged;
        save_tensors(out, c, fmt);

        json diag = {{"manifest", m.j},
                     {"options", options_to_json(opts)},
                     {"bin_width", bins},
                     {"records", f.data.size()},
                     {"records_after_binning", work.size()},
                     {"threads", resolve_thread_count(opts.threads)},
                     {"iterations_run", res.iterations_run},
                     {"converged", res.converged},
                     {"log_likelihood_kind", "data term sum_i w_i ln p_i"},
                     {"loglik_trace", res.loglik_trace},
                     {"final_tp_defect", res.final_tp_defect},
                     {"physical", physical},
                     {"working", tensor_summary(res.working_tensor)},
                     {"report", tensor_summary(res.tensor)}};
        json iters = json::array();
        for (const auto &d : res.iterations) {
            iters.push_back(diagnostics_json(d));
        }
        diag["iterations"] = std::move(iters);
        write_json(diagnostics, diag);

        os << "iterations: " << res.iterations_run << (res.converged ? " (converged)" : " (iteration cap)") << "\n";
        os << "log-likelihood: " << std::setprecision(10) << res.loglik_trace.back() << "\n";
        os << "trace-preservation defect: " << std::setprecision(3) << res.final_tp_defect << "\n";
        if (res.tensor.space().cutoff() >= 1) {
            os << "HOM element: " << std::setprecision(4) << hom_element(res.tensor) << "\n";
        }
        if (!physical) {
            throw PhysicalityFailure("physicality check failed at iteration " + std::to_string(first_bad));
        }
        return kOk;
    }
};

struct ApplyCmd {
    std::string tensor;
    std::string state;
    std::string out;
    std::string name;

    void add(CLI::App *app) {
        app->add_option("tensor", tensor, "Tensor file")->required()->check(CLI::ExistingFile);
        app->add_option("--state", state, "Input state: \"1,1\" or \"coherent:0.6,0.3-0.2i\"")->required();
        app->add_option("-o,--out", out, "Output density-matrix JSON");
        app->add_option("--name", name, "Tensor name inside the container (default: report)");
    }

    int run(CLI::App *, std::ostream &os) {
        Manifest m("apply");
        m.input(tensor);
        if (!out.empty()) {
            m.output(out);
        }
        m.j["state"] = state;
        const InputState in = parse_state_spec(state);
        const TensorContainer c = load_tensors(tensor);
        const ProcessTensor &e = c.get(name);
        const FockSpace &s = e.space();

        DensityMatrix rho_in{CMatrix(), s};
        if (in.fock) {
            if (static_cast<int>(in.photons.size()) != s.modes()) {
                throw ConfigMismatch("state has " + std::to_string(in.photons.size()) + " modes, tensor has " +
                                     std::to_string(s.modes()));
            }
            for (int n : in.photons) {
                if (n > s.cutoff()) {
                    throw ConfigMismatch("occupation " + std::to_string(n) + " exceeds the tensor cutoff " +
                                         std::to_string(s.cutoff()));
                }
            }
            rho_in = fock_density(in.photons, s);
        } else {
            if (static_cast<int>(in.amplitudes.size()) != s.modes()) {
                throw ConfigMismatch("state has " + std::to_string(in.amplitudes.size()) +
                                     " modes, tensor has " + std::to_string(s.modes()));
            }
            rho_in = coherent_density({in.amplitudes, "input"}, s);
        }
        const DensityMatrix rho = apply_process(e, rho_in);

        json j = density_matrix_to_json(rho);
        j["manifest"] = m.j;
        j["input_state"] = state;
        j["trace"] = rho.matrix.trace().real();
        json pops = json::array();
        os << std::setprecision(6);
        for (int i = 0; i < s.total_dim(); i++) {
            const double p = rho.matrix(i, i).real();
            pops.push_back({{"state", fock_label(i, s)}, {"population", p}});
        }
        j["populations"] = pops;
        if (in.fock) {
            const std::size_t i = flat_index(in.photons, s);
            const double same = rho.matrix(i, i).real();
            j["input_population"] = same;
            os << "<" << state << "|rho_out|" << state << "> = " << same << "\n";
        }
        os << "trace: " << j["trace"].get<double>() << "\n";
        for (int i = 0; i < s.total_dim(); i++) {
            const double p = rho.matrix(i, i).real();
            if (std::abs(p) > 1e-6) {
                os << "  |" << fock_label(i, s) << ">  " << p << "\n";
            }
        }
        if (!out.empty()) {
            write_json(out, j);
        }
        return kOk;
    }
};

struct FidelityCmd {
    std::string a;
    std::string b;
    std::string name_a;
    std::string name_b;
    std::string json_out;
    bool squared = false;
    int cutoff = -1;

    void add(CLI::App *app) {
        app->add_option("a", a, "First tensor file")->required()->check(CLI::ExistingFile);
        app->add_option("b", b, "Second tensor file")->required()->check(CLI::ExistingFile);
        app->add_option("--name-a", name_a, "Tensor name in the first container");
        app->add_option("--name-b", name_b, "Tensor name in the second container");
        app->add_option("--cutoff", cutoff, "Truncate both tensors to this cutoff first");
        app->add_flag("--squared", squared, "Report the squared convention (Tr sqrt(...))^2");
        app->add_option("--json", json_out, "Also write the result as JSON");
    }

    int run(CLI::App *app, std::ostream &os) {
        Manifest m("fidelity");
        m.input(a);
        m.input(b);
        if (!json_out.empty()) {
            m.output(json_out);
        }
        ProcessTensor ea = load_tensors(a).get(name_a);
        ProcessTensor eb = load_tensors(b).get(name_b);
        if (app->count("--cutoff")) {
            m.j["overrides"]["--cutoff"] = cutoff;
            if (cutoff > ea.space().cutoff() || cutoff > eb.space().cutoff() || cutoff < 0) {
                throw ConfigMismatch("--cutoff " + std::to_string(cutoff) + " exceeds a tensor cutoff");
            }
            ea = truncate_tensor(ea, cutoff);
            eb = truncate_tensor(eb, cutoff);
        }
        const auto conv = squared ? FidelityConvention::kSquared : FidelityConvention::kUnsquared;
        const double f = process_fidelity(ea, eb, conv);
        os << "F = " << std::setprecision(6) << std::fixed << f << " (" << to_string(conv) << ")\n";
        if (!json_out.empty()) {
            write_json(json_out, {{"fidelity", f},
                                  {"convention", to_string(conv)},
                                  {"modes", ea.space().modes()},
                                  {"cutoff", ea.space().cutoff()},
                                  {"manifest", m.j}});
        }
        return kOk;
    }
};

struct BootstrapCmd {
    std::string config;
    std::string out;
    int replicas = 5;
    std::uint64_t seed = 1;
    bool squared = false;
    ReconFlags flags;

    void add(CLI::App *app) {
        app->add_option("-n,--replicas", replicas, "Number of replicas (>= 2)")->capture_default_str();
        app->add_option("-o,--out", out, "Statistics JSON to write")->required();
        app->add_option("--seed", seed, "Master seed; replica seeds derive from it")->capture_default_str();
        app->add_flag("--squared", squared, "Use the squared fidelity convention");
        flags.add(app);
        app->get_option("--config")->description("Run configuration JSON (model, schedule, reconstruction)");
    }

    int run(CLI::App *app, std::ostream &os) {
        Manifest m("bootstrap");
        json doc;
        ReconstructionOptions opts = flags.resolve(app, m, &doc);
        SimulationRun r;
        r.schedule = default_probe_schedule();
        if (doc.is_object()) {
            r = run_from_json(doc);
        }
        if (replicas < 2) {
            throw InputError("bootstrap needs at least 2 replicas");
        }
        BootstrapOptions boot;
        boot.replicas = replicas;
        boot.seed = app->count("--seed") || !doc.is_object() || !doc.contains("seed") ? seed : r.seed;
        boot.x_bin_width = bin_width(flags, doc, app);
        boot.phase_noise_sigma = r.phase_noise_sigma;
        if (doc.is_object() && doc.contains("replica_seeds")) {
            boot.replica_seeds = doc["replica_seeds"].get<std::vector<std::uint64_t>>();
        }
        m.j["seed"] = boot.seed;
        m.j["overrides"]["--replicas"] = replicas;
        m.output(out);
        const auto conv = squared ? FidelityConvention::kSquared : FidelityConvention::kUnsquared;
        const BootstrapResult res = bootstrap(r.model, r.schedule, opts, boot, conv);
        json j = {{"format", "mmqpt-bootstrap-1"},
                  {"convention", to_string(conv)},
                  {"replicas", replicas},
                  {"report_cutoff", opts.report_cutoff},
                  {"working_cutoff", opts.working_cutoff},
                  {"bin_width", boot.x_bin_width},
                  {"seeds", res.seeds},
                  {"iterations", res.iterations},
                  {"to_truth", stats_json(res.to_truth)},
                  {"pairwise", stats_json(res.pairwise)},
                  {"mean_tensor", {{"fidelity", res.mean_tensor_fidelity}}},
                  {"manifest", m.j}};
        write_json(out, j);
        os << std::setprecision(4) << std::fixed;
        os << "F(E, E_i):      mean " << res.to_truth.mean << "  stddev " << res.to_truth.stddev << "  range ["
           << res.to_truth.min << ", " << res.to_truth.max << "]\n";
        os << "F(E_i, E_j):    mean " << res.pairwise.mean << "  stddev " << res.pairwise.stddev << "\n";
        os << "F(E, mean E_i): " << res.mean_tensor_fidelity << "\n";
        return kOk;
    }
};

struct ReportCmd {
    std::string tensor;
    std::string dir;
    std::string name;

    void add(CLI::App *app) {
        app->add_option("tensor", tensor, "Tensor file")->required()->check(CLI::ExistingFile);
        app->add_option("out_dir", dir, "Directory for CSV, SVG and summary files")->required();
        app->add_option("--name", name, "Tensor name inside the container (default: report)");
    }

    int run(CLI::App *, std::ostream &os) {
        Manifest m("report");
        m.input(tensor);
        m.j["outputs"].push_back(dir);
        const ProcessTensor e = load_tensors(tensor).get(name);
        for (const auto &p : write_report(e, dir, m.j)) {
            os << p.string() << "\n";
        }
        return kOk;
    }
};

struct IdealCmd {
    std::string config;
    std::string out;
    std::string format = "bin";
    double transmittance = 0.5;
    double phase = 0.0;
    bool identity = false;
    int cutoff = 2;

    void add(CLI::App *app) {
        app->add_option("--config", config, "JSON file whose \"model\" object selects the process")
            ->check(CLI::ExistingFile);
        app->add_option("-o,--out", out, "Tensor file to write")->required();
        app->add_option("--transmittance", transmittance, "Beam-splitter transmittance t")->capture_default_str();
        app->add_option("--phase", phase, "Global phase of the mode transformation")->capture_default_str();
        app->add_flag("--identity", identity, "Identity process instead of a beam splitter");
        app->add_option("--cutoff", cutoff, "Fock cutoff per mode")->capture_default_str();
        app->add_option("--format", format, "Tensor format")
            ->check(CLI::IsMember({"bin", "json", "csv"}))
            ->capture_default_str();
    }

    int run(CLI::App *app, std::ostream &os) {
        Manifest m("ideal");
        m.output(out);
        BeamSplitterModel model = BeamSplitterModel::with_transmittance(transmittance, phase);
        if (!config.empty()) {
            m.input(config);
            const json doc = parse_json_file(config);
            if (doc.is_object() && doc.contains("model")) {
                model = model_from_json(doc["model"]);
            }
        }
        if (app->count("--transmittance") || app->count("--phase")) {
            model = BeamSplitterModel::with_transmittance(transmittance, phase);
        }
        if (identity) {
            model = BeamSplitterModel::identity();
        }
        m.j["model"] = model_to_json(model);
        if (cutoff < 0) {
            throw InputError("--cutoff must be >= 0");
        }
        const FockSpace space(2, cutoff);
        save_tensors(out, single("ideal", build_bs_tensor(model, space), m), parse_tensor_format(format));
        os << "wrote ideal tensor (cutoff " << cutoff << ") to " << out << "\n";
        return kOk;
    }
};

}  // namespace

InputState parse_state_spec(const std::string &spec) {
    InputState st;
    const std::string coherent = "coherent:";
    if (spec.rfind(coherent, 0) == 0) {
        st.fock = false;
        for (const auto &tok : split(spec.substr(coherent.size()), ',')) {
            st.amplitudes.push_back(parse_complex(tok));
        }
        if (st.amplitudes.empty()) {
            throw InputError("coherent state needs at least one amplitude");
        }
        return st;
    }
    for (const auto &tok : split(spec, ',')) {
        std::size_t pos = 0;
        int n = -1;
        try {
            n = std::stoi(tok, &pos);
        } catch (const std::exception &) {
            throw InputError("cannot parse occupation '" + tok + "' in state spec '" + spec + "'");
        }
        if (pos != tok.size() || n < 0) {
            throw InputError("cannot parse occupation '" + tok + "' in state spec '" + spec + "'");
        }
        st.photons.push_back(n);
    }
    if (st.photons.empty()) {
        throw InputError("empty state spec");
    }
    return st;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Fock-basis process tomography of two-mode optical processes from homodyne data", "mmqpt"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.footer(
        "Environment: MMQPT_THREADS sets the default worker-thread count.\n"
        "Exit codes: 0 ok, 2 input error, 3 data/model mismatch, 4 incompatible artifacts,\n"
        "            5 physicality failure.");

    SimulateCmd simulate;
    ReconstructCmd reconstruct_cmd;
    ApplyCmd apply;
    FidelityCmd fidelity;
    BootstrapCmd boot;
    ReportCmd report;
    IdealCmd ideal;
    CLI::App *s_sim = app.add_subcommand("simulate", "Simulate coherent-probe homodyne data");
    CLI::App *s_rec = app.add_subcommand("reconstruct", "Maximum-likelihood process reconstruction");
    CLI::App *s_app = app.add_subcommand("apply", "Apply a tensor to an input state");
    CLI::App *s_fid = app.add_subcommand("fidelity", "Process fidelity between two tensors");
    CLI::App *s_boot = app.add_subcommand("bootstrap", "Repeated simulate-and-reconstruct statistics");
    CLI::App *s_rep = app.add_subcommand("report", "CSV/SVG plot data and a summary for a tensor");
    CLI::App *s_ideal = app.add_subcommand("ideal", "Write the ideal tensor of a beam splitter");
    simulate.add(s_sim);
    reconstruct_cmd.add(s_rec);
    apply.add(s_app);
    fidelity.add(s_fid);
    boot.add(s_boot);
    report.add(s_rep);
    ideal.add(s_ideal);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (s_sim->parsed()) {
            return simulate.run(s_sim, out);
        }
        if (s_rec->parsed()) {
            return reconstruct_cmd.run(s_rec, out);
        }
        if (s_app->parsed()) {
            return apply.run(s_app, out);
        }
        if (s_fid->parsed()) {
            return fidelity.run(s_fid, out);
        }
        if (s_boot->parsed()) {
            return boot.run(s_boot, out);
        }
        if (s_rep->parsed()) {
            return report.run(s_rep, out);
        }
        if (s_ideal->parsed()) {
            return ideal.run(s_ideal, out);
        }
    } catch (const PhysicalityFailure &e) {
        err << "error: " << e.what() << "\n";
        return kPhysicalityFailure;
    } catch (const DataModelMismatch &e) {
        err << "error: data/model mismatch: " << e.what() << "\n";
        return kDataModelMismatch;
    } catch (const ConfigMismatch &e) {
        err << "error: incompatible artifacts: " << e.what() << "\n";
        return kIncompatibleArtifacts;
    } catch (const FormatError &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

}  // namespace mmqpt::cli
