// Copyright 2026 The bosonkit authors
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

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bosonkit/bosonkit.hpp"

namespace {

using namespace bosonkit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitAccuracy = 3;

int size_cap_from_env() {
    const char *raw = std::getenv("BOSONKIT_SIZE_CAP");
    if (raw == nullptr || *raw == '\0') return kDefaultSizeCap;
    try {
        const int cap = std::stoi(raw);
        if (cap < 0) throw parameter_error("");
        return cap;
    } catch (const std::exception &) {
        throw parameter_error("BOSONKIT_SIZE_CAP must be a nonnegative integer");
    }
}

void write_text(const std::string &out_path, const std::string &content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream stream(out_path);
    if (!stream) throw parameter_error("cannot open for writing: " + out_path);
    stream << content;
}

/// "dft:N" | "haar:N,SEED" | "bs:T[,PHI]" | path to a matrix file
UnitaryMatrix parse_unitary_spec(const std::string &spec) {
    auto tail_numbers = [&](const std::string &tail) {
        std::vector<double> values;
        size_t pos = 0;
        while (pos <= tail.size()) {
            const size_t comma = tail.find(',', pos);
            const std::string field =
                tail.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            values.push_back(std::stod(field));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return values;
    };
    try {
        if (spec.rfind("dft:", 0) == 0) return dft_unitary(std::stoi(spec.substr(4)));
        if (spec.rfind("haar:", 0) == 0) {
            const auto values = tail_numbers(spec.substr(5));
            if (values.size() != 2) throw parameter_error("haar spec needs haar:N,SEED");
            return haar_random_unitary(static_cast<int>(values[0]),
                                       static_cast<uint64_t>(values[1]));
        }
        if (spec.rfind("bs:", 0) == 0) {
            const auto values = tail_numbers(spec.substr(3));
            if (values.empty() || values.size() > 2)
                throw parameter_error("beam splitter spec needs bs:T[,PHI]");
            return beam_splitter(values[0], values.size() == 2 ? values[1] : 0.0);
        }
    } catch (const parameter_error &) {
        throw;
    } catch (const std::exception &) {
        throw parameter_error("malformed unitary spec: " + spec);
    }
    return load_unitary(spec);
}

/// Shared experiment options (mirrors the JSON config keys).
struct ExperimentOptions {
    std::string unitary_spec;
    std::string input_text;
    std::string detector = "ideal";
    double eta = 1.0;
    int num_detectors = 1;
    double ratio = 0.0;
    double gamma = 1.0;
    long long trials = 100000;
    uint64_t seed = 0;
    bool postselect = false;
    std::string format = "json";
    std::string out_path;
    double quad_tol = 1e-6;
    int quad_nodes = 0;
    std::string config_path;
};

void add_detector_options(CLI::App *cmd, ExperimentOptions &opt) {
    cmd->add_option("--detector", opt.detector, "ideal|lossy|array|deadtime-mono|deadtime-exp")
        ->check(CLI::IsMember({"ideal", "lossy", "array", "deadtime-mono", "deadtime-exp"}));
    cmd->add_option("--eta", opt.eta, "detection efficiency in [0,1]");
    cmd->add_option("--K", opt.num_detectors, "number of on/off detectors in the array");
    cmd->add_option("--ratio", opt.ratio, "dead time over measurement window, tau_d/tau_m");
    cmd->add_option("--gamma", opt.gamma, "decay rate of the exponential mode");
    cmd->add_option("--quad-tol", opt.quad_tol, "absolute tolerance of the dead-time quadrature");
    cmd->add_option("--quad-nodes", opt.quad_nodes,
                    "Gauss-Legendre nodes per dimension (0 = automatic)");
}

/// Values from --config fill in every option the command line left untouched.
void merge_config(const CLI::App *cmd, ExperimentOptions &opt) {
    if (opt.config_path.empty()) return;
    std::ifstream stream(opt.config_path);
    if (!stream) throw parameter_error("cannot open config file: " + opt.config_path);
    json cfg;
    try {
        stream >> cfg;
    } catch (const json::exception &e) {
        throw parameter_error("invalid JSON config: " + std::string(e.what()));
    }
    auto untouched = [&](const std::string &flag) {
        const CLI::Option *o = cmd->get_option_no_throw(flag);
        return o != nullptr && o->count() == 0;
    };
    if (cfg.contains("unitary") && untouched("--unitary"))
        opt.unitary_spec = cfg["unitary"].get<std::string>();
    if (cfg.contains("input") && untouched("--input"))
        opt.input_text = cfg["input"].get<std::string>();
    if (cfg.contains("detector") && untouched("--detector"))
        opt.detector = cfg["detector"].get<std::string>();
    if (cfg.contains("eta") && untouched("--eta")) opt.eta = cfg["eta"].get<double>();
    if (cfg.contains("K") && untouched("--K")) opt.num_detectors = cfg["K"].get<int>();
    if (cfg.contains("ratio") && untouched("--ratio")) opt.ratio = cfg["ratio"].get<double>();
    if (cfg.contains("gamma") && untouched("--gamma")) opt.gamma = cfg["gamma"].get<double>();
    if (cfg.contains("trials") && untouched("--trials"))
        opt.trials = cfg["trials"].get<long long>();
    if (cfg.contains("seed") && untouched("--seed")) opt.seed = cfg["seed"].get<uint64_t>();
    if (cfg.contains("postselect") && untouched("--postselect"))
        opt.postselect = cfg["postselect"].get<bool>();
    if (cfg.contains("format") && untouched("--format"))
        opt.format = cfg["format"].get<std::string>();
    if (cfg.contains("out") && untouched("--out")) opt.out_path = cfg["out"].get<std::string>();
}

DetectorModel make_model(const ExperimentOptions &opt) {
    DetectorModel model;
    if (opt.detector == "ideal") {
        model = IdealPNR{};
    } else if (opt.detector == "lossy") {
        model = LossyPNR{opt.eta};
    } else if (opt.detector == "array") {
        model = OnOffArray{opt.num_detectors, opt.eta};
    } else if (opt.detector == "deadtime-mono") {
        model = DeadTimeMono{opt.ratio, opt.eta};
    } else if (opt.detector == "deadtime-exp") {
        model = DeadTimeExp{opt.ratio, opt.gamma, opt.eta};
    } else {
        throw parameter_error("unknown detector: " + opt.detector);
    }
    validate_model(model);
    return model;
}

OutcomeDistribution compute_distribution(const ExperimentOptions &opt, int size_cap) {
    const UnitaryMatrix u = parse_unitary_spec(opt.unitary_spec);
    const Pattern input = Pattern::parse(opt.input_text);
    if (opt.detector == "ideal") return ideal_distribution(u, input, size_cap);
    QuadratureSpec quad{opt.quad_tol, opt.quad_nodes};
    return realistic_distribution(u, input, make_model(opt), quad, size_cap);
}

// --- unitary ---------------------------------------------------------------

struct UnitaryOptions {
    int dft = 0;
    int haar = 0;
    double bs_t = -1.0;
    double bs_phase = 0.0;
    uint64_t seed = 0;
    std::string validate_path;
    std::string out_path;
    double tol = kDefaultUnitarityTol;
};

int run_unitary(const UnitaryOptions &opt) {
    if (!opt.validate_path.empty()) {
        const ComplexMatrix m = load_complex_matrix(opt.validate_path);
        if (!m.is_square()) throw shape_error("matrix file is not square");
        const double residual = unitarity_residual(m);
        std::cout << "unitarity residual: " << format_double(residual) << '\n';
        if (!(residual <= opt.tol)) {
            std::cout << "REJECTED (tolerance " << format_double(opt.tol) << ")\n";
            return kExitValidation;
        }
        std::cout << "OK\n";
        return kExitOk;
    }
    std::optional<UnitaryMatrix> u;
    if (opt.dft > 0) u = dft_unitary(opt.dft);
    if (opt.haar > 0) u = haar_random_unitary(opt.haar, opt.seed);
    if (opt.bs_t >= 0.0) u = beam_splitter(opt.bs_t, opt.bs_phase);
    if (!u) throw parameter_error("choose one of --dft, --haar, --bs or --validate");
    write_text(opt.out_path, unitary_to_json(*u).dump(2) + "\n");
    return kExitOk;
}

// --- dist ------------------------------------------------------------------

int run_dist(const CLI::App *cmd, ExperimentOptions &opt) {
    merge_config(cmd, opt);
    const int size_cap = size_cap_from_env();
    const OutcomeDistribution dist = compute_distribution(opt, size_cap);
    std::cerr << "normalization residual: " << format_double(dist.total_probability() - 1.0)
              << '\n';
    if (opt.format == "csv") {
        write_text(opt.out_path, distribution_to_csv(dist));
    } else {
        write_text(opt.out_path, distribution_to_json(dist).dump(2) + "\n");
    }
    return kExitOk;
}

// --- correction ------------------------------------------------------------

struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
    int points = 101;
    bool points_given = false;
};

SweepRange parse_sweep(const std::string &text) {
    SweepRange range;
    const size_t first = text.find(':');
    if (first == std::string::npos) throw parameter_error("sweep needs LO:HI[:POINTS]");
    const size_t second = text.find(':', first + 1);
    try {
        range.lo = std::stod(text.substr(0, first));
        range.hi = std::stod(text.substr(first + 1, second == std::string::npos
                                                        ? std::string::npos
                                                        : second - first - 1));
        if (second != std::string::npos) {
            range.points = std::stoi(text.substr(second + 1));
            range.points_given = true;
        }
    } catch (const std::exception &) {
        throw parameter_error("malformed sweep: " + text);
    }
    if (range.hi < range.lo) throw parameter_error("sweep upper bound below lower bound");
    if (range.points < 1) throw parameter_error("sweep needs at least one point");
    return range;
}

struct CorrectionOptions {
    std::string detector;
    int n = 6;
    double eta = 1.0;
    double gamma = 1.0;
    std::string sweep = "";
    std::string out_path;
};

int run_correction(const CorrectionOptions &opt) {
    const SweepRange range = parse_sweep(opt.sweep);
    std::string out = "identifier,K_or_r,coefficient\n";

    auto emit = [&](const CorrectionTable &table, const std::string &x, int feasible_above) {
        for (const auto &[id, coefficient] : table.entries) {
            if (!id.parts.empty() && id.parts.front() > feasible_above) continue;
            out += '"' + id.to_string() + "\"," + x + ',' + format_double(coefficient) + '\n';
        }
    };

    if (opt.detector == "array") {
        const int lo = static_cast<int>(range.lo);
        const int hi = static_cast<int>(range.hi);
        if (lo < 1) throw parameter_error("array sweep needs K >= 1");
        for (int K = lo; K <= hi; ++K)
            emit(correction_table(OnOffArray{K, opt.eta}, opt.n), std::to_string(K), K);
    } else if (opt.detector == "deadtime-mono" || opt.detector == "deadtime-exp") {
        const int points = range.points;
        for (int i = 0; i < points; ++i) {
            const double r =
                points == 1 ? range.lo : range.lo + (range.hi - range.lo) * i / (points - 1);
            DetectorModel model;
            if (opt.detector == "deadtime-mono") {
                model = DeadTimeMono{r, opt.eta};
            } else {
                model = DeadTimeExp{r, opt.gamma, opt.eta};
            }
            emit(correction_table(model, opt.n), format_double(r), opt.n);
        }
    } else {
        throw parameter_error("correction sweeps support array, deadtime-mono, deadtime-exp");
    }
    write_text(opt.out_path, out);
    return kExitOk;
}

// --- sample ------------------------------------------------------------------

int run_sample(const CLI::App *cmd, ExperimentOptions &opt) {
    merge_config(cmd, opt);
    const int size_cap = size_cap_from_env();
    const OutcomeDistribution dist = compute_distribution(opt, size_cap);
    SampleReport report = sample(dist, opt.trials, opt.seed);
    if (opt.postselect) report = postselect(report, dist.n);
    if (opt.format == "csv") {
        write_text(opt.out_path, sample_report_to_csv(report));
    } else {
        write_text(opt.out_path, sample_report_to_json(report).dump(2) + "\n");
    }
    return kExitOk;
}

// --- pkm ---------------------------------------------------------------------

int run_pkm(const CLI::App *cmd, ExperimentOptions &opt, int max_m) {
    merge_config(cmd, opt);
    if (max_m < 0) throw parameter_error("--max-m must be nonnegative");
    QuadratureSpec quad{opt.quad_tol, opt.quad_nodes};
    const CondProbTable table = make_cond_prob_table(make_model(opt), max_m, quad);
    if (opt.format == "csv") {
        write_text(opt.out_path, cond_prob_table_to_csv(table));
    } else {
        write_text(opt.out_path, cond_prob_table_to_json(table).dump(2) + "\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"bosonkit: exact photocounting statistics for multimode interferometry"};
    app.require_subcommand(1);

    UnitaryOptions unitary_opt;
    CLI::App *unitary_cmd = app.add_subcommand("unitary", "generate or validate a unitary file");
    unitary_cmd->add_option("--dft", unitary_opt.dft, "discrete Fourier network of N modes");
    unitary_cmd->add_option("--haar", unitary_opt.haar, "Haar-random unitary of N modes");
    unitary_cmd->add_option("--seed", unitary_opt.seed, "seed for --haar");
    unitary_cmd->add_option("--bs", unitary_opt.bs_t,
                            "beam splitter transmittance amplitude in [0,1]");
    unitary_cmd->add_option("--phase", unitary_opt.bs_phase, "beam splitter phase (radians)");
    unitary_cmd->add_option("--validate", unitary_opt.validate_path, "matrix file to check");
    unitary_cmd->add_option("--tol", unitary_opt.tol, "unitarity tolerance");
    unitary_cmd->add_option("--out", unitary_opt.out_path, "output path (default stdout)");

    ExperimentOptions dist_opt;
    CLI::App *dist_cmd = app.add_subcommand("dist", "exact output distribution");
    dist_cmd->add_option("--unitary", dist_opt.unitary_spec, "file|dft:N|haar:N,SEED|bs:T[,PHI]");
    dist_cmd->add_option("--input", dist_opt.input_text, "input pattern, e.g. \"1,1,0\"");
    add_detector_options(dist_cmd, dist_opt);
    dist_cmd->add_option("--format", dist_opt.format)->check(CLI::IsMember({"json", "csv"}));
    dist_cmd->add_option("--out", dist_opt.out_path, "output path (default stdout)");
    dist_cmd->add_option("--config", dist_opt.config_path, "JSON config; flags win");

    CorrectionOptions corr_opt;
    CLI::App *corr_cmd = app.add_subcommand("correction", "correction-coefficient sweeps (CSV)");
    corr_cmd->add_option("--detector", corr_opt.detector, "array|deadtime-mono|deadtime-exp")
        ->required();
    corr_cmd->add_option("--n", corr_opt.n, "total photon number")->required();
    corr_cmd->add_option("--eta", corr_opt.eta, "detection efficiency");
    corr_cmd->add_option("--gamma", corr_opt.gamma, "decay rate (deadtime-exp)");
    corr_cmd->add_option("--sweep", corr_opt.sweep, "K or ratio sweep, LO:HI[:POINTS]")
        ->required();
    corr_cmd->add_option("--out", corr_opt.out_path, "output path (default stdout)");

    ExperimentOptions sample_opt;
    CLI::App *sample_cmd = app.add_subcommand("sample", "draw samples from the exact distribution");
    sample_cmd->add_option("--unitary", sample_opt.unitary_spec,
                           "file|dft:N|haar:N,SEED|bs:T[,PHI]");
    sample_cmd->add_option("--input", sample_opt.input_text, "input pattern");
    add_detector_options(sample_cmd, sample_opt);
    sample_cmd->add_option("--trials", sample_opt.trials, "number of draws");
    sample_cmd->add_option("--seed", sample_opt.seed, "sampler seed");
    sample_cmd->add_flag("--postselect", sample_opt.postselect,
                         "keep only totals equal to the photon number");
    sample_cmd->add_option("--format", sample_opt.format)->check(CLI::IsMember({"json", "csv"}));
    sample_cmd->add_option("--out", sample_opt.out_path, "output path (default stdout)");
    sample_cmd->add_option("--config", sample_opt.config_path, "JSON config; flags win");

    ExperimentOptions pkm_opt;
    int pkm_max_m = 8;
    CLI::App *pkm_cmd = app.add_subcommand("pkm", "dump the conditional count table P(k|m)");
    add_detector_options(pkm_cmd, pkm_opt);
    pkm_cmd->add_option("--max-m", pkm_max_m, "largest photon number m in the table");
    pkm_cmd->add_option("--format", pkm_opt.format)->check(CLI::IsMember({"json", "csv"}));
    pkm_cmd->add_option("--out", pkm_opt.out_path, "output path (default stdout)");
    pkm_cmd->add_option("--config", pkm_opt.config_path, "JSON config; flags win");

    try {
        app.parse(argc, argv);
        if (unitary_cmd->parsed()) return run_unitary(unitary_opt);
        if (dist_cmd->parsed()) return run_dist(dist_cmd, dist_opt);
        if (corr_cmd->parsed()) return run_correction(corr_opt);
        if (sample_cmd->parsed()) return run_sample(sample_cmd, sample_opt);
        if (pkm_cmd->parsed()) return run_pkm(pkm_cmd, pkm_opt, pkm_max_m);
        return kExitUsage;
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    } catch (const accuracy_error &e) {
        std::cerr << "accuracy error: " << e.what() << " (estimate " << format_double(e.estimate())
                  << ", bound " << format_double(e.error_bound()) << ")\n";
        return kExitAccuracy;
    } catch (const unitarity_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
