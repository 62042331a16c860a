#include "ionsim/report.hpp"
#include "ionsim/selftest.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace {

constexpr double kPi = 3.14159265358979323846;

// Command-line / config-file mistakes that CLI11 validation cannot see.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    std::string protocol;
    int n = 1;
    double theta = 0.25 * kPi;
    double alpha_re = 1.0, alpha_im = 0.0;
    double beta_re = 1.0, beta_im = 0.0;
    std::string variant = "quarter";
    int n_max = 0; // 0 = per-protocol default (8 Fock, 30 coherent)
    std::string mode = "enumerate";
    std::uint64_t seed = 1;
    double leak_tol = 1e-10;
    std::string method = "closed_form";
    std::string output_path = "-";
    std::string dist_csv;
    std::string axis = "theta";
    int points = 17;
    double sweep_min = 0.0;
    double sweep_max = kPi;
    bool inject_sign_flip = false;
};

std::string protocol_id(const RunConfig& cfg) {
    if (cfg.protocol == "P3") return cfg.variant == "half" ? "P3b" : "P3a";
    return cfg.protocol;
}

bool is_coherent_protocol(const std::string& id) { return id == "P3a" || id == "P3b"; }

ionsim::Dims resolve_dims(const RunConfig& cfg, const std::string& id) {
    int n_max = cfg.n_max;
    if (n_max == 0) n_max = is_coherent_protocol(id) ? 30 : 8;
    if (n_max < 1) {
        throw UsageError("n_max must be >= 1");
    }
    return ionsim::make_dims(n_max);
}

ionsim::EvolutionConfig resolve_evolution(const RunConfig& cfg) {
    ionsim::EvolutionConfig out;
    out.method = (cfg.method == "expm_oracle") ? ionsim::EvolutionMethod::expm_oracle
                                               : ionsim::EvolutionMethod::closed_form;
    out.leak_tol = cfg.leak_tol;
    return out;
}

ionsim::ProtocolReport run_protocol(const RunConfig& cfg, const std::string& id,
                                    double theta_override = std::nan(""),
                                    double alpha_mag_override = std::nan("")) {
    const ionsim::Dims dims = resolve_dims(cfg, id);
    const ionsim::EvolutionConfig evo = resolve_evolution(cfg);
    const double theta = std::isnan(theta_override) ? cfg.theta : theta_override;

    if (id == "P1") return ionsim::run_p1_su2_cat(cfg.n, theta, dims, evo);
    if (id == "P2") return ionsim::run_p2_entangled_number(cfg.n, dims, evo, theta);
    if (id == "P3a" || id == "P3b") {
        std::complex<double> alpha{cfg.alpha_re, cfg.alpha_im};
        const std::complex<double> beta{cfg.beta_re, cfg.beta_im};
        if (!std::isnan(alpha_mag_override)) {
            const double arg = (std::abs(alpha) > 0.0) ? std::arg(alpha) : 0.0;
            alpha = std::polar(alpha_mag_override, arg);
        }
        return ionsim::run_p3_entangled_coherent(
            alpha, beta, id == "P3a" ? ionsim::P3Variant::quarter : ionsim::P3Variant::half,
            dims, evo);
    }
    if (id == "P4") return ionsim::run_p4_fredkin(dims, evo);
    throw UsageError("unknown protocol '" + id + "'");
}

// Born draw matching sample_measurement: mt19937_64, top 53 bits.
size_t sample_branch(const ionsim::ProtocolReport& report, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return (u < report.branches.front().probability) ? 0 : 1;
}

void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw UsageError("cannot open output file '" + path + "'");
    }
    os << content;
}

int cmd_run(const RunConfig& cfg) {
    const std::string id = protocol_id(cfg);
    ionsim::ProtocolReport report = run_protocol(cfg, id);
    report.inputs.emplace_back("mode", cfg.mode);
    report.inputs.emplace_back("seed", std::to_string(cfg.seed));

    if (cfg.mode == "sample" && !report.branches.empty()) {
        const size_t pick = sample_branch(report, cfg.seed);
        report.inputs.emplace_back("sampled_outcome",
                                   ionsim::outcome_label(report.branches[pick].outcome));
        // Keep only the drawn branch; probabilities stay the Born values, so
        // the sum-to-one invariant is intentionally not re-checked here.
        ionsim::BranchReport kept = std::move(report.branches[pick]);
        report.branches.clear();
        report.branches.push_back(std::move(kept));
    }

    write_text(cfg.output_path, ionsim::report_to_json(report));
    if (!cfg.dist_csv.empty()) {
        std::ostringstream os;
        ionsim::write_distribution_csv(report, os);
        write_text(cfg.dist_csv, os.str());
    }
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const std::string id = protocol_id(cfg);
    if (cfg.points < 2) {
        throw UsageError("sweep needs at least 2 points");
    }
    if (cfg.axis == "theta" && id != "P1" && id != "P2") {
        throw UsageError("theta sweeps apply to P1 and P2");
    }
    if (cfg.axis == "alpha_mag" && !is_coherent_protocol(id)) {
        throw UsageError("alpha_mag sweeps apply to P3");
    }

    std::vector<ionsim::SweepRow> rows;
    rows.reserve(static_cast<size_t>(cfg.points));
    for (int k = 0; k < cfg.points; ++k) {
        const double value =
            cfg.sweep_min + (cfg.sweep_max - cfg.sweep_min) * k / (cfg.points - 1);
        ionsim::ProtocolReport report =
            (cfg.axis == "theta") ? run_protocol(cfg, id, value)
                                  : run_protocol(cfg, id, std::nan(""), value);
        rows.push_back({value, std::move(report)});
    }

    std::ostringstream os;
    ionsim::write_sweep_csv(cfg.axis, rows, os);
    write_text(cfg.output_path, os.str());
    return 0;
}

int cmd_selftest(const RunConfig& cfg) {
    ionsim::SelftestOptions opts;
    opts.inject_closed_form_sign_flip = cfg.inject_sign_flip;
    const ionsim::SelftestResult result = ionsim::run_selftest(opts);
    ionsim::print_selftest(result, std::cout);
    return result.all_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Ion-qubit + two motional mode state-vector simulator"};
    app.set_config("--config", "", "Plain key=value config file; flags take precedence");
    app.allow_config_extras(false);

    app.add_option("command", cfg.command, "run | sweep | selftest")
        ->required()
        ->check(CLI::IsMember({"run", "sweep", "selftest"}));
    app.add_option("--protocol", cfg.protocol, "P1 | P2 | P3 | P3a | P3b | P4")
        ->check(CLI::IsMember({"P1", "P2", "P3", "P3a", "P3b", "P4"}));
    app.add_option("--n", cfg.n, "Fock occupation of mode b (P1, P2)");
    app.add_option("--theta", cfg.theta, "pulse angle for P1/P2 (default pi/4)");
    app.add_option("--alpha_re,--alpha-re", cfg.alpha_re, "Re alpha (P3)");
    app.add_option("--alpha_im,--alpha-im", cfg.alpha_im, "Im alpha (P3)");
    app.add_option("--beta_re,--beta-re", cfg.beta_re, "Re beta (P3)");
    app.add_option("--beta_im,--beta-im", cfg.beta_im, "Im beta (P3)");
    app.add_option("--variant", cfg.variant, "P3 variant: quarter (theta=pi/4) | half (pi/2)")
        ->check(CLI::IsMember({"quarter", "half"}));
    app.add_option("--n_max,--n-max", cfg.n_max, "Fock cutoff; 0 picks 8 (P1/P2/P4) or 30 (P3)");
    app.add_option("--mode", cfg.mode, "enumerate (both branches) | sample (one Born draw)")
        ->check(CLI::IsMember({"enumerate", "sample"}));
    app.add_option("--seed", cfg.seed, "sampling seed");
    app.add_option("--leak_tol,--leak-tol", cfg.leak_tol,
                   "max norm^2 allowed past the cutoff per pulse");
    app.add_option("--method", cfg.method, "beam-splitter construction route")
        ->check(CLI::IsMember({"closed_form", "expm_oracle"}));
    app.add_option("--output_path,--output", cfg.output_path,
                   "report/CSV destination ('-' = stdout)");
    app.add_option("--dist_csv,--dist-csv", cfg.dist_csv, "also write the full P(m,n) grid as CSV");
    app.add_option("--axis", cfg.axis, "sweep axis")
        ->check(CLI::IsMember({"theta", "alpha_mag"}));
    app.add_option("--points", cfg.points, "sweep points (>= 2)");
    app.add_option("--min", cfg.sweep_min, "sweep start");
    app.add_option("--max", cfg.sweep_max, "sweep end");
    app.add_flag("--inject_sign_flip", cfg.inject_sign_flip)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cfg.command == "selftest") return cmd_selftest(cfg);
        if (cfg.protocol.empty()) {
            throw UsageError("--protocol is required for run and sweep");
        }
        if (cfg.command == "run") return cmd_run(cfg);
        return cmd_sweep(cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ionsim::TruncationError& e) {
        std::cerr << "truncation error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
