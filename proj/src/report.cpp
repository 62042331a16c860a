#include "ionsim/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ionsim {

namespace {

using json = nlohmann::ordered_json;

json complex_json(Complex v) {
    return json{{"re", v.real()}, {"im", v.imag()}};
}

json branch_json(const BranchReport& b) {
    json out;
    out["outcome"] = outcome_label(b.outcome);
    out["probability"] = b.probability;
    out["analytic_probability"] = b.analytic_probability;
    json fids = json::object();
    for (const FidelityEntry& f : b.fidelities) fids[f.reference] = f.value;
    out["fidelities"] = fids;
    out["entropy_bits"] = b.entropy_bits ? json(*b.entropy_bits) : json(nullptr);
    out["relative_phase"] = b.relative_phase ? complex_json(*b.relative_phase) : json(nullptr);
    out["relative_phase_opposite_convention"] =
        b.relative_phase_opposite ? complex_json(*b.relative_phase_opposite) : json(nullptr);
    json dist = json::array();
    if (b.distribution) {
        const int N = b.distribution->n_max + 1;
        for (int m = 0; m < N; ++m) {
            for (int n = 0; n < N; ++n) {
                const double p = b.distribution->at(m, n);
                if (p >= 1e-14) {
                    dist.push_back(json{{"m", m}, {"n", n}, {"p", p}});
                }
            }
        }
    }
    out["distribution"] = dist;
    return out;
}

const char* sign_label(Sign s) { return s == Sign::plus ? "plus" : "minus"; }

} // namespace

std::string report_to_json(const ProtocolReport& report) {
    json out;
    out["schema_version"] = kReportSchemaVersion;
    out["protocol"] = report.protocol_id;
    json inputs = json::object();
    for (const auto& [key, value] : report.inputs) inputs[key] = value;
    out["inputs"] = inputs;
    out["convention_note"] = report.convention_note;
    out["leakage_log"] = report.leakage_log;

    json branches = json::array();
    for (const BranchReport& b : report.branches) branches.push_back(branch_json(b));
    out["branches"] = branches;

    if (!report.truth_table.empty()) {
        json table = json::array();
        for (const TruthTableRow& row : report.truth_table) {
            table.push_back(json{{"input_qubit", sign_label(row.input_sign)},
                                 {"input_m", row.in_m},
                                 {"input_n", row.in_n},
                                 {"output_m", row.out_m},
                                 {"output_n", row.out_n},
                                 {"phase", complex_json(row.phase)},
                                 {"expected_phase", complex_json(row.expected_phase)},
                                 {"opposite_convention_phase", complex_json(row.opposite_phase)},
                                 {"fidelity", row.fidelity}});
        }
        out["truth_table"] = table;
        out["unitary_deviation"] = report.unitary_deviation;
        out["phase_stripped_cswap"] = report.phase_stripped_cswap;
    }
    return out.dump(2) + "\n";
}

void write_distribution_csv(const ProtocolReport& report, std::ostream& os) {
    os << "outcome,m,n,p\n";
    char buf[64];
    for (const BranchReport& b : report.branches) {
        if (!b.distribution) continue;
        const int N = b.distribution->n_max + 1;
        for (int m = 0; m < N; ++m) {
            for (int n = 0; n < N; ++n) {
                std::snprintf(buf, sizeof buf, "%.17g", b.distribution->at(m, n));
                os << outcome_label(b.outcome) << ',' << m << ',' << n << ',' << buf << '\n';
            }
        }
    }
}

void write_sweep_csv(const std::string& axis, std::span<const SweepRow> rows, std::ostream& os) {
    os << axis
       << ",prob_down,prob_up,fidelity_down,fidelity_up,entropy_down,entropy_up\n";
    char buf[64];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const SweepRow& row : rows) {
        emit(row.parameter);
        const BranchReport* down = nullptr;
        const BranchReport* up = nullptr;
        for (const BranchReport& b : row.report.branches) {
            if (b.outcome == Outcome::down) down = &b;
            if (b.outcome == Outcome::up) up = &b;
        }
        for (const BranchReport* b : {down, up}) {
            os << ',';
            emit(b ? b->probability : std::nan(""));
        }
        for (const BranchReport* b : {down, up}) {
            os << ',';
            emit(b && !b->fidelities.empty() ? b->fidelities.front().value : std::nan(""));
        }
        for (const BranchReport* b : {down, up}) {
            os << ',';
            emit(b && b->entropy_bits ? *b->entropy_bits : std::nan(""));
        }
        os << '\n';
    }
}

} // namespace ionsim
