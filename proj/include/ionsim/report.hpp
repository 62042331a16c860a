#pragma once

#include "ionsim/protocols.hpp"

#include <iosfwd>
#include <string>

namespace ionsim {

// Schema v1: one self-describing JSON document per run. Keys are stable;
// complex numbers are {re, im} objects; distribution entries below 1e-14
// are omitted (the CSV table carries the full grid).
inline constexpr int kReportSchemaVersion = 1;

std::string report_to_json(const ProtocolReport& report);

// Full P(m,n) grid, one row per (branch outcome, m, n).
void write_distribution_csv(const ProtocolReport& report, std::ostream& os);

struct SweepRow {
    double parameter = 0.0;
    ProtocolReport report;
};

// One row per sweep point: parameter, branch probabilities, first-reference
// fidelities, entropies. Dead branches print nan.
void write_sweep_csv(const std::string& axis, std::span<const SweepRow> rows, std::ostream& os);

} // namespace ionsim
