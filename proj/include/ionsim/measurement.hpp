#pragma once

#include "ionsim/hilbert.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace ionsim {

enum class MeasurementBasis { z_basis, x_basis };

// down/up for the z basis, plus/minus for the x basis.
enum class Outcome { down, up, plus, minus };

std::string outcome_label(Outcome o);

struct MeasurementRecord {
    MeasurementBasis basis = MeasurementBasis::z_basis;
    Outcome outcome = Outcome::down;
    double probability = 0.0;
    // Motional part after projection, qubit factor removed; empty when the
    // branch probability underflows (< 1e-14, reported as exactly 0).
    std::optional<StateVector> collapsed;
};

// Deterministic enumeration of both branches with Born probabilities.
// z basis returns {down, up}; x basis returns {plus, minus}.
std::array<MeasurementRecord, 2> measure_qubit(const StateVector& state, MeasurementBasis basis);

// Monte Carlo mode: one branch drawn with Born probability from a generator
// owned by the call. Same seed, same draw.
MeasurementRecord sample_measurement(const StateVector& state, MeasurementBasis basis,
                                     std::uint64_t seed);

// Repeated draws from a single generator seeded once.
std::vector<MeasurementRecord> sample_measurement_sequence(const StateVector& state,
                                                           MeasurementBasis basis,
                                                           std::uint64_t seed, int count);

} // namespace ionsim
