#include "ionsim/measurement.hpp"

#include <cmath>
#include <random>

namespace ionsim {

namespace {

constexpr double kZeroProbability = 1e-14;

// Projection amplitudes <chi|psi> on the mode space for qubit state
// chi = w_down |down> + w_up |up>.
std::vector<Complex> project_qubit(const StateVector& state, Complex w_down, Complex w_up) {
    const Dims& dims = state.dims();
    std::vector<Complex> c(static_cast<size_t>(dims.pair_dim()));
    for (int i = 0; i < dims.pair_dim(); ++i) {
        const auto [m, n] = mode_unflatten(i, dims);
        c[static_cast<size_t>(i)] =
            std::conj(w_down) * state.amp({Qubit::down, m, n}) +
            std::conj(w_up) * state.amp({Qubit::up, m, n});
    }
    return c;
}

MeasurementRecord make_record(MeasurementBasis basis, Outcome outcome, std::vector<Complex> c,
                              const Dims& dims) {
    double p = 0.0;
    for (const Complex& a : c) p += std::norm(a);
    MeasurementRecord rec;
    rec.basis = basis;
    rec.outcome = outcome;
    if (p < kZeroProbability) {
        rec.probability = 0.0;
        return rec;
    }
    rec.probability = p;
    const double inv = 1.0 / std::sqrt(p);
    for (Complex& a : c) a *= inv;
    rec.collapsed = StateVector(dims, Space::modes, std::move(c));
    return rec;
}

double uniform01(std::mt19937_64& rng) {
    // Top 53 bits, portable across standard library implementations.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::string outcome_label(Outcome o) {
    switch (o) {
    case Outcome::down: return "down";
    case Outcome::up: return "up";
    case Outcome::plus: return "plus";
    default: return "minus";
    }
}

std::array<MeasurementRecord, 2> measure_qubit(const StateVector& state, MeasurementBasis basis) {
    if (state.space() != Space::composite) {
        throw DimensionError("measure_qubit needs a composite state with a qubit factor");
    }
    if (std::abs(state.norm2() - 1.0) > 1e-9) {
        throw InvariantError("measure_qubit requires a normalized input state");
    }
    const Dims& dims = state.dims();
    const double inv = 1.0 / std::sqrt(2.0);
    if (basis == MeasurementBasis::z_basis) {
        return {make_record(basis, Outcome::down, project_qubit(state, 1.0, 0.0), dims),
                make_record(basis, Outcome::up, project_qubit(state, 0.0, 1.0), dims)};
    }
    return {make_record(basis, Outcome::plus, project_qubit(state, inv, inv), dims),
            make_record(basis, Outcome::minus, project_qubit(state, -inv, inv), dims)};
}

MeasurementRecord sample_measurement(const StateVector& state, MeasurementBasis basis,
                                     std::uint64_t seed) {
    return sample_measurement_sequence(state, basis, seed, 1).front();
}

std::vector<MeasurementRecord> sample_measurement_sequence(const StateVector& state,
                                                           MeasurementBasis basis,
                                                           std::uint64_t seed, int count) {
    if (count < 1) {
        throw DimensionError(detail::cat("sample count must be >= 1, got ", count));
    }
    const auto records = measure_qubit(state, basis);
    std::mt19937_64 rng(seed);
    std::vector<MeasurementRecord> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(uniform01(rng) < records[0].probability ? records[0] : records[1]);
    }
    return out;
}

} // namespace ionsim
