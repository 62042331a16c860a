#pragma once

#include "ionsim/hilbert.hpp"

#include <variant>

namespace ionsim {

enum class Sign { plus, minus };

// Two-mode coherent product |alpha>_a |beta>_b.
struct CoherentParams {
    Complex alpha;
    Complex beta;
};

// Knobs for the coherent builders. The guard rejects amplitudes whose mean
// occupation crowds the cutoff (|alpha|^2 > n_max/4); override_guard skips
// both the guard and the leak_tol rejection, leaving leakage as data.
struct CoherentOptions {
    double leak_tol = 1e-10;
    bool override_guard = false;
};

struct CoherentResult {
    StateVector state;
    double leakage; // 1 - norm^2 before renormalization
};

// Spin coherent state |zeta, j> in the Schwinger two-mode representation,
// j stored as twice_j so half-integer spins stay exact.
struct Su2Params {
    Complex zeta;
    int twice_j = 1;
};

StateVector make_fock(Qubit q, int m, int n, const Dims& dims);

// Two-mode Fock state without the qubit factor.
StateVector make_mode_fock(int m, int n, const Dims& dims);

// (|up> +- |down>)/sqrt(2) tensor motional. Note |-> carries the positive
// up component.
StateVector make_qubit_superposition(Sign sign, const StateVector& motional);

CoherentResult make_coherent(const CoherentParams& params, Qubit q, const Dims& dims,
                             const CoherentOptions& opts = {});

// Modes-only variant used for reference states.
CoherentResult make_mode_coherent(const CoherentParams& params, const Dims& dims,
                                  const CoherentOptions& opts = {});

// |zeta,j> = (1+|zeta|^2)^{-j} sum_k sqrt(C(2j,k)) zeta^k |k>_a |2j-k>_b.
// Built from the disentangled expansion; the exponential route goes through
// the evolution module and the two must agree.
StateVector make_su2_coherent(const Su2Params& params, const Dims& dims);

// Cat-state references: normalized two-branch superpositions.
struct Su2CatParams {
    Complex zeta;
    int twice_j = 1;
};

// phase^n |n>_a |0>_b +- |0>_a |n>_b, phase a caller-supplied unit complex.
struct NumberCatParams {
    int n = 1;
    Complex phase{0.0, -1.0};
};

// |first.alpha, first.beta> +- |second.alpha, second.beta>.
struct CoherentCatParams {
    CoherentParams first;
    CoherentParams second;
    CoherentOptions opts;
};

using CatParams = std::variant<Su2CatParams, NumberCatParams, CoherentCatParams>;

// Normalized superposition of the two constituents with the given relative
// sign; throws DegenerateStateError when the branches cancel.
StateVector make_cat_reference(const CatParams& params, Sign sign, const Dims& dims);

} // namespace ionsim
