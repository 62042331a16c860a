#pragma once

#include "ionsim/hilbert.hpp"

namespace ionsim {

enum class Hamiltonian { H1, H2 };

// One protocol step: which coupling, and the dimensionless angle theta = Omega*t.
struct PulseSpec {
    Hamiltonian hamiltonian = Hamiltonian::H2;
    double theta = 0.0;
};

enum class EvolutionMethod { closed_form, expm_oracle };

struct EvolutionConfig {
    EvolutionMethod method = EvolutionMethod::closed_form;
    double leak_tol = 1e-10; // max norm^2 allowed above the cutoff per pulse
};

// U(theta) = exp(-i theta (a^dag b + a b^dag)) on the two-mode space, built in
// closed form: expand |m,n> = (a^dag)^m (b^dag)^n / sqrt(m! n!) |0,0> under
// a^dag -> cos(theta) a^dag - i sin(theta) b^dag,
// b^dag -> cos(theta) b^dag - i sin(theta) a^dag,
// and collect binomial terms per total-excitation block s = m+n. Blocks with
// s <= n_max are exact; rows/cols with s > n_max are set to identity and are
// unreliable (the apply_* leakage budget keeps states away from them).
OperatorMatrix beam_splitter_matrix(double theta, int n_max);

// Same contract, independent route: dense eigendecomposition of the Hermitian
// generator K and exponentiation of its spectrum.
OperatorMatrix beam_splitter_expm_oracle(double theta, int n_max);

// Shares one eigendecomposition across many angles.
std::vector<OperatorMatrix> beam_splitter_expm_oracle_batch(std::span<const double> thetas,
                                                            int n_max);

// exp(-i theta K sigma_x) on the full composite space via one dense
// eigendecomposition, no qubit-eigenbasis shortcut. Cross-check target for
// apply_h1.
OperatorMatrix conditional_beam_splitter_expm_oracle(double theta, int n_max);

struct ApplyResult {
    StateVector state; // renormalized
    double leakage;    // norm^2 lost past the cutoff, before renormalization
};

// Beam splitter on the motional factor, identity on the qubit. Accepts
// composite or modes-only states. Input weight above the cutoff beyond
// cfg.leak_tol raises TruncationError naming the worst sector.
ApplyResult apply_h2(const StateVector& state, double theta, const EvolutionConfig& cfg);

// Conditional beam splitter exp(-i theta K sigma_x): U(+theta) on the
// sigma_x = +1 qubit component, U(-theta) on the -1 component.
ApplyResult apply_h1(const StateVector& state, double theta, const EvolutionConfig& cfg);

struct SequenceResult {
    StateVector state;
    std::vector<double> leakage_log; // per-pulse norm^2 loss
};

SequenceResult run_sequence(const StateVector& state, std::span<const PulseSpec> pulses,
                            const EvolutionConfig& cfg);

} // namespace ionsim
