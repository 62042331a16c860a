#pragma once

#include "ionsim/analysis.hpp"
#include "ionsim/evolution.hpp"
#include "ionsim/measurement.hpp"
#include "ionsim/states.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ionsim {

struct FidelityEntry {
    std::string reference;
    double value = 0.0;
};

struct BranchReport {
    Outcome outcome = Outcome::down;
    double probability = 0.0;
    double analytic_probability = 0.0;
    std::vector<FidelityEntry> fidelities;            // empty for a dead branch
    std::optional<double> entropy_bits;
    std::optional<JointNumberDistribution> distribution;
    std::optional<Complex> relative_phase;            // derived-convention value
    std::optional<Complex> relative_phase_opposite;   // under exp(+i theta K)
    std::optional<StateVector> state;                 // collapsed motional state
};

struct TruthTableRow {
    Sign input_sign = Sign::minus;
    int in_m = 0, in_n = 0;
    int out_m = 0, out_n = 0;  // phase-stripped expected output occupations
    Complex phase;             // measured phase on the expected output
    Complex expected_phase;    // derived-convention prediction
    Complex opposite_phase;    // prediction under exp(+i theta K)
    double fidelity = 0.0;     // |<expected basis|output>|^2
};

struct ProtocolReport {
    std::string protocol_id; // P1, P2, P3a, P3b, P4
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<BranchReport> branches;
    std::vector<TruthTableRow> truth_table; // P4 only
    std::vector<double> leakage_log;
    std::string convention_note;
    double unitary_deviation = 0.0;    // P4: max |Gram(outputs) - I|
    bool phase_stripped_cswap = false; // P4
};

// Structural checks every runner applies before returning: measured branch
// probabilities sum to 1 within 1e-12, every fidelity in [0,1].
void validate_report(const ProtocolReport& report);

// |down,0,n> -> H1(theta) -> z measurement. Both branches compared against
// the oracle-evolved superposition U(-+theta)|0,n> +- U(+-theta)|0,n> and
// against the spin-cat builder at zeta = -i tan(theta).
ProtocolReport run_p1_su2_cat(int n, double theta, const Dims& dims, const EvolutionConfig& cfg);

// |down,0,n> -> H1(theta) -> H2(theta) -> z measurement, theta = pi/4 by
// default. Branches compared to (phi^n|n,0> +- |0,n>)/sqrt(2), phi = -i.
ProtocolReport run_p2_entangled_number(int n, const Dims& dims, const EvolutionConfig& cfg,
                                       double theta = 0.25 * 3.14159265358979323846);

enum class P3Variant { quarter, half };

// |down,alpha,beta> -> H1(theta) -> H2(theta) -> z measurement with
// theta = pi/4 (quarter) or pi/2 (half). Quarter branches compared to
// |alpha,beta> +- |-i beta, -i alpha>, half branches to
// |-alpha,-beta> +- |alpha,beta>.
ProtocolReport run_p3_entangled_coherent(Complex alpha, Complex beta, P3Variant variant,
                                         const Dims& dims, const EvolutionConfig& cfg);

// All eight inputs {|->,|+>} x {0,1}_a x {0,1}_b through H1(pi/4) H2(pi/4);
// emits the truth table, checks unitarity and phase-stripped controlled-SWAP.
ProtocolReport run_p4_fredkin(const Dims& dims, const EvolutionConfig& cfg);

} // namespace ionsim
