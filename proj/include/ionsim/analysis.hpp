#pragma once

#include "ionsim/hilbert.hpp"

#include <utility>
#include <vector>

namespace ionsim {

struct JointNumberDistribution {
    int n_max = 0;
    std::vector<double> p; // row-major, indexed m*(n_max+1)+n

    double at(int m, int n) const {
        return p[static_cast<size_t>(m * (n_max + 1) + n)];
    }
};

// |<u|v>|^2, clamped into [0,1]; insensitive to global phase.
double fidelity(const StateVector& u, const StateVector& v);

// Squared singular values of the reshaped N x N amplitude matrix, descending;
// singular values below 1e-12 are dropped.
std::vector<double> schmidt_coefficients(const StateVector& modes);

// Von Neumann entropy (base 2) of the mode-a reduced density matrix.
double entanglement_entropy(const StateVector& modes);

JointNumberDistribution joint_number_distribution(const StateVector& modes);

// amp(first)/amp(second) normalized to unit modulus; throws
// UndefinedPhaseError if either reference amplitude is below 1e-12.
// Each position is an (m, n) occupation pair.
Complex extract_relative_phase(const StateVector& modes, std::pair<int, int> first,
                               std::pair<int, int> second);

} // namespace ionsim
