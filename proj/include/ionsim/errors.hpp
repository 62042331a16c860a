#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace ionsim {

namespace detail {
template <class... Args>
std::string cat(Args&&... args) {
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}
} // namespace detail

// Common base so callers can catch simulator errors apart from std ones.
class SimError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad Fock cutoff, mismatched spaces, out-of-range occupations.
class DimensionError : public SimError {
  public:
    using SimError::SimError;
};

// Probability weight above the Fock cutoff exceeded the leak budget.
class TruncationError : public SimError {
  public:
    TruncationError(const std::string& msg, int sector, double weight)
        : SimError(msg), sector_(sector), weight_(weight) {}

    int sector() const { return sector_; }
    double weight() const { return weight_; }

  private:
    int sector_;
    double weight_;
};

// Superposition builders collapsing to the zero vector.
class DegenerateStateError : public SimError {
  public:
    using SimError::SimError;
};

// Relative-phase extraction against a vanishing reference amplitude.
class UndefinedPhaseError : public SimError {
  public:
    using SimError::SimError;
};

// Numerical cross-check machinery failed to produce a usable answer.
class OracleFailureError : public SimError {
  public:
    using SimError::SimError;
};

// A structural self-check on produced data failed.
class InvariantError : public SimError {
  public:
    using SimError::SimError;
};

} // namespace ionsim
