#pragma once

#include "ionsim/errors.hpp"

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace ionsim {

using Complex = std::complex<double>;

// Truncated composite space: qubit(2) x mode-a(N) x mode-b(N), N = n_max+1.
// Each mode holds occupations 0..n_max inclusive.
struct Dims {
    int n_max = 1;

    static constexpr int qubit_dim = 2;
    int mode_dim() const { return n_max + 1; }
    int pair_dim() const { return mode_dim() * mode_dim(); }
    int total_dim() const { return qubit_dim * pair_dim(); }

    friend bool operator==(const Dims&, const Dims&) = default;
};

// Validates n_max >= 1.
Dims make_dims(int n_max);

enum class Qubit { down = 0, up = 1 };

struct BasisIndex {
    Qubit q = Qubit::down;
    int m = 0; // mode-a occupation
    int n = 0; // mode-b occupation
};

// Basis ordering is fixed as qubit x mode-a x mode-b everywhere:
// flat = q*N^2 + m*N + n. This is the only place that computes it.
int flat_index(const BasisIndex& b, const Dims& dims);
BasisIndex unflatten(int flat, const Dims& dims);

// Same bijection restricted to the two-mode factor: flat = m*N + n.
int mode_index(int m, int n, const Dims& dims);
std::pair<int, int> mode_unflatten(int flat, const Dims& dims);

// A StateVector either carries the qubit factor or is a pure two-mode state
// (e.g. after post-selection removes the qubit).
enum class Space { composite, modes };

class StateVector {
  public:
    StateVector(Dims dims, Space space, std::vector<Complex> amps);

    const Dims& dims() const { return dims_; }
    Space space() const { return space_; }
    int size() const { return static_cast<int>(amps_.size()); }
    std::span<const Complex> amps() const { return amps_; }

    Complex amp(int flat) const { return amps_[static_cast<size_t>(flat)]; }
    Complex amp(const BasisIndex& b) const;
    Complex amp(int m, int n) const; // modes-only states

    double norm2() const;
    double norm() const;

    // Returns a unit-norm copy; throws InvariantError on (numerically) zero norm.
    StateVector normalized() const;

  private:
    Dims dims_;
    Space space_;
    std::vector<Complex> amps_;
};

Complex inner(const StateVector& u, const StateVector& v);

struct Triplet {
    int row = 0;
    int col = 0;
    Complex value;
};

// Sparse complex matrix in deterministically (row, col)-sorted triplet form.
// Duplicate coordinates are summed at construction; exact zeros are dropped.
class OperatorMatrix {
  public:
    OperatorMatrix(int rows, int cols, std::vector<Triplet> triplets);

    static OperatorMatrix identity(int n);
    static OperatorMatrix zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::span<const Triplet> entries() const { return entries_; }

    OperatorMatrix adjoint() const;
    OperatorMatrix scaled(Complex factor) const;
    OperatorMatrix operator+(const OperatorMatrix& other) const;
    OperatorMatrix operator-(const OperatorMatrix& other) const;
    OperatorMatrix operator*(const OperatorMatrix& other) const;

    // y = A x on raw amplitudes; the result is in general not a unit vector,
    // so callers wrap it into a StateVector themselves where appropriate.
    std::vector<Complex> apply(std::span<const Complex> x) const;
    std::vector<Complex> apply(const StateVector& v) const;

    double max_abs_entry() const;

  private:
    int rows_;
    int cols_;
    std::vector<Triplet> entries_;
};

// max_ij |A_ij - B_ij| over the union of both sparsity patterns.
double max_entry_difference(const OperatorMatrix& a, const OperatorMatrix& b);

// N x N annihilation operator, <m-1|a|m> = sqrt(m).
OperatorMatrix make_annihilation(int n_max);

// N x N number operator a^dag a with exact integer diagonal.
OperatorMatrix make_number(int n_max);

// 2 x 2 Pauli sigma_x.
OperatorMatrix make_pauli_x();

// N^2 x N^2 exchange generator K = a^dag b + a b^dag on the two-mode space.
// K|m,n> = sqrt((m+1)n)|m+1,n-1> + sqrt(m(n+1))|m-1,n+1>, components pushed
// past the cutoff dropped. Hermitian and block diagonal in s = m+n.
OperatorMatrix make_exchange_generator(int n_max);

enum class Slot { qubit, modeA, modeB, modesAB };

// Lift an operator on one tensor slot to the full composite space, acting as
// identity elsewhere. Everything outside this module lifts through here.
OperatorMatrix embed(const OperatorMatrix& op, Slot slot, const Dims& dims);

// Same lifting restricted to the two-mode space (slot must be modeA or modeB).
OperatorMatrix embed_pair(const OperatorMatrix& op, Slot slot, const Dims& dims);

} // namespace ionsim
