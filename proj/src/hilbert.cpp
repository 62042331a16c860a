#include "ionsim/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace ionsim {

Dims make_dims(int n_max) {
    if (n_max < 1) {
        throw DimensionError(detail::cat("n_max must be >= 1, got ", n_max));
    }
    return Dims{n_max};
}

int flat_index(const BasisIndex& b, const Dims& dims) {
    const int N = dims.mode_dim();
    if (b.m < 0 || b.m > dims.n_max || b.n < 0 || b.n > dims.n_max) {
        throw DimensionError(
            detail::cat("occupation (", b.m, ", ", b.n, ") out of range [0, ", dims.n_max, "]"));
    }
    return static_cast<int>(b.q) * dims.pair_dim() + b.m * N + b.n;
}

BasisIndex unflatten(int flat, const Dims& dims) {
    const int P = dims.pair_dim();
    const int N = dims.mode_dim();
    if (flat < 0 || flat >= dims.total_dim()) {
        throw DimensionError(detail::cat("flat index ", flat, " out of range [0, ", dims.total_dim(), ")"));
    }
    BasisIndex b;
    b.q = static_cast<Qubit>(flat / P);
    b.m = (flat % P) / N;
    b.n = flat % N;
    return b;
}

int mode_index(int m, int n, const Dims& dims) {
    if (m < 0 || m > dims.n_max || n < 0 || n > dims.n_max) {
        throw DimensionError(
            detail::cat("occupation (", m, ", ", n, ") out of range [0, ", dims.n_max, "]"));
    }
    return m * dims.mode_dim() + n;
}

std::pair<int, int> mode_unflatten(int flat, const Dims& dims) {
    const int N = dims.mode_dim();
    if (flat < 0 || flat >= dims.pair_dim()) {
        throw DimensionError(detail::cat("mode index ", flat, " out of range [0, ", dims.pair_dim(), ")"));
    }
    return {flat / N, flat % N};
}

StateVector::StateVector(Dims dims, Space space, std::vector<Complex> amps)
    : dims_(dims), space_(space), amps_(std::move(amps)) {
    const int expected = (space == Space::composite) ? dims_.total_dim() : dims_.pair_dim();
    if (static_cast<int>(amps_.size()) != expected) {
        throw DimensionError(detail::cat("state has ", amps_.size(), " amplitudes, expected ", expected));
    }
    const double n2 = norm2();
    if (!(n2 > 0.0)) {
        throw InvariantError("state vector has zero norm");
    }
    if (n2 > 1.0 + 1e-9) {
        throw InvariantError(detail::cat("state vector norm^2 = ", n2, " exceeds 1"));
    }
}

Complex StateVector::amp(const BasisIndex& b) const {
    if (space_ != Space::composite) {
        throw DimensionError("qubit basis lookup on a modes-only state");
    }
    return amps_[static_cast<size_t>(flat_index(b, dims_))];
}

Complex StateVector::amp(int m, int n) const {
    if (space_ != Space::modes) {
        throw DimensionError("two-mode basis lookup on a composite state");
    }
    return amps_[static_cast<size_t>(mode_index(m, n, dims_))];
}

double StateVector::norm2() const {
    double s = 0.0;
    for (const Complex& a : amps_) s += std::norm(a);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm2()); }

StateVector StateVector::normalized() const {
    const double n = norm();
    if (n < 1e-12) {
        throw InvariantError("cannot normalize a (numerically) zero state");
    }
    std::vector<Complex> scaled(amps_);
    for (Complex& a : scaled) a /= n;
    return StateVector(dims_, space_, std::move(scaled));
}

Complex inner(const StateVector& u, const StateVector& v) {
    if (u.dims() != v.dims() || u.space() != v.space()) {
        throw DimensionError("inner product between states on different spaces");
    }
    Complex acc = 0.0;
    for (int i = 0; i < u.size(); ++i) {
        acc += std::conj(u.amp(i)) * v.amp(i);
    }
    return acc;
}

OperatorMatrix::OperatorMatrix(int rows, int cols, std::vector<Triplet> triplets)
    : rows_(rows), cols_(cols), entries_(std::move(triplets)) {
    if (rows_ < 1 || cols_ < 1) {
        throw DimensionError(detail::cat("operator dimensions ", rows_, "x", cols_, " invalid"));
    }
    for (const Triplet& t : entries_) {
        if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_) {
            throw DimensionError(
                detail::cat("triplet (", t.row, ", ", t.col, ") outside ", rows_, "x", cols_, " operator"));
        }
    }
    std::sort(entries_.begin(), entries_.end(), [](const Triplet& a, const Triplet& b) {
        return std::pair(a.row, a.col) < std::pair(b.row, b.col);
    });
    // Merge duplicates, drop exact zeros.
    std::vector<Triplet> merged;
    merged.reserve(entries_.size());
    for (const Triplet& t : entries_) {
        if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
            merged.back().value += t.value;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const Triplet& t) {
        return t.value.real() == 0.0 && t.value.imag() == 0.0;
    });
    entries_ = std::move(merged);
}

OperatorMatrix OperatorMatrix::identity(int n) {
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return OperatorMatrix(n, n, std::move(t));
}

OperatorMatrix OperatorMatrix::zero(int rows, int cols) {
    return OperatorMatrix(rows, cols, {});
}

OperatorMatrix OperatorMatrix::adjoint() const {
    std::vector<Triplet> t;
    t.reserve(entries_.size());
    for (const Triplet& e : entries_) {
        t.push_back({e.col, e.row, std::conj(e.value)});
    }
    return OperatorMatrix(cols_, rows_, std::move(t));
}

OperatorMatrix OperatorMatrix::scaled(Complex factor) const {
    std::vector<Triplet> t(entries_.begin(), entries_.end());
    for (Triplet& e : t) e.value *= factor;
    return OperatorMatrix(rows_, cols_, std::move(t));
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("operator sum with mismatched dimensions");
    }
    std::vector<Triplet> t(entries_.begin(), entries_.end());
    t.insert(t.end(), other.entries_.begin(), other.entries_.end());
    return OperatorMatrix(rows_, cols_, std::move(t));
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& other) const {
    return *this + other.scaled(-1.0);
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
    if (cols_ != other.rows_) {
        throw DimensionError("operator product with mismatched dimensions");
    }
    // Row-major walk over this, binary search into other's row ranges.
    std::vector<size_t> row_start(static_cast<size_t>(other.rows_) + 1, other.entries_.size());
    for (size_t i = other.entries_.size(); i-- > 0;) {
        row_start[static_cast<size_t>(other.entries_[i].row)] = i;
    }
    for (size_t r = static_cast<size_t>(other.rows_); r-- > 0;) {
        if (row_start[r] > row_start[r + 1]) row_start[r] = row_start[r + 1];
    }
    std::vector<Triplet> t;
    for (const Triplet& a : entries_) {
        const auto lo = row_start[static_cast<size_t>(a.col)];
        const auto hi = row_start[static_cast<size_t>(a.col) + 1];
        for (size_t i = lo; i < hi; ++i) {
            t.push_back({a.row, other.entries_[i].col, a.value * other.entries_[i].value});
        }
    }
    return OperatorMatrix(rows_, other.cols_, std::move(t));
}

std::vector<Complex> OperatorMatrix::apply(std::span<const Complex> x) const {
    if (static_cast<int>(x.size()) != cols_) {
        throw DimensionError(
            detail::cat("applying ", rows_, "x", cols_, " operator to vector of size ", x.size()));
    }
    std::vector<Complex> y(static_cast<size_t>(rows_), Complex{0.0, 0.0});
    for (const Triplet& e : entries_) {
        y[static_cast<size_t>(e.row)] += e.value * x[static_cast<size_t>(e.col)];
    }
    return y;
}

std::vector<Complex> OperatorMatrix::apply(const StateVector& v) const {
    return apply(v.amps());
}

double OperatorMatrix::max_abs_entry() const {
    double mx = 0.0;
    for (const Triplet& e : entries_) mx = std::max(mx, std::abs(e.value));
    return mx;
}

double max_entry_difference(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("entrywise comparison of operators with mismatched dimensions");
    }
    double mx = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    size_t i = 0, j = 0;
    auto key = [](const Triplet& t) { return std::pair(t.row, t.col); };
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && key(ea[i]) < key(eb[j]))) {
            mx = std::max(mx, std::abs(ea[i].value));
            ++i;
        } else if (i == ea.size() || key(eb[j]) < key(ea[i])) {
            mx = std::max(mx, std::abs(eb[j].value));
            ++j;
        } else {
            mx = std::max(mx, std::abs(ea[i].value - eb[j].value));
            ++i;
            ++j;
        }
    }
    return mx;
}

OperatorMatrix make_annihilation(int n_max) {
    const Dims dims = make_dims(n_max);
    const int N = dims.mode_dim();
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(n_max));
    for (int m = 1; m <= n_max; ++m) {
        t.push_back({m - 1, m, std::sqrt(static_cast<double>(m))});
    }
    return OperatorMatrix(N, N, std::move(t));
}

OperatorMatrix make_number(int n_max) {
    const Dims dims = make_dims(n_max);
    const int N = dims.mode_dim();
    std::vector<Triplet> t;
    for (int m = 1; m <= n_max; ++m) {
        t.push_back({m, m, static_cast<double>(m)});
    }
    return OperatorMatrix(N, N, std::move(t));
}

OperatorMatrix make_pauli_x() {
    return OperatorMatrix(2, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
}

OperatorMatrix make_exchange_generator(int n_max) {
    const Dims dims = make_dims(n_max);
    const int P = dims.pair_dim();
    std::vector<Triplet> t;
    for (int m = 0; m <= n_max; ++m) {
        for (int n = 0; n <= n_max; ++n) {
            const int col = mode_index(m, n, dims);
            // a^dag b: |m,n> -> sqrt((m+1)n)|m+1,n-1>
            if (n >= 1 && m + 1 <= n_max) {
                t.push_back({mode_index(m + 1, n - 1, dims), col,
                             std::sqrt(static_cast<double>((m + 1) * n))});
            }
            // a b^dag: |m,n> -> sqrt(m(n+1))|m-1,n+1>
            if (m >= 1 && n + 1 <= n_max) {
                t.push_back({mode_index(m - 1, n + 1, dims), col,
                             std::sqrt(static_cast<double>(m * (n + 1)))});
            }
        }
    }
    return OperatorMatrix(P, P, std::move(t));
}

OperatorMatrix embed(const OperatorMatrix& op, Slot slot, const Dims& dims) {
    const int N = dims.mode_dim();
    const int P = dims.pair_dim();
    const int D = dims.total_dim();

    auto expect = [&](int dim) {
        if (op.rows() != dim || op.cols() != dim) {
            throw DimensionError(detail::cat("embed: operator is ", op.rows(), "x", op.cols(),
                                         " but slot needs ", dim, "x", dim));
        }
    };

    std::vector<Triplet> t;
    switch (slot) {
    case Slot::qubit:
        expect(Dims::qubit_dim);
        t.reserve(op.entries().size() * static_cast<size_t>(P));
        for (const Triplet& e : op.entries()) {
            for (int i = 0; i < P; ++i) {
                t.push_back({e.row * P + i, e.col * P + i, e.value});
            }
        }
        break;
    case Slot::modeA:
        expect(N);
        for (const Triplet& e : op.entries()) {
            for (int q = 0; q < Dims::qubit_dim; ++q) {
                for (int n = 0; n < N; ++n) {
                    t.push_back({q * P + e.row * N + n, q * P + e.col * N + n, e.value});
                }
            }
        }
        break;
    case Slot::modeB:
        expect(N);
        for (const Triplet& e : op.entries()) {
            for (int q = 0; q < Dims::qubit_dim; ++q) {
                for (int m = 0; m < N; ++m) {
                    t.push_back({q * P + m * N + e.row, q * P + m * N + e.col, e.value});
                }
            }
        }
        break;
    case Slot::modesAB:
        expect(P);
        for (const Triplet& e : op.entries()) {
            for (int q = 0; q < Dims::qubit_dim; ++q) {
                t.push_back({q * P + e.row, q * P + e.col, e.value});
            }
        }
        break;
    }
    return OperatorMatrix(D, D, std::move(t));
}

OperatorMatrix embed_pair(const OperatorMatrix& op, Slot slot, const Dims& dims) {
    const int N = dims.mode_dim();
    const int P = dims.pair_dim();
    if (op.rows() != N || op.cols() != N) {
        throw DimensionError(detail::cat("embed_pair: operator is ", op.rows(), "x", op.cols(),
                                     " but mode slot needs ", N, "x", N));
    }
    std::vector<Triplet> t;
    if (slot == Slot::modeA) {
        for (const Triplet& e : op.entries()) {
            for (int n = 0; n < N; ++n) {
                t.push_back({e.row * N + n, e.col * N + n, e.value});
            }
        }
    } else if (slot == Slot::modeB) {
        for (const Triplet& e : op.entries()) {
            for (int m = 0; m < N; ++m) {
                t.push_back({m * N + e.row, m * N + e.col, e.value});
            }
        }
    } else {
        throw DimensionError("embed_pair: slot must be modeA or modeB");
    }
    return OperatorMatrix(P, P, std::move(t));
}

} // namespace ionsim
