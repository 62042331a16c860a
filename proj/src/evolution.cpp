#include "ionsim/evolution.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>

namespace ionsim {

namespace {

using LongComplex = std::complex<long double>;

// (-i)^e for e >= 0.
LongComplex minus_i_pow(int e) {
    switch (e & 3) {
    case 0: return {1.0L, 0.0L};
    case 1: return {0.0L, -1.0L};
    case 2: return {-1.0L, 0.0L};
    default: return {0.0L, 1.0L};
    }
}

std::vector<long double> factorial_table(int n) {
    std::vector<long double> f(static_cast<size_t>(n) + 1, 1.0L);
    for (int i = 1; i <= n; ++i) {
        f[static_cast<size_t>(i)] = f[static_cast<size_t>(i) - 1] * static_cast<long double>(i);
    }
    return f;
}

std::vector<long double> binomial_row(int n, const std::vector<long double>& fact) {
    std::vector<long double> row(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        row[static_cast<size_t>(k)] =
            fact[static_cast<size_t>(n)] /
            (fact[static_cast<size_t>(k)] * fact[static_cast<size_t>(n - k)]);
    }
    return row;
}

// Total excitation of a flat motional index.
int sector_of(int mode_flat, const Dims& dims) {
    const auto [m, n] = mode_unflatten(mode_flat, dims);
    return m + n;
}

Eigen::MatrixXd dense_real(const OperatorMatrix& op) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(op.rows(), op.cols());
    for (const Triplet& t : op.entries()) {
        d(t.row, t.col) += t.value.real();
    }
    return d;
}

// Sparse triplets of exp(-i theta G) from a precomputed eigendecomposition of
// the real symmetric generator G. keep(i, j) filters which entries survive.
template <class Keep>
std::vector<Triplet> expm_triplets(const Eigen::MatrixXd& vectors, const Eigen::VectorXd& values,
                                   double theta, Keep keep) {
    const Eigen::VectorXcd phases =
        (Complex{0.0, -theta} * values.cast<Complex>().array()).exp();
    const Eigen::MatrixXcd u =
        vectors.cast<Complex>() * phases.asDiagonal() * vectors.transpose().cast<Complex>();
    std::vector<Triplet> t;
    for (int i = 0; i < u.rows(); ++i) {
        for (int j = 0; j < u.cols(); ++j) {
            if (keep(i, j)) t.push_back({i, j, u(i, j)});
        }
    }
    return t;
}

struct ModeEigs {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
};

ModeEigs exchange_generator_eigs(int n_max) {
    const Eigen::MatrixXd k = dense_real(make_exchange_generator(n_max));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
    if (solver.info() != Eigen::Success) {
        throw OracleFailureError(
            detail::cat("eigendecomposition of the exchange generator failed at n_max = ", n_max));
    }
    return {solver.eigenvectors(), solver.eigenvalues()};
}

OperatorMatrix expm_unitary_from_eigs(const ModeEigs& eigs, double theta, const Dims& dims) {
    // The generator conserves s = m+n, so the exact exponential is block
    // diagonal; keep only same-sector entries in s <= n_max and overwrite the
    // unreliable s > n_max sectors with identity, matching the closed form.
    auto keep = [&](int i, int j) {
        const int si = sector_of(i, dims);
        return si == sector_of(j, dims) && si <= dims.n_max;
    };
    std::vector<Triplet> t = expm_triplets(eigs.vectors, eigs.values, theta, keep);
    for (int i = 0; i < dims.pair_dim(); ++i) {
        if (sector_of(i, dims) > dims.n_max) t.push_back({i, i, 1.0});
    }
    return OperatorMatrix(dims.pair_dim(), dims.pair_dim(), std::move(t));
}

// Weight per total-excitation sector, summed over qubit components if any.
std::vector<double> sector_weights(const StateVector& state) {
    const Dims& dims = state.dims();
    std::vector<double> w(static_cast<size_t>(2 * dims.n_max) + 1, 0.0);
    for (int i = 0; i < state.size(); ++i) {
        const int mode_flat = i % dims.pair_dim();
        w[static_cast<size_t>(sector_of(mode_flat, dims))] += std::norm(state.amp(i));
    }
    return w;
}

void check_normalized(const StateVector& state, const char* op) {
    if (std::abs(state.norm2() - 1.0) > 1e-9) {
        throw InvariantError(detail::cat(op, " requires a normalized input state, norm^2 = ",
                                         state.norm2()));
    }
}

void check_theta(double theta) {
    if (!std::isfinite(theta)) {
        throw InvariantError(detail::cat("pulse angle must be finite, got ", theta));
    }
}

void check_config(const EvolutionConfig& cfg) {
    if (!(cfg.leak_tol > 0.0)) {
        throw InvariantError(detail::cat("leak_tol must be positive, got ", cfg.leak_tol));
    }
}

// Shared leakage bookkeeping: measure the weight above the cutoff, reject if
// it exceeds the budget, otherwise zero it out.
double strip_high_sectors(std::vector<Complex>& amps, const StateVector& state,
                          const EvolutionConfig& cfg) {
    const Dims& dims = state.dims();
    const std::vector<double> w = sector_weights(state);
    double high = 0.0;
    int worst = -1;
    for (int s = dims.n_max + 1; s <= 2 * dims.n_max; ++s) {
        high += w[static_cast<size_t>(s)];
        if (worst < 0 || w[static_cast<size_t>(s)] > w[static_cast<size_t>(worst)]) worst = s;
    }
    if (high > cfg.leak_tol) {
        throw TruncationError(
            detail::cat("input weight ", high, " above the cutoff exceeds leak_tol = ",
                        cfg.leak_tol, " (worst sector s = ", worst, ", n_max = ", dims.n_max, ")"),
            worst, high);
    }
    if (high > 0.0) {
        for (size_t i = 0; i < amps.size(); ++i) {
            const int mode_flat = static_cast<int>(i) % dims.pair_dim();
            if (sector_of(mode_flat, dims) > dims.n_max) amps[i] = 0.0;
        }
    }
    return high;
}

OperatorMatrix mode_unitary(double theta, int n_max, EvolutionMethod method) {
    return method == EvolutionMethod::closed_form ? beam_splitter_matrix(theta, n_max)
                                                  : beam_splitter_expm_oracle(theta, n_max);
}

StateVector renormalized(std::vector<Complex> amps, const Dims& dims, Space space) {
    double n2 = 0.0;
    for (const Complex& a : amps) n2 += std::norm(a);
    const double inv = 1.0 / std::sqrt(n2);
    for (Complex& a : amps) a *= inv;
    return StateVector(dims, space, std::move(amps));
}

} // namespace

OperatorMatrix beam_splitter_matrix(double theta, int n_max) {
    check_theta(theta);
    const Dims dims = make_dims(n_max);
    const int P = dims.pair_dim();
    const auto fact = factorial_table(n_max);

    const long double c = std::cos(static_cast<long double>(theta));
    const long double si = std::sin(static_cast<long double>(theta));
    std::vector<long double> cpow(static_cast<size_t>(n_max) + 1, 1.0L);
    std::vector<long double> spow(static_cast<size_t>(n_max) + 1, 1.0L);
    for (int k = 1; k <= n_max; ++k) {
        cpow[static_cast<size_t>(k)] = cpow[static_cast<size_t>(k) - 1] * c;
        spow[static_cast<size_t>(k)] = spow[static_cast<size_t>(k) - 1] * si;
    }

    std::vector<std::vector<long double>> binom;
    binom.reserve(static_cast<size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) binom.push_back(binomial_row(n, fact));

    std::vector<Triplet> t;
    for (int s = 0; s <= n_max; ++s) {
        for (int m = 0; m <= s; ++m) {
            const int n = s - m;
            const int col = mode_index(m, n, dims);
            for (int mp = 0; mp <= s; ++mp) {
                const int np = s - mp;
                const long double scale = std::sqrt(
                    (fact[static_cast<size_t>(mp)] * fact[static_cast<size_t>(np)]) /
                    (fact[static_cast<size_t>(m)] * fact[static_cast<size_t>(n)]));
                LongComplex acc{0.0L, 0.0L};
                const int p_lo = std::max(0, mp - n);
                const int p_hi = std::min(m, mp);
                for (int p = p_lo; p <= p_hi; ++p) {
                    const int q = p + n - mp;
                    const int e = m + mp - 2 * p; // power of (-i sin)
                    const long double mag = binom[static_cast<size_t>(m)][static_cast<size_t>(p)] *
                                            binom[static_cast<size_t>(n)][static_cast<size_t>(q)] *
                                            cpow[static_cast<size_t>(p + q)] *
                                            spow[static_cast<size_t>(e)];
                    acc += mag * minus_i_pow(e);
                }
                acc *= scale;
                const Complex value{static_cast<double>(acc.real()),
                                    static_cast<double>(acc.imag())};
                if (value != Complex{0.0, 0.0}) {
                    t.push_back({mode_index(mp, np, dims), col, value});
                }
            }
        }
    }
    for (int i = 0; i < P; ++i) {
        if (sector_of(i, dims) > n_max) t.push_back({i, i, 1.0});
    }
    return OperatorMatrix(P, P, std::move(t));
}

OperatorMatrix beam_splitter_expm_oracle(double theta, int n_max) {
    check_theta(theta);
    const Dims dims = make_dims(n_max);
    return expm_unitary_from_eigs(exchange_generator_eigs(n_max), theta, dims);
}

std::vector<OperatorMatrix> beam_splitter_expm_oracle_batch(std::span<const double> thetas,
                                                            int n_max) {
    const Dims dims = make_dims(n_max);
    const ModeEigs eigs = exchange_generator_eigs(n_max);
    std::vector<OperatorMatrix> out;
    out.reserve(thetas.size());
    for (double theta : thetas) {
        out.push_back(expm_unitary_from_eigs(eigs, theta, dims));
    }
    return out;
}

OperatorMatrix conditional_beam_splitter_expm_oracle(double theta, int n_max) {
    check_theta(theta);
    const Dims dims = make_dims(n_max);
    const OperatorMatrix generator =
        embed(make_exchange_generator(n_max), Slot::modesAB, dims) *
        embed(make_pauli_x(), Slot::qubit, dims);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_real(generator));
    if (solver.info() != Eigen::Success) {
        throw OracleFailureError("eigendecomposition of the conditional generator failed");
    }
    auto keep = [&](int i, int j) {
        const int si = sector_of(i % dims.pair_dim(), dims);
        return si <= dims.n_max && sector_of(j % dims.pair_dim(), dims) == si;
    };
    std::vector<Triplet> t =
        expm_triplets(solver.eigenvectors(), solver.eigenvalues(), theta, keep);
    for (int i = 0; i < dims.total_dim(); ++i) {
        if (sector_of(i % dims.pair_dim(), dims) > dims.n_max) t.push_back({i, i, 1.0});
    }
    return OperatorMatrix(dims.total_dim(), dims.total_dim(), std::move(t));
}

ApplyResult apply_h2(const StateVector& state, double theta, const EvolutionConfig& cfg) {
    check_normalized(state, "apply_h2");
    check_theta(theta);
    check_config(cfg);
    const Dims& dims = state.dims();
    std::vector<Complex> amps(state.amps().begin(), state.amps().end());
    const double leakage = strip_high_sectors(amps, state, cfg);

    OperatorMatrix u = mode_unitary(theta, dims.n_max, cfg.method);
    if (state.space() == Space::composite) {
        u = embed(u, Slot::modesAB, dims);
    }
    return ApplyResult{renormalized(u.apply(amps), dims, state.space()), leakage};
}

ApplyResult apply_h1(const StateVector& state, double theta, const EvolutionConfig& cfg) {
    check_normalized(state, "apply_h1");
    check_theta(theta);
    check_config(cfg);
    if (state.space() != Space::composite) {
        throw DimensionError("apply_h1 needs the qubit factor; state is modes-only");
    }
    const Dims& dims = state.dims();
    const int P = dims.pair_dim();
    std::vector<Complex> amps(state.amps().begin(), state.amps().end());
    const double leakage = strip_high_sectors(amps, state, cfg);

    // sigma_x eigenbasis: |+-> = (|up> +- |down>)/sqrt(2).
    const double inv = 1.0 / std::sqrt(2.0);
    std::vector<Complex> plus(static_cast<size_t>(P));
    std::vector<Complex> minus(static_cast<size_t>(P));
    for (int i = 0; i < P; ++i) {
        const auto [m, n] = mode_unflatten(i, dims);
        const Complex up = amps[static_cast<size_t>(flat_index({Qubit::up, m, n}, dims))];
        const Complex down = amps[static_cast<size_t>(flat_index({Qubit::down, m, n}, dims))];
        plus[static_cast<size_t>(i)] = inv * (up + down);
        minus[static_cast<size_t>(i)] = inv * (up - down);
    }

    const OperatorMatrix u_plus = mode_unitary(theta, dims.n_max, cfg.method);
    const OperatorMatrix u_minus = mode_unitary(-theta, dims.n_max, cfg.method);
    const std::vector<Complex> plus_out = u_plus.apply(plus);
    const std::vector<Complex> minus_out = u_minus.apply(minus);

    std::vector<Complex> out(static_cast<size_t>(dims.total_dim()));
    for (int i = 0; i < P; ++i) {
        const auto [m, n] = mode_unflatten(i, dims);
        out[static_cast<size_t>(flat_index({Qubit::up, m, n}, dims))] =
            inv * (plus_out[static_cast<size_t>(i)] + minus_out[static_cast<size_t>(i)]);
        out[static_cast<size_t>(flat_index({Qubit::down, m, n}, dims))] =
            inv * (plus_out[static_cast<size_t>(i)] - minus_out[static_cast<size_t>(i)]);
    }
    return ApplyResult{renormalized(std::move(out), dims, Space::composite), leakage};
}

SequenceResult run_sequence(const StateVector& state, std::span<const PulseSpec> pulses,
                            const EvolutionConfig& cfg) {
    check_normalized(state, "run_sequence");
    StateVector current = state;
    std::vector<double> leakage_log;
    leakage_log.reserve(pulses.size());
    for (const PulseSpec& pulse : pulses) {
        ApplyResult step = (pulse.hamiltonian == Hamiltonian::H1)
                               ? apply_h1(current, pulse.theta, cfg)
                               : apply_h2(current, pulse.theta, cfg);
        current = std::move(step.state);
        leakage_log.push_back(step.leakage);
    }
    return SequenceResult{std::move(current), std::move(leakage_log)};
}

} // namespace ionsim
