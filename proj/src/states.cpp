#include "ionsim/states.hpp"

#include <cmath>

namespace ionsim {

namespace {

std::vector<Complex> zero_amps(const Dims& dims, Space space) {
    const int size = (space == Space::composite) ? dims.total_dim() : dims.pair_dim();
    return std::vector<Complex>(static_cast<size_t>(size), Complex{0.0, 0.0});
}

// Single-mode coherent amplitudes e^{-|a|^2/2} a^m / sqrt(m!) via recurrence.
std::vector<Complex> coherent_mode_amps(Complex alpha, int n_max) {
    std::vector<Complex> c(static_cast<size_t>(n_max) + 1);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int m = 1; m <= n_max; ++m) {
        c[static_cast<size_t>(m)] =
            c[static_cast<size_t>(m) - 1] * alpha / std::sqrt(static_cast<double>(m));
    }
    return c;
}

void check_coherent_guard(const CoherentParams& params, const Dims& dims,
                          const CoherentOptions& opts) {
    if (opts.override_guard) return;
    const double cap = static_cast<double>(dims.n_max) / 4.0;
    const double na = std::norm(params.alpha);
    const double nb = std::norm(params.beta);
    if (na > cap || nb > cap) {
        throw TruncationError(
            detail::cat("coherent amplitude too large for cutoff: |alpha|^2 = ", na,
                        ", |beta|^2 = ", nb, ", guard requires <= n_max/4 = ", cap),
            dims.n_max, std::max(na, nb));
    }
}

// Raw (unnormalized within truncation) product amplitudes on the mode space.
std::vector<Complex> coherent_pair_amps(const CoherentParams& params, const Dims& dims,
                                        double& norm2_out) {
    const auto ca = coherent_mode_amps(params.alpha, dims.n_max);
    const auto cb = coherent_mode_amps(params.beta, dims.n_max);
    std::vector<Complex> amps = zero_amps(dims, Space::modes);
    for (int m = 0; m <= dims.n_max; ++m) {
        for (int n = 0; n <= dims.n_max; ++n) {
            amps[static_cast<size_t>(mode_index(m, n, dims))] =
                ca[static_cast<size_t>(m)] * cb[static_cast<size_t>(n)];
        }
    }
    double wa = 0.0, wb = 0.0;
    for (const Complex& v : ca) wa += std::norm(v);
    for (const Complex& v : cb) wb += std::norm(v);
    norm2_out = wa * wb;
    return amps;
}

StateVector normalize_raw(std::vector<Complex> amps, const Dims& dims, Space space) {
    double n2 = 0.0;
    for (const Complex& a : amps) n2 += std::norm(a);
    if (n2 < 1e-24) {
        throw DegenerateStateError("superposition collapsed to the zero vector");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (Complex& a : amps) a *= inv;
    return StateVector(dims, space, std::move(amps));
}

long double binomial(int n, int k) {
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) {
        r *= static_cast<long double>(n - k + i) / static_cast<long double>(i);
    }
    return r;
}

} // namespace

StateVector make_fock(Qubit q, int m, int n, const Dims& dims) {
    std::vector<Complex> amps = zero_amps(dims, Space::composite);
    amps[static_cast<size_t>(flat_index({q, m, n}, dims))] = 1.0;
    return StateVector(dims, Space::composite, std::move(amps));
}

StateVector make_mode_fock(int m, int n, const Dims& dims) {
    std::vector<Complex> amps = zero_amps(dims, Space::modes);
    amps[static_cast<size_t>(mode_index(m, n, dims))] = 1.0;
    return StateVector(dims, Space::modes, std::move(amps));
}

StateVector make_qubit_superposition(Sign sign, const StateVector& motional) {
    if (motional.space() != Space::modes) {
        throw DimensionError("make_qubit_superposition needs a modes-only motional state");
    }
    if (std::abs(motional.norm2() - 1.0) > 1e-9) {
        throw InvariantError("make_qubit_superposition needs a normalized motional state");
    }
    const Dims dims = motional.dims();
    const double inv = 1.0 / std::sqrt(2.0);
    const double down_sign = (sign == Sign::plus) ? 1.0 : -1.0;
    std::vector<Complex> amps = zero_amps(dims, Space::composite);
    for (int i = 0; i < motional.size(); ++i) {
        const auto [m, n] = mode_unflatten(i, dims);
        amps[static_cast<size_t>(flat_index({Qubit::up, m, n}, dims))] = inv * motional.amp(i);
        amps[static_cast<size_t>(flat_index({Qubit::down, m, n}, dims))] =
            down_sign * inv * motional.amp(i);
    }
    return StateVector(dims, Space::composite, std::move(amps));
}

CoherentResult make_mode_coherent(const CoherentParams& params, const Dims& dims,
                                  const CoherentOptions& opts) {
    check_coherent_guard(params, dims, opts);
    double norm2 = 0.0;
    std::vector<Complex> amps = coherent_pair_amps(params, dims, norm2);
    const double leakage = 1.0 - norm2;
    if (!opts.override_guard && leakage > opts.leak_tol) {
        throw TruncationError(
            detail::cat("coherent state loses ", leakage, " of its weight past n_max = ",
                        dims.n_max, " (leak_tol = ", opts.leak_tol, ")"),
            dims.n_max, leakage);
    }
    return CoherentResult{normalize_raw(std::move(amps), dims, Space::modes), leakage};
}

CoherentResult make_coherent(const CoherentParams& params, Qubit q, const Dims& dims,
                             const CoherentOptions& opts) {
    CoherentResult mode = make_mode_coherent(params, dims, opts);
    std::vector<Complex> amps = zero_amps(dims, Space::composite);
    const int offset = static_cast<int>(q) * dims.pair_dim();
    for (int i = 0; i < mode.state.size(); ++i) {
        amps[static_cast<size_t>(offset + i)] = mode.state.amp(i);
    }
    return CoherentResult{StateVector(dims, Space::composite, std::move(amps)), mode.leakage};
}

StateVector make_su2_coherent(const Su2Params& params, const Dims& dims) {
    if (params.twice_j < 1) {
        throw DimensionError(detail::cat("twice_j must be >= 1, got ", params.twice_j));
    }
    if (params.twice_j > dims.n_max) {
        throw DimensionError(detail::cat("2j = ", params.twice_j,
                                         " exceeds the Fock cutoff n_max = ", dims.n_max));
    }
    const int two_j = params.twice_j;
    const long double z2 = static_cast<long double>(std::norm(params.zeta));
    const long double prefactor =
        std::pow(1.0L + z2, -static_cast<long double>(two_j) / 2.0L);

    std::vector<Complex> amps = zero_amps(dims, Space::modes);
    Complex zeta_pow = 1.0;
    for (int k = 0; k <= two_j; ++k) {
        const long double coeff = prefactor * std::sqrt(binomial(two_j, k));
        amps[static_cast<size_t>(mode_index(k, two_j - k, dims))] =
            static_cast<double>(coeff) * zeta_pow;
        zeta_pow *= params.zeta;
    }
    return StateVector(dims, Space::modes, std::move(amps));
}

StateVector make_cat_reference(const CatParams& params, Sign sign, const Dims& dims) {
    const double rel = (sign == Sign::plus) ? 1.0 : -1.0;

    if (const auto* su2 = std::get_if<Su2CatParams>(&params)) {
        const StateVector lhs = make_su2_coherent({su2->zeta, su2->twice_j}, dims);
        const StateVector rhs = make_su2_coherent({-su2->zeta, su2->twice_j}, dims);
        std::vector<Complex> amps(lhs.amps().begin(), lhs.amps().end());
        for (int i = 0; i < rhs.size(); ++i) amps[static_cast<size_t>(i)] += rel * rhs.amp(i);
        return normalize_raw(std::move(amps), dims, Space::modes);
    }

    if (const auto* num = std::get_if<NumberCatParams>(&params)) {
        if (std::abs(std::abs(num->phase) - 1.0) > 1e-9) {
            throw InvariantError(detail::cat("number-cat phase must have unit modulus, got |phi| = ",
                                             std::abs(num->phase)));
        }
        if (num->n < 0 || num->n > dims.n_max) {
            throw DimensionError(detail::cat("number-cat occupation ", num->n,
                                             " out of range [0, ", dims.n_max, "]"));
        }
        Complex phase_n = 1.0;
        for (int i = 0; i < num->n; ++i) phase_n *= num->phase;
        std::vector<Complex> amps = zero_amps(dims, Space::modes);
        amps[static_cast<size_t>(mode_index(num->n, 0, dims))] += phase_n;
        amps[static_cast<size_t>(mode_index(0, num->n, dims))] += rel;
        return normalize_raw(std::move(amps), dims, Space::modes);
    }

    const auto& coh = std::get<CoherentCatParams>(params);
    check_coherent_guard(coh.first, dims, coh.opts);
    check_coherent_guard(coh.second, dims, coh.opts);
    double n2 = 0.0;
    std::vector<Complex> amps = coherent_pair_amps(coh.first, dims, n2);
    std::vector<Complex> second = coherent_pair_amps(coh.second, dims, n2);
    for (size_t i = 0; i < amps.size(); ++i) amps[i] += rel * second[i];
    return normalize_raw(std::move(amps), dims, Space::modes);
}

} // namespace ionsim
