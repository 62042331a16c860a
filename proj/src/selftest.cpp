#include "ionsim/selftest.hpp"

#include "ionsim/analysis.hpp"
#include "ionsim/evolution.hpp"
#include "ionsim/measurement.hpp"
#include "ionsim/states.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

namespace ionsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kThetas[] = {0.1, 0.25 * kPi, 0.5 * kPi, 1.9};

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random unit state supported on sectors s <= n_max (where evolution is exact).
StateVector random_low_sector_state(const Dims& dims, Space space, std::mt19937_64& rng) {
    const int size = (space == Space::composite) ? dims.total_dim() : dims.pair_dim();
    std::vector<Complex> amps(static_cast<size_t>(size));
    for (int i = 0; i < size; ++i) {
        const int mode_flat = i % dims.pair_dim();
        const auto [m, n] = mode_unflatten(mode_flat, dims);
        if (m + n > dims.n_max) continue;
        // Box-Muller, explicit for reproducibility.
        const double u1 = uniform01(rng);
        const double u2 = uniform01(rng);
        const double r = std::sqrt(-2.0 * std::log(u1 + 1e-300));
        amps[static_cast<size_t>(i)] =
            Complex{r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }
    double n2 = 0.0;
    for (const Complex& a : amps) n2 += std::norm(a);
    const double inv = 1.0 / std::sqrt(n2);
    for (Complex& a : amps) a *= inv;
    return StateVector(dims, space, std::move(amps));
}

OperatorMatrix flip_one_entry_sign(const OperatorMatrix& op) {
    std::vector<Triplet> t(op.entries().begin(), op.entries().end());
    // Flip the largest off-diagonal entry so the corruption is visible.
    size_t target = 0;
    double best = -1.0;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i].row != t[i].col && std::abs(t[i].value) > best) {
            best = std::abs(t[i].value);
            target = i;
        }
    }
    t[target].value = -t[target].value;
    return OperatorMatrix(op.rows(), op.cols(), std::move(t));
}

SelftestCheck check_oracle_equivalence(const SelftestOptions& opts) {
    SelftestCheck check{"oracle-equivalence", false, 0.0, 1e-10, ""};
    bool injected = opts.inject_closed_form_sign_flip;
    for (int n_max : opts.n_max_values) {
        const auto oracles = beam_splitter_expm_oracle_batch(kThetas, n_max);
        for (size_t i = 0; i < std::size(kThetas); ++i) {
            OperatorMatrix closed = beam_splitter_matrix(kThetas[i], n_max);
            if (injected) {
                closed = flip_one_entry_sign(closed);
                injected = false;
            }
            const double dev = max_entry_difference(closed, oracles[i]);
            if (dev > check.worst) {
                check.worst = dev;
                check.detail = detail::cat("n_max = ", n_max, ", theta = ", kThetas[i]);
            }
        }
    }
    check.passed = check.worst <= check.tolerance;
    return check;
}

SelftestCheck check_unitarity(const SelftestOptions& opts) {
    SelftestCheck check{"unitarity", false, 0.0, 1e-12, ""};
    std::mt19937_64 rng(20260808);
    for (int n_max : opts.n_max_values) {
        const Dims dims = make_dims(n_max);
        for (double theta : kThetas) {
            const OperatorMatrix u = beam_splitter_matrix(theta, n_max);
            const StateVector psi = random_low_sector_state(dims, Space::modes, rng);
            const std::vector<Complex> out = u.apply(psi);
            double n2 = 0.0;
            for (const Complex& a : out) n2 += std::norm(a);
            const double dev = std::abs(n2 - 1.0);
            if (dev > check.worst) {
                check.worst = dev;
                check.detail = detail::cat("n_max = ", n_max, ", theta = ", theta);
            }
        }
    }
    check.passed = check.worst <= check.tolerance;
    return check;
}

SelftestCheck check_excitation_conservation(const SelftestOptions& opts) {
    SelftestCheck check{"excitation-conservation", false, 0.0, 0.0, "off-sector weight"};
    const EvolutionConfig cfg;
    for (int n_max : opts.n_max_values) {
        const Dims dims = make_dims(n_max);
        const int pairs[][2] = {{0, 1}, {1, 1}, {0, n_max}, {n_max / 2, (n_max + 1) / 2}};
        for (const auto& pair : pairs) {
            const int s = pair[0] + pair[1];
            for (double theta : kThetas) {
                const ApplyResult out =
                    apply_h2(make_mode_fock(pair[0], pair[1], dims), theta, cfg);
                for (int i = 0; i < out.state.size(); ++i) {
                    const auto [m, n] = mode_unflatten(i, dims);
                    if (m + n != s) {
                        check.worst = std::max(check.worst, std::norm(out.state.amp(i)));
                    }
                }
            }
        }
    }
    check.passed = check.worst <= check.tolerance;
    return check;
}

SelftestCheck check_group_law(const SelftestOptions& opts) {
    SelftestCheck check{"group-law", false, 0.0, 1e-10, ""};
    std::mt19937_64 rng(77);
    const EvolutionConfig cfg;
    for (int n_max : opts.n_max_values) {
        const Dims dims = make_dims(n_max);
        const double theta1 = 0.2, theta2 = 0.5;
        const OperatorMatrix composed =
            beam_splitter_matrix(theta1, n_max) * beam_splitter_matrix(theta2, n_max);
        const double dev =
            max_entry_difference(composed, beam_splitter_matrix(theta1 + theta2, n_max));
        if (dev > check.worst) {
            check.worst = dev;
            check.detail = detail::cat("H2 matrices, n_max = ", n_max);
        }
        // Same law through the conditional coupling on a random state.
        const StateVector psi = random_low_sector_state(dims, Space::composite, rng);
        const StateVector two_step =
            apply_h1(apply_h1(psi, theta1, cfg).state, theta2, cfg).state;
        const StateVector one_step = apply_h1(psi, theta1 + theta2, cfg).state;
        double diff2 = 0.0;
        for (int i = 0; i < two_step.size(); ++i) {
            diff2 += std::norm(two_step.amp(i) - one_step.amp(i));
        }
        const double dev_h1 = std::sqrt(diff2);
        if (dev_h1 > check.worst) {
            check.worst = dev_h1;
            check.detail = detail::cat("H1 state path, n_max = ", n_max);
        }
    }
    check.passed = check.worst <= check.tolerance;
    return check;
}

SelftestCheck check_balanced_pair_entropy(const SelftestOptions& opts) {
    SelftestCheck check{"entropy-balanced-pair", false, 0.0, 1e-10, ""};
    for (int n_max : opts.n_max_values) {
        const Dims dims = make_dims(n_max);
        for (int n = 1; n <= std::min(5, n_max); ++n) {
            const StateVector cat =
                make_cat_reference(NumberCatParams{n, Complex{1.0, 0.0}}, Sign::plus, dims);
            const double dev = std::abs(entanglement_entropy(cat) - 1.0);
            if (dev > check.worst) {
                check.worst = dev;
                check.detail = detail::cat("n = ", n, ", n_max = ", n_max);
            }
        }
    }
    check.passed = check.worst <= check.tolerance;
    return check;
}

SelftestCheck check_measurement_probability_sum(const SelftestOptions& opts) {
    SelftestCheck check{"measurement-probability-sum", false, 0.0, 1e-12, "100 random states"};
    std::mt19937_64 rng(123456);
    const int n_max = opts.n_max_values.front();
    const Dims dims = make_dims(n_max);
    for (int trial = 0; trial < 100; ++trial) {
        const StateVector psi = random_low_sector_state(dims, Space::composite, rng);
        for (MeasurementBasis basis : {MeasurementBasis::z_basis, MeasurementBasis::x_basis}) {
            const auto records = measure_qubit(psi, basis);
            const double dev = std::abs(records[0].probability + records[1].probability - 1.0);
            check.worst = std::max(check.worst, dev);
        }
    }
    check.passed = check.worst <= check.tolerance;
    return check;
}

} // namespace

SelftestResult run_selftest(const SelftestOptions& opts) {
    SelftestResult result;
    result.checks.push_back(check_oracle_equivalence(opts));
    result.checks.push_back(check_unitarity(opts));
    result.checks.push_back(check_excitation_conservation(opts));
    result.checks.push_back(check_group_law(opts));
    result.checks.push_back(check_balanced_pair_entropy(opts));
    result.checks.push_back(check_measurement_probability_sum(opts));
    result.all_passed = true;
    for (const SelftestCheck& c : result.checks) result.all_passed &= c.passed;
    return result;
}

void print_selftest(const SelftestResult& result, std::ostream& os) {
    os << std::left << std::setw(30) << "suite" << std::setw(8) << "status"
       << std::setw(14) << "worst" << std::setw(12) << "tolerance" << "detail\n";
    for (const SelftestCheck& c : result.checks) {
        os << std::left << std::setw(30) << c.name << std::setw(8)
           << (c.passed ? "PASS" : "FAIL") << std::setw(14) << std::scientific
           << std::setprecision(3) << c.worst << std::setw(12) << c.tolerance
           << std::defaultfloat << c.detail << "\n";
    }
    if (!result.all_passed) {
        for (const SelftestCheck& c : result.checks) {
            if (!c.passed) {
                os << "FIRST FAILING SUITE: " << c.name << "\n";
                break;
            }
        }
    } else {
        os << "all suites passed\n";
    }
}

} // namespace ionsim
