#include "ionsim/states.hpp"

#include "ionsim/evolution.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace ionsim;
using test_util::kPi;

TEST_SUITE_BEGIN("states");

TEST_CASE("fock builders") {
    const Dims dims = make_dims(4);
    SUBCASE("(down, 0, 3) puts the single amplitude at q*N^2 + 0*N + 3") {
        const StateVector psi = make_fock(Qubit::down, 0, 3, dims);
        CHECK(psi.amp(3) == Complex{1.0, 0.0});
        CHECK(psi.norm2() == 1.0);
    }
    SUBCASE("opposite qubit labels are orthogonal") {
        const StateVector d = make_fock(Qubit::down, 0, 3, dims);
        const StateVector u = make_fock(Qubit::up, 0, 3, dims);
        CHECK(inner(d, u) == Complex{0.0, 0.0});
    }
    SUBCASE("occupation out of range is rejected") {
        CHECK_THROWS_AS(make_fock(Qubit::down, 5, 0, dims), DimensionError);
        CHECK_THROWS_AS(make_mode_fock(0, -1, dims), DimensionError);
    }
}

TEST_CASE("qubit superpositions are sigma_x eigenstates") {
    const Dims dims = make_dims(2);
    const StateVector motional = make_mode_fock(0, 0, dims);
    const StateVector plus = make_qubit_superposition(Sign::plus, motional);
    const StateVector minus = make_qubit_superposition(Sign::minus, motional);

    const double inv = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(plus.amp({Qubit::down, 0, 0}) - inv) <= 1e-15);
    CHECK(std::abs(plus.amp({Qubit::up, 0, 0}) - inv) <= 1e-15);
    CHECK(std::abs(minus.amp({Qubit::up, 0, 0}) - inv) <= 1e-15);
    CHECK(std::abs(minus.amp({Qubit::down, 0, 0}) + inv) <= 1e-15);

    const OperatorMatrix sx = embed(make_pauli_x(), Slot::qubit, dims);
    const auto sx_plus = sx.apply(plus);
    const auto sx_minus = sx.apply(minus);
    for (int i = 0; i < plus.size(); ++i) {
        CHECK(std::abs(sx_plus[static_cast<size_t>(i)] - plus.amp(i)) <= 1e-15);
        CHECK(std::abs(sx_minus[static_cast<size_t>(i)] + minus.amp(i)) <= 1e-15);
    }
}

TEST_CASE("coherent state builder") {
    SUBCASE("alpha = beta = 0 is the two-mode vacuum with zero leakage") {
        const Dims dims = make_dims(4);
        const CoherentResult r = make_mode_coherent({0.0, 0.0}, dims);
        CHECK(r.leakage == 0.0);
        CHECK(r.state.amp(0, 0) == Complex{1.0, 0.0});
        CHECK(r.state.norm2() == 1.0);
    }
    SUBCASE("mean occupation of |alpha=1> is 1 (Poisson mean by direct sum)") {
        const Dims dims = make_dims(30);
        const CoherentResult r = make_mode_coherent({1.0, 0.0}, dims);
        double mean = 0.0;
        for (int m = 0; m <= dims.n_max; ++m) {
            for (int n = 0; n <= dims.n_max; ++n) {
                mean += m * std::norm(r.state.amp(m, n));
            }
        }
        CHECK(std::abs(mean - 1.0) <= 1e-10);
    }
    SUBCASE("overlap <alpha,beta|-alpha,-beta> matches exp(-2|alpha|^2-2|beta|^2)") {
        const Dims dims = make_dims(30);
        const Complex alpha{0.8, 0.3}, beta{-0.5, 0.6};
        const StateVector u = make_mode_coherent({alpha, beta}, dims).state;
        const StateVector v = make_mode_coherent({-alpha, -beta}, dims).state;
        const double expected = std::exp(-2.0 * std::norm(alpha) - 2.0 * std::norm(beta));
        const Complex overlap = inner(u, v);
        CHECK(std::abs(overlap - expected) <= 1e-12);
    }
    SUBCASE("amplitude guard rejects |alpha|^2 > n_max/4 unless overridden") {
        const Dims dims = make_dims(8);
        CHECK_THROWS_AS(make_mode_coherent({2.0, 0.0}, dims), TruncationError);
        const CoherentResult r =
            make_mode_coherent({2.0, 0.0}, dims, {1e-10, /*override_guard=*/true});
        CHECK(r.leakage > 1e-10); // reported, not hidden
    }
    SUBCASE("leak budget rejects, larger budget accepts") {
        const Dims dims = make_dims(16);
        const CoherentParams params{{1.8, 0.0}, {0.0, 0.0}};
        CHECK_THROWS_AS(make_mode_coherent(params, dims, {1e-12, false}), TruncationError);
        const CoherentResult r = make_mode_coherent(params, dims, {1e-3, false});
        CHECK(r.leakage <= 1e-3);
        CHECK(std::abs(r.state.norm2() - 1.0) <= 1e-12);
    }
    SUBCASE("composite builder places the motional factor under the qubit label") {
        const Dims dims = make_dims(12);
        const CoherentResult full = make_coherent({0.8, Complex{0.0, 0.5}}, Qubit::up, dims);
        const CoherentResult modes = make_mode_coherent({0.8, Complex{0.0, 0.5}}, dims);
        CHECK(full.leakage == modes.leakage);
        for (int i = 0; i < dims.pair_dim(); ++i) {
            const auto [m, n] = mode_unflatten(i, dims);
            CHECK(full.state.amp({Qubit::up, m, n}) == modes.state.amp(i));
            CHECK(full.state.amp({Qubit::down, m, n}) == Complex{0.0, 0.0});
        }
    }
    SUBCASE("leakage is monotone nonincreasing in n_max") {
        const CoherentParams params{{1.2, 0.4}, {0.9, -0.2}};
        double previous = 1.0;
        for (int n_max : {8, 12, 16, 20, 24}) {
            const CoherentResult r = make_mode_coherent(params, make_dims(n_max), {1.0, true});
            CHECK(r.leakage <= previous + 1e-18);
            previous = r.leakage;
        }
    }
}

TEST_CASE("spin coherent state builder") {
    SUBCASE("zeta = 0 is the lowest-weight state |0>_a|2j>_b") {
        const Dims dims = make_dims(6);
        const StateVector psi = make_su2_coherent({0.0, 5}, dims);
        CHECK(psi.amp(0, 5) == Complex{1.0, 0.0});
        CHECK(psi.norm2() == 1.0);
    }
    SUBCASE("j = 1/2, zeta = -i expands to (|0,1> - i|1,0>)/sqrt(2)") {
        const Dims dims = make_dims(2);
        const StateVector psi = make_su2_coherent({Complex{0.0, -1.0}, 1}, dims);
        const double inv = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(psi.amp(0, 1) - inv) <= 1e-15);
        CHECK(std::abs(psi.amp(1, 0) - Complex{0.0, -inv}) <= 1e-15);
    }
    SUBCASE("<J_z> = j(|zeta|^2-1)/(|zeta|^2+1) by direct summation") {
        const Dims dims = make_dims(12);
        std::mt19937_64 rng(5);
        for (int twice_j : {1, 2, 5, 12}) {
            for (int trial = 0; trial < 4; ++trial) {
                const Complex zeta = 2.0 * test_util::random_amp(rng);
                const StateVector psi = make_su2_coherent({zeta, twice_j}, dims);
                const double j = 0.5 * twice_j;
                double jz = 0.0;
                for (int k = 0; k <= twice_j; ++k) {
                    jz += std::norm(psi.amp(k, twice_j - k)) * (k - j);
                }
                const double z2 = std::norm(zeta);
                CHECK(std::abs(jz - j * (z2 - 1.0) / (z2 + 1.0)) <= 1e-12);
                CHECK(std::abs(psi.norm2() - 1.0) <= 1e-12);
            }
        }
    }
    SUBCASE("2j = 1 spans the analytic two-level ray") {
        const Dims dims = make_dims(4);
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 8; ++trial) {
            const Complex zeta = 1.5 * test_util::random_amp(rng);
            const StateVector psi = make_su2_coherent({zeta, 1}, dims);
            const double phi = std::atan(std::abs(zeta));
            const double chi = std::arg(zeta);
            std::vector<Complex> amps(static_cast<size_t>(dims.pair_dim()));
            amps[static_cast<size_t>(mode_index(0, 1, dims))] = std::cos(phi);
            amps[static_cast<size_t>(mode_index(1, 0, dims))] =
                std::sin(phi) * std::polar(1.0, chi);
            const StateVector two_level(dims, Space::modes, std::move(amps));
            CHECK(std::abs(std::norm(inner(psi, two_level)) - 1.0) <= 1e-12);
        }
    }
    SUBCASE("2j above the cutoff is rejected") {
        CHECK_THROWS_AS(make_su2_coherent({0.5, 7}, make_dims(6)), DimensionError);
        CHECK_THROWS_AS(make_su2_coherent({0.5, 0}, make_dims(6)), DimensionError);
    }
}

TEST_CASE("spin coherent state agrees with the exponential route") {
    // Dictionary check: U(theta)|0,2j> matches zeta = -i tan(theta), and is
    // measurably far from the half-angle reading.
    const Dims dims = make_dims(8);
    for (int twice_j : {1, 2, 4}) {
        for (double theta : {0.3, 0.25 * kPi, kPi / 3.0}) {
            const OperatorMatrix u = beam_splitter_expm_oracle(theta, dims.n_max);
            std::vector<Complex> evolved = u.apply(make_mode_fock(0, twice_j, dims));
            const StateVector from_exponential(dims, Space::modes, std::move(evolved));

            const Complex zeta_full = Complex{0.0, -1.0} * std::tan(theta);
            const StateVector full = make_su2_coherent({zeta_full, twice_j}, dims);
            CHECK(std::norm(inner(from_exponential, full)) >= 1.0 - 1e-12);

            const Complex zeta_half = Complex{0.0, -1.0} * std::tan(0.5 * theta);
            const StateVector half = make_su2_coherent({zeta_half, twice_j}, dims);
            CHECK(std::norm(inner(from_exponential, half)) < 1.0 - 1e-3);
        }
    }
}

TEST_CASE("cat references") {
    SUBCASE("number cat at n = 2 with phi = i is (-|2,0> + |0,2>)/sqrt(2)") {
        const Dims dims = make_dims(4);
        const StateVector cat =
            make_cat_reference(NumberCatParams{2, Complex{0.0, 1.0}}, Sign::plus, dims);
        const double inv = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(cat.amp(2, 0) + inv) <= 1e-15);
        CHECK(std::abs(cat.amp(0, 2) - inv) <= 1e-15);
    }
    SUBCASE("identical branches with sign minus degenerate") {
        const Dims dims = make_dims(8);
        CHECK_THROWS_AS(
            make_cat_reference(CoherentCatParams{{0.0, 0.0}, {0.0, 0.0}, {}}, Sign::minus, dims),
            DegenerateStateError);
        CHECK_THROWS_AS(
            make_cat_reference(NumberCatParams{0, Complex{1.0, 0.0}}, Sign::minus, dims),
            DegenerateStateError);
    }
    SUBCASE("unnormalized |-a,-b> + |a,b> has norm^2 2(1+e^{-2|a|^2-2|b|^2})") {
        const Dims dims = make_dims(30);
        const Complex alpha{1.0, 0.0}, beta{0.7, 0.2};
        const StateVector u = make_mode_coherent({-alpha, -beta}, dims).state;
        const StateVector v = make_mode_coherent({alpha, beta}, dims).state;
        const double norm2 = 2.0 + 2.0 * inner(u, v).real();
        const double expected =
            2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha) - 2.0 * std::norm(beta)));
        CHECK(std::abs(norm2 - expected) <= 1e-10);
    }
    SUBCASE("even spin cat keeps only even transfer amplitudes") {
        const Dims dims = make_dims(6);
        const StateVector cat =
            make_cat_reference(Su2CatParams{Complex{0.3, -0.4}, 5}, Sign::plus, dims);
        for (int k = 1; k <= 5; k += 2) {
            CHECK(std::abs(cat.amp(k, 5 - k)) == 0.0);
        }
        CHECK(std::abs(cat.norm2() - 1.0) <= 1e-12);
    }
    SUBCASE("all cat builders return unit norm") {
        const Dims dims = make_dims(10);
        CHECK(std::abs(make_cat_reference(Su2CatParams{Complex{0.2, 0.9}, 7}, Sign::minus, dims)
                           .norm2() -
                       1.0) <= 1e-12);
        CHECK(std::abs(make_cat_reference(NumberCatParams{3, Complex{0.0, -1.0}}, Sign::plus, dims)
                           .norm2() -
                       1.0) <= 1e-12);
        CHECK(std::abs(make_cat_reference(CoherentCatParams{{0.9, 0.3},
                                                            {Complex{0.0, -0.3},
                                                             Complex{0.0, -0.9}},
                                                            {}},
                                          Sign::plus, dims)
                           .norm2() -
                       1.0) <= 1e-12);
    }
}

TEST_SUITE_END();
