#include "ionsim/hilbert.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace ionsim;

TEST_SUITE_BEGIN("hilbert");

TEST_CASE("annihilation operator entries") {
    SUBCASE("n_max = 1 has the single entry (0,1) = 1") {
        const OperatorMatrix a = make_annihilation(1);
        REQUIRE(a.entries().size() == 1);
        CHECK(a.entries()[0].row == 0);
        CHECK(a.entries()[0].col == 1);
        CHECK(a.entries()[0].value == Complex{1.0, 0.0});
    }
    SUBCASE("n_max = 4 has (2,3) = sqrt(3)") {
        const OperatorMatrix a = make_annihilation(4);
        bool found = false;
        for (const Triplet& t : a.entries()) {
            if (t.row == 2 && t.col == 3) {
                found = true;
                CHECK(t.value.real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
                CHECK(t.value.imag() == 0.0);
            }
        }
        CHECK(found);
    }
    SUBCASE("rejects n_max < 1") {
        CHECK_THROWS_AS(make_annihilation(0), DimensionError);
        CHECK_THROWS_AS(make_annihilation(-3), DimensionError);
    }
}

TEST_CASE("a^dag a reproduces the number operator") {
    const int n_max = 9;
    const OperatorMatrix a = make_annihilation(n_max);
    const OperatorMatrix num = a.adjoint() * a;
    // Structurally diagonal: the sparse product has no off-diagonal entries.
    for (const Triplet& t : num.entries()) {
        CHECK(t.row == t.col);
    }
    for (int m = 0; m <= n_max; ++m) {
        double diag = 0.0;
        for (const Triplet& t : num.entries()) {
            if (t.row == m && t.col == m) diag = t.value.real();
        }
        CHECK(std::abs(diag - m) <= 1e-13);
    }
    CHECK(max_entry_difference(num, make_number(n_max)) <= 1e-13);

    // Same bookkeeping on the b side of the pair space.
    const Dims dims = make_dims(n_max);
    const OperatorMatrix num_b = embed_pair(make_number(n_max), Slot::modeB, dims);
    for (const Triplet& t : num_b.entries()) {
        REQUIRE(t.row == t.col);
        const auto [m, n] = mode_unflatten(t.row, dims);
        (void)m;
        CHECK(t.value == Complex{static_cast<double>(n), 0.0});
    }
}

TEST_CASE("exchange generator ladder action") {
    const Dims dims = make_dims(4);
    const OperatorMatrix k = make_exchange_generator(dims.n_max);

    auto apply_to_fock = [&](int m, int n) {
        std::vector<Complex> x(static_cast<size_t>(dims.pair_dim()));
        x[static_cast<size_t>(mode_index(m, n, dims))] = 1.0;
        return k.apply(x);
    };

    SUBCASE("K|0,0> = 0") {
        const auto y = apply_to_fock(0, 0);
        for (const Complex& v : y) CHECK(std::abs(v) == 0.0);
    }
    SUBCASE("K|0,1> = |1,0>") {
        const auto y = apply_to_fock(0, 1);
        CHECK(y[static_cast<size_t>(mode_index(1, 0, dims))] == Complex{1.0, 0.0});
        double rest = 0.0;
        for (int i = 0; i < dims.pair_dim(); ++i) {
            if (i != mode_index(1, 0, dims)) rest += std::abs(y[static_cast<size_t>(i)]);
        }
        CHECK(rest == 0.0);
    }
    SUBCASE("K|1,1> = sqrt(2)|2,0> + sqrt(2)|0,2>") {
        const auto y = apply_to_fock(1, 1);
        CHECK(std::abs(y[static_cast<size_t>(mode_index(2, 0, dims))] - std::sqrt(2.0)) <= 1e-15);
        CHECK(std::abs(y[static_cast<size_t>(mode_index(0, 2, dims))] - std::sqrt(2.0)) <= 1e-15);
        CHECK(std::abs(y[static_cast<size_t>(mode_index(1, 1, dims))]) == 0.0);
    }
}

TEST_CASE("exchange generator is Hermitian to 1e-15") {
    for (int n_max : {1, 4, 12, 30}) {
        const OperatorMatrix k = make_exchange_generator(n_max);
        CHECK(max_entry_difference(k, k.adjoint()) <= 1e-15);
    }
}

TEST_CASE("exchange generator commutes with total number exactly") {
    const int n_max = 8;
    const Dims dims = make_dims(n_max);
    const OperatorMatrix k = make_exchange_generator(n_max);
    const OperatorMatrix n_total = embed_pair(make_number(n_max), Slot::modeA, dims) +
                                   embed_pair(make_number(n_max), Slot::modeB, dims);
    const OperatorMatrix commutator = k * n_total - n_total * k;
    // Exact zero: products of identical integer sector values cancel bitwise.
    CHECK(commutator.max_abs_entry() == 0.0);
    CHECK(commutator.entries().empty());
}

TEST_CASE("flat index is a bijection") {
    const Dims dims = make_dims(5);
    std::vector<int> hits(static_cast<size_t>(dims.total_dim()), 0);
    for (int q = 0; q < 2; ++q) {
        for (int m = 0; m <= dims.n_max; ++m) {
            for (int n = 0; n <= dims.n_max; ++n) {
                const BasisIndex b{static_cast<Qubit>(q), m, n};
                const int flat = flat_index(b, dims);
                REQUIRE(flat >= 0);
                REQUIRE(flat < dims.total_dim());
                hits[static_cast<size_t>(flat)] += 1;
                const BasisIndex back = unflatten(flat, dims);
                CHECK(back.q == b.q);
                CHECK(back.m == b.m);
                CHECK(back.n == b.n);
            }
        }
    }
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(flat_index({Qubit::down, 0, 6}, dims), DimensionError);
    CHECK_THROWS_AS(unflatten(dims.total_dim(), dims), DimensionError);
}

TEST_CASE("embed lifts operators with identity elsewhere") {
    const Dims dims = make_dims(3);
    SUBCASE("identity on a mode slot embeds to the full identity") {
        const OperatorMatrix lifted = embed(OperatorMatrix::identity(dims.mode_dim()),
                                            Slot::modeA, dims);
        CHECK(max_entry_difference(lifted, OperatorMatrix::identity(dims.total_dim())) == 0.0);
    }
    SUBCASE("sigma_x on the qubit flips |down,m,n> to |up,m,n>") {
        const OperatorMatrix sx = embed(make_pauli_x(), Slot::qubit, dims);
        std::vector<Complex> x(static_cast<size_t>(dims.total_dim()));
        x[static_cast<size_t>(flat_index({Qubit::down, 2, 1}, dims))] = 1.0;
        const auto y = sx.apply(x);
        CHECK(y[static_cast<size_t>(flat_index({Qubit::up, 2, 1}, dims))] == Complex{1.0, 0.0});
        double total = 0.0;
        for (const Complex& v : y) total += std::norm(v);
        CHECK(total == 1.0);
    }
    SUBCASE("exchange generator through modesAB moves |down,0,1> to |down,1,0>") {
        const OperatorMatrix lifted = embed(make_exchange_generator(dims.n_max),
                                            Slot::modesAB, dims);
        std::vector<Complex> x(static_cast<size_t>(dims.total_dim()));
        x[static_cast<size_t>(flat_index({Qubit::down, 0, 1}, dims))] = 1.0;
        const auto y = lifted.apply(x);
        CHECK(y[static_cast<size_t>(flat_index({Qubit::down, 1, 0}, dims))] == Complex{1.0, 0.0});
        CHECK(std::abs(y[static_cast<size_t>(flat_index({Qubit::up, 1, 0}, dims))]) == 0.0);
    }
    SUBCASE("dimension mismatch is rejected") {
        CHECK_THROWS_AS(embed(OperatorMatrix::identity(3), Slot::qubit, dims), DimensionError);
        CHECK_THROWS_AS(embed(OperatorMatrix::identity(2), Slot::modesAB, dims), DimensionError);
    }
}

TEST_CASE("inner products") {
    const Dims dims = make_dims(4);
    std::mt19937_64 rng(11);
    const StateVector psi = test_util::random_state(dims, Space::composite, rng);
    SUBCASE("inner(psi, psi) is the squared norm") {
        const Complex self = inner(psi, psi);
        CHECK(std::abs(self.imag()) <= 1e-16);
        CHECK(self.real() == doctest::Approx(psi.norm2()).epsilon(1e-14));
        CHECK(self.real() >= 0.0);
    }
    SUBCASE("distinct Fock states are orthogonal") {
        std::vector<Complex> a(static_cast<size_t>(dims.pair_dim()));
        std::vector<Complex> b(static_cast<size_t>(dims.pair_dim()));
        a[static_cast<size_t>(mode_index(0, 0, dims))] = 1.0;
        b[static_cast<size_t>(mode_index(1, 0, dims))] = 1.0;
        const StateVector u(dims, Space::modes, std::move(a));
        const StateVector v(dims, Space::modes, std::move(b));
        CHECK(inner(u, v) == Complex{0.0, 0.0});
    }
    SUBCASE("mismatched spaces are rejected") {
        std::vector<Complex> a(static_cast<size_t>(dims.pair_dim()));
        a[0] = 1.0;
        const StateVector v(dims, Space::modes, std::move(a));
        CHECK_THROWS_AS(inner(psi, v), DimensionError);
    }
}

TEST_CASE("triplet storage is deterministically sorted and merged") {
    const OperatorMatrix op(3, 3,
                            {{2, 1, 1.0}, {0, 2, 2.0}, {2, 1, 0.5}, {1, 1, 0.0}, {0, 1, -1.0}});
    REQUIRE(op.entries().size() == 3); // exact zero dropped, duplicate merged
    CHECK(op.entries()[0].row == 0);
    CHECK(op.entries()[0].col == 1);
    CHECK(op.entries()[1].row == 0);
    CHECK(op.entries()[1].col == 2);
    CHECK(op.entries()[2].row == 2);
    CHECK(op.entries()[2].col == 1);
    CHECK(op.entries()[2].value == Complex{1.5, 0.0});
}

TEST_CASE("state vector construction guards") {
    const Dims dims = make_dims(2);
    std::vector<Complex> zero(static_cast<size_t>(dims.pair_dim()));
    CHECK_THROWS_AS(StateVector(dims, Space::modes, zero), InvariantError);
    std::vector<Complex> wrong(3, Complex{1.0, 0.0});
    CHECK_THROWS_AS(StateVector(dims, Space::modes, wrong), DimensionError);
}

TEST_SUITE_END();
