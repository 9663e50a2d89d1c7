#include <doctest.h>

#include <algorithm>
#include <random>

#include "../oracle.hpp"
#include "dcop/copula.hpp"
#include "dcop/error.hpp"
#include "dcop/golden.hpp"

using namespace dcop;
using oracle::Frac;

namespace {

DiscreteCopula product(int m, int l) { return reference_copula(ReferenceKind::Product, m, l); }
DiscreteCopula comonotone(int m, int l) { return reference_copula(ReferenceKind::Comonotonicity, m, l); }

StochasticArray identity_array(int m, int l) {
    std::vector<MultiIndex> cells;
    for (int i = 1; i <= m; ++i) cells.emplace_back(static_cast<std::size_t>(l), i);
    return StochasticArray::from_cells(m, l, cells);
}

}  // namespace

TEST_SUITE("copula") {

TEST_CASE("table 1 passes the copula axioms") {
    const auto r = validate_copula(golden::table1());
    CHECK(r.passed());
    CHECK(r.violations.empty());
}

TEST_CASE("D2 violation at the top corner") {
    const auto d = DiscreteCopula::dense(1, 2, {0, 0, 0, Rational(9, 10)});
    const auto r = validate_copula(d);
    REQUIRE(r.count(Axiom::D2) == 1);
    const auto it = std::find_if(r.violations.begin(), r.violations.end(),
                                 [](const Violation& v) { return v.axiom == Axiom::D2; });
    CHECK(it->location == MultiIndex{1, 1});
    CHECK(it->value == Rational(9, 10));
}

TEST_CASE("D3 violations agree with direct cell differencing") {
    // M = 2, L = 2, D(1/2,1/2) = 1 with correct margins.
    const auto value = [](const MultiIndex& i) -> Frac {
        if (i[0] == 0 || i[1] == 0) return 0;
        if (i[0] == 1 && i[1] == 1) return 1;
        if (i[0] == 2) return Frac(i[1], 2);
        return Frac(i[0], 2);
    };
    const auto d = DiscreteCopula::from_function(2, 2, [&](const MultiIndex& i) { return value(i).rational(); });
    const auto r = validate_copula(d);

    std::map<MultiIndex, Frac> expected_negative;
    for (const auto& cell : oracle::grid_points(2, 1, 2)) {
        const Frac vol = oracle::box_volume(value, {cell[0] - 1, cell[1] - 1}, cell);
        if (vol < Frac(0)) expected_negative.emplace(cell, vol);
    }
    // The oracle puts the negative mass off the diagonal: cells (1,2) and (2,1).
    CHECK(expected_negative.size() == 2);
    CHECK(expected_negative.count({1, 2}) == 1);
    CHECK(expected_negative.count({2, 1}) == 1);
    CHECK(oracle::box_volume(value, {1, 1}, {2, 2}) == Frac(1));

    std::map<MultiIndex, Frac> reported;
    for (const auto& v : r.violations) {
        if (v.axiom == Axiom::D3) reported.emplace(v.location, oracle::from_rational(v.value));
    }
    CHECK(reported == expected_negative);
    CHECK(r.count(Axiom::D1) == 0);
    CHECK(r.count(Axiom::D2) == 0);
}

TEST_CASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(DiscreteCopula::dense(2, 2, std::vector<Rational>(8)), DimensionError);
    CHECK_THROWS_AS(DiscreteCopula::dense(0, 2, {}), DimensionError);
    CHECK_THROWS_AS(DiscreteCopula::dense(2, 1, std::vector<Rational>(3)), DimensionError);
    CHECK_THROWS_AS(StochasticArray(2, 2, {{{1, 3}, Rational(1)}}), DimensionError);
    CHECK_THROWS_AS(StochasticArray(2, 2, {{{1, 1, 1}, Rational(1)}}), DimensionError);
}

TEST_CASE("dense budget is enforced") {
    CHECK_THROWS_AS(product(9, 8), BudgetError);
    CHECK(comonotone(9, 8).order() == 9);
    CHECK_FALSE(comonotone(9, 8).is_dense());
}

TEST_CASE("table 2 passes the array axioms") { CHECK(validate_array(golden::table2()).passed()); }

TEST_CASE("all-zero array violates every line sum") {
    const StochasticArray zero(3, 2, {});
    const auto r = validate_array(zero);
    CHECK(r.count(Axiom::A2) == 6);
    CHECK(r.count(Axiom::A1) == 0);
    for (const auto& v : r.violations) CHECK(v.value == Rational(0));
}

TEST_CASE("negative entry is an A1 violation") {
    const StochasticArray a(2, 2, {{{1, 1}, Rational(3, 2)}, {{1, 2}, Rational(-1, 2)},
                                   {{2, 1}, Rational(-1, 2)}, {{2, 2}, Rational(3, 2)}});
    const auto r = validate_array(a);
    CHECK(r.count(Axiom::A1) == 2);
    CHECK(r.count(Axiom::A2) == 0);
}

TEST_CASE("constant array 1/M^(L-1) is stochastic and gives the product copula") {
    for (int m = 1; m <= 4; ++m) {
        for (int l = 2; l <= 3; ++l) {
            std::map<MultiIndex, Rational> entries;
            for (const auto& c : oracle::grid_points(l, 1, m)) entries.emplace(c, Rational(1, oracle::ipow(m, l - 1)));
            const StochasticArray a(m, l, entries);
            CHECK(validate_array(a).passed());
            CHECK(array_to_copula(a) == product(m, l));
        }
    }
}

TEST_CASE("volume examples") {
    const auto t1 = golden::table1();
    CHECK(volume(t1, {0, 0, 0}, {1, 1, 1}) == Rational(1, 12));
    CHECK(volume(t1, {0, 0, 0}, {3, 3, 3}) == Rational(1));
    CHECK(volume(t1, {1, 2, 0}, {1, 2, 0}) == Rational(0));
    CHECK(volume(t1, {2, 1, 3}, {2, 1, 3}) == Rational(0));
    CHECK_THROWS_AS(volume(t1, {0, 0, 0}, {4, 1, 1}), DimensionError);
    CHECK_THROWS_AS(volume(t1, {2, 0, 0}, {1, 1, 1}), DimensionError);
    CHECK_THROWS_AS(volume(t1, {0, 0}, {1, 1}), DimensionError);
}

TEST_CASE("volume matches corner enumeration on table 1") {
    const auto t1 = golden::table1();
    const auto f = [&](const MultiIndex& i) { return oracle::from_rational(t1.value(i)); };
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int k = 0; k < 200; ++k) {
        MultiIndex lo(3);
        MultiIndex hi(3);
        for (int a = 0; a < 3; ++a) {
            const int x = pick(rng);
            const int y = pick(rng);
            lo[a] = std::min(x, y);
            hi[a] = std::max(x, y);
        }
        CHECK(oracle::from_rational(volume(t1, lo, hi)) == oracle::box_volume(f, lo, hi));
    }
}

TEST_CASE("table 2 converts to table 1 and back") {
    CHECK(array_to_copula(golden::table2()) == golden::table1());
    CHECK(copula_to_array(golden::table1()) == golden::table2());
    CHECK(copula_to_array(golden::table1()).entry({1, 1, 1}) == Rational(1, 4));
}

TEST_CASE("identity permutation array gives the comonotonicity copula") {
    for (int m = 1; m <= 4; ++m) {
        const auto d = array_to_copula(identity_array(m, 3));
        CHECK(d == comonotone(m, 3));
        for (const auto& i : oracle::grid_points(3, 0, m)) {
            CHECK(d.value(i) == Rational(*std::min_element(i.begin(), i.end()), m));
        }
        CHECK(copula_to_array(comonotone(m, 3)) == identity_array(m, 3));
    }
}

TEST_CASE("product copula on I_2^2 has all entries 1/2") {
    const auto a = copula_to_array(product(2, 2));
    CHECK(a.entries().size() == 4);
    for (const auto& [cell, v] : a.entries()) CHECK(v == Rational(1, 2));
}

TEST_CASE("invalid inputs are rejected before conversion") {
    CHECK_THROWS_AS(array_to_copula(StochasticArray(2, 2, {})), ValidationError);
    const auto bad = DiscreteCopula::dense(1, 2, {0, 0, 0, Rational(9, 10)});
    CHECK_THROWS_AS(copula_to_array(bad), ValidationError);
}

TEST_CASE("irreducibility examples") {
    CHECK_FALSE(is_irreducible(golden::table1()));
    CHECK(is_irreducible(comonotone(3, 3)));
    CHECK(is_irreducible(comonotone(5, 2).to_dense()));
    CHECK_FALSE(is_irreducible(product(2, 2)));
    CHECK(product(2, 2).value({1, 1}) == Rational(1, 4));
}

TEST_CASE("reference copulas") {
    CHECK(product(3, 2).value({1, 2}) == Rational(2, 9));
    CHECK(comonotone(3, 3).value({1, 2, 3}) == Rational(1, 3));
    CHECK(validate_copula(product(3, 2)).passed());
    CHECK(validate_copula(comonotone(3, 3).to_dense()).passed());
    for (int m = 1; m <= 6; ++m) CHECK(is_irreducible(comonotone(m, 4)));
}

TEST_CASE("permutation tuples") {
    const auto t = permutation_tuples(identity_array(3, 2));
    CHECK(t == std::vector<MultiIndex>{{1, 1}, {2, 2}, {3, 3}});
    CHECK_THROWS_AS(permutation_tuples(golden::table2()), ValidationError);

    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const int m = 1 + static_cast<int>(rng() % 7);
        const int l = 2 + static_cast<int>(rng() % 3);
        const auto cells = oracle::random_permutation_cells(m, l, rng);
        const auto tuples = permutation_tuples(StochasticArray::from_cells(m, l, cells));
        CHECK(tuples.size() == static_cast<std::size_t>(m));
        for (int axis = 0; axis < l; ++axis) {
            std::vector<int> proj;
            for (const auto& c : tuples) proj.push_back(c[axis]);
            std::sort(proj.begin(), proj.end());
            for (int i = 0; i < m; ++i) CHECK(proj[i] == i + 1);
        }
    }
}

TEST_CASE("from_tuples rejects non-permutations") {
    CHECK_THROWS_AS(DiscreteCopula::from_tuples(2, 2, {{1, 1}, {1, 2}}), ValidationError);
    CHECK_THROWS_AS(DiscreteCopula::from_tuples(2, 2, {{1, 1}}), ValidationError);
    CHECK_THROWS_AS(DiscreteCopula::from_tuples(2, 2, {{1, 1}, {2, 3}}), DimensionError);
}

TEST_CASE("sparse and dense evaluation agree") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 40; ++k) {
        const int m = 1 + static_cast<int>(rng() % 6);
        const int l = 2 + static_cast<int>(rng() % 2);
        const auto cells = oracle::random_permutation_cells(m, l, rng);
        const auto sparse = DiscreteCopula::from_tuples(m, l, cells);
        const auto dense = sparse.to_dense();
        oracle::ArrayMap a;
        for (const auto& c : cells) a[c] = 1;
        for (const auto& i : oracle::grid_points(l, 0, m)) {
            CHECK(sparse.value(i) == dense.value(i));
            CHECK(oracle::from_rational(sparse.value(i)) == oracle::copula_value_from_array(a, m, i));
        }
        CHECK(sparse == dense);
        const MultiIndex lo(static_cast<std::size_t>(l), 0);
        const MultiIndex hi(static_cast<std::size_t>(l), m);
        CHECK(volume(sparse, lo, hi) == Rational(1));
    }
}

TEST_CASE("property: random stochastic arrays round trip and satisfy the cell identities") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int m = 1 + static_cast<int>(rng() % 5);
        const int l = 2 + static_cast<int>(rng() % 2);
        const auto a_oracle = oracle::random_stochastic_array(m, l, 5, rng);
        const StochasticArray a(m, l, oracle::to_entries(a_oracle));
        REQUIRE(validate_array(a).passed());

        const auto d = array_to_copula(a);
        CHECK(validate_copula(d).passed());
        for (const auto& i : oracle::grid_points(l, 0, m)) {
            CHECK(oracle::from_rational(d.value(i)) == oracle::copula_value_from_array(a_oracle, m, i));
        }
        CHECK(copula_to_array(d) == a);
        CHECK(array_to_copula(copula_to_array(d)) == d);

        // M * cell volume = entry.
        for (const auto& cell : oracle::grid_points(l, 1, m)) {
            MultiIndex lo = cell;
            for (auto& x : lo) --x;
            CHECK(Rational(m) * volume(d, lo, cell) == a.entry(cell));
        }

        // Summing entries over all axes but one up to level i gives i.
        for (int axis = 0; axis < l; ++axis) {
            for (int level = 0; level <= m; ++level) {
                Rational s(0);
                for (const auto& [cell, v] : a.entries()) {
                    if (cell[axis] <= level) s += v;
                }
                MultiIndex top(static_cast<std::size_t>(l), m);
                top[axis] = level;
                CHECK(s == Rational(level));
                CHECK(Rational(m) * d.value(top) == Rational(level));
            }
        }

        // Monotone along every axis.
        for (const auto& i : oracle::grid_points(l, 0, m)) {
            for (int axis = 0; axis < l; ++axis) {
                if (i[axis] == m) continue;
                MultiIndex j = i;
                ++j[axis];
                CHECK(d.value(i) <= d.value(j));
            }
        }

        CHECK(is_irreducible(d) == a.is_zero_one());
    }
}

}
