#include "dcop/golden.hpp"

#include <array>

#include "dcop/error.hpp"
#include "dcop/io.hpp"

#include <json.hpp>

namespace dcop::golden {

namespace {

// Values in twelfths, laid out [i1][i3][i2] as in the printed table.
constexpr std::array<std::array<std::array<int, 4>, 4>, 4> kTable1Twelfths{{
    {{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}},
    {{{0, 0, 0, 0}, {0, 1, 2, 2}, {0, 1, 2, 3}, {0, 1, 2, 4}}},
    {{{0, 0, 0, 0}, {0, 1, 3, 3}, {0, 2, 4, 6}, {0, 3, 5, 8}}},
    {{{0, 0, 0, 0}, {0, 1, 4, 4}, {0, 3, 6, 8}, {0, 4, 8, 12}}},
}};

// Entries in quarters, laid out [i1-1][i3-1][i2-1].
constexpr std::array<std::array<std::array<int, 3>, 3>, 3> kTable2Quarters{{
    {{{1, 1, 0}, {0, 0, 1}, {0, 0, 1}}},
    {{{0, 1, 0}, {1, 0, 1}, {1, 0, 0}}},
    {{{0, 1, 0}, {1, 0, 0}, {0, 1, 1}}},
}};

// Reference extension in thirds, laid out [i1][i3][i2].
constexpr std::array<std::array<std::array<int, 4>, 4>, 4> kTable3Thirds{{
    {{{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}},
    {{{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 1, 1, 1}, {0, 1, 1, 1}}},
    {{{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 1, 1, 1}, {0, 1, 2, 2}}},
    {{{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 1, 1, 2}, {0, 1, 2, 3}}},
}};

}  // namespace

DiscreteCopula table1() {
    return DiscreteCopula::from_function(3, 3, [](const MultiIndex& i) {
        return Rational(kTable1Twelfths[i[0]][i[2]][i[1]], 12);
    });
}

StochasticArray table2() {
    std::map<MultiIndex, Rational> entries;
    for (int i1 = 1; i1 <= 3; ++i1) {
        for (int i2 = 1; i2 <= 3; ++i2) {
            for (int i3 = 1; i3 <= 3; ++i3) {
                const int q = kTable2Quarters[i1 - 1][i3 - 1][i2 - 1];
                if (q != 0) entries.emplace(MultiIndex{i1, i2, i3}, Rational(q, 4));
            }
        }
    }
    return StochasticArray(3, 3, std::move(entries));
}

FiniteJointDistribution example4_joint() {
    return FiniteJointDistribution(3, {{1, 0, 1}, {2, 1, 2}, {3, 1, 1}},
                                   {Rational(1, 3), Rational(1, 3), Rational(1, 3)});
}

DiscreteSubcopula example4_subcopula() {
    std::vector<std::vector<int>> grids{{0, 1, 2, 3}, {0, 1, 3}, {0, 2, 3}};
    const Shape shape({4, 3, 3});
    std::vector<Rational> values(shape.size(), Rational(0));
    MultiIndex p(3, 0);
    do {
        const int i1 = p[0];
        const int i2 = grids[1][static_cast<std::size_t>(p[1])];
        const int i3 = grids[2][static_cast<std::size_t>(p[2])];
        values[shape.offset(p)] = Rational(kTable3Thirds[i1][i3][i2], 3);
    } while (shape.next(p));
    return DiscreteSubcopula(3, std::move(grids), std::move(values));
}

DiscreteCopula example4_reference_extension() {
    return DiscreteCopula::from_function(3, 3, [](const MultiIndex& i) {
        return Rational(kTable3Thirds[i[0]][i[2]][i[1]], 3);
    });
}

std::string emit_golden(std::string_view name) {
    if (name == "table1") return serialize(table1());
    if (name == "table2") return serialize(table2());
    if (name == "example4") {
        using nlohmann::json;
        const auto sub = example4_subcopula();
        json out;
        out["joint"] = json::parse(serialize(example4_joint()));
        out["subcopula"] = json::parse(serialize(sub));
        out["extension"] = json::parse(serialize(extend(sub)));
        out["reference_extension"] = json::parse(serialize(example4_reference_extension()));
        return out.dump(2) + "\n";
    }
    throw ParseError("unknown golden object '" + std::string(name) + "'");
}

}  // namespace dcop::golden
