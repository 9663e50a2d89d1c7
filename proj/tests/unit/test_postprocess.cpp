#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "../oracle.hpp"
#include "dcop/demo.hpp"
#include "dcop/error.hpp"
#include "dcop/postprocess.hpp"

using namespace dcop;

namespace {

std::vector<std::string> ids(int l) {
    std::vector<std::string> out;
    for (int k = 0; k < l; ++k) out.push_back("T2M:loc" + std::to_string(k) + ":24h");
    return out;
}

EnsembleForecast random_ensemble(int m, int l, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(l)));
    for (auto& r : rows) {
        for (auto& x : r) x = z(rng);
    }
    return EnsembleForecast(rows, ids(l));
}

std::vector<std::vector<double>> sorted_columns(const EnsembleForecast& e) {
    std::vector<std::vector<double>> out;
    for (int axis = 0; axis < e.dimension(); ++axis) {
        auto c = e.margin(axis);
        std::sort(c.begin(), c.end());
        out.push_back(c);
    }
    return out;
}

TrainingSet training(const std::vector<std::vector<double>>& members_per_day, const std::vector<double>& obs) {
    std::vector<TrainingCase> cases;
    for (std::size_t d = 0; d < obs.size(); ++d) {
        std::vector<std::vector<double>> rows;
        for (double x : members_per_day[d]) rows.push_back({x});
        cases.push_back({"d" + std::to_string(d), EnsembleForecast(rows, {"T2M:x:24h"}), {obs[d]}});
    }
    return TrainingSet(cases);
}

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

TEST_SUITE("postprocess") {

TEST_CASE("ensemble shape") {
    CHECK_THROWS_AS(EnsembleForecast({{1.0, 2.0}, {1.0}}, ids(2)), DimensionError);
    CHECK_THROWS_AS(EnsembleForecast({}, ids(2)), DimensionError);
    const EnsembleForecast e({{1, 2}, {3, 4}, {5, 6}}, ids(2));
    CHECK(e.margin(1) == std::vector<double>{2, 4, 6});
    CHECK(e.axis_of("T2M:loc1:24h") == 1);
    CHECK_THROWS_AS((void)e.axis_of("nope"), DimensionError);
    CHECK(EnsembleForecast::from_columns({{1, 3, 5}, {2, 4, 6}}, ids(2)) == e);
}

TEST_CASE("EMOS-lite: perfect fit") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> days;
    std::vector<double> obs;
    for (int d = 0; d < 10; ++d) {
        std::vector<double> m(8);
        for (auto& x : m) x = 10 + 3 * z(rng);
        days.push_back(m);
        obs.push_back(mean(m));
    }
    const auto model = fit_emoslite(training(days, obs), "T2M:x:24h");
    CHECK(model.a == 0.0);
    CHECK(model.b == 1.0);
    CHECK_FALSE(model.degenerate);

    for (auto& o : obs) o += 2.0;
    const auto shifted = fit_emoslite(training(days, obs), "T2M:x:24h");
    CHECK(shifted.a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(shifted.b == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("EMOS-lite: recovers a linear truth") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    std::vector<std::vector<double>> days;
    std::vector<double> obs;
    const double a = 1.5;
    const double b = 0.8;
    for (int d = 0; d < 1000; ++d) {
        const double centre = 5 * z(rng);
        std::vector<double> m(20);
        for (auto& x : m) x = centre + 0.7 * z(rng);
        days.push_back(m);
        obs.push_back(a + b * mean(m) + 1.2 * z(rng));
    }
    const auto model = fit_emoslite(training(days, obs), "T2M:x:24h");
    CHECK(std::abs(model.a - a) < 0.1);
    CHECK(std::abs(model.b - b) < 0.1);
    CHECK(model.d >= 0.0);
    const auto dist = model.predict(days.front());
    const auto& g = std::get<Gaussian>(dist.law());
    CHECK(g.sd > 0.0);
}

TEST_CASE("EMOS-lite: degenerate ensemble means") {
    std::vector<std::vector<double>> days(6, std::vector<double>{4.0, 6.0});
    const std::vector<double> obs{5, 6, 7, 5, 6, 7};
    const auto model = fit_emoslite(training(days, obs), "T2M:x:24h");
    CHECK(model.degenerate);
    CHECK(model.b == 1.0);
    CHECK(model.a == doctest::Approx(1.0));
    CHECK(model.c == doctest::Approx(2.0 / 3.0));
    CHECK(model.d == 0.0);
}

TEST_CASE("EMOS-lite: variance floor and training size") {
    std::vector<std::vector<double>> days;
    std::vector<double> obs;
    for (int d = 0; d < 6; ++d) {
        days.push_back({1.0 * d, 1.0 * d});
        obs.push_back(1.0 * d);
    }
    const auto model = fit_emoslite(training(days, obs), "T2M:x:24h");
    const auto& g = std::get<Gaussian>(model.predict({3.0, 3.0}).law());
    CHECK(g.sd == doctest::Approx(std::sqrt(EmosLiteModel::variance_floor)));
    days.pop_back();
    days.pop_back();
    obs.resize(4);
    CHECK_THROWS_AS(fit_emoslite(training(days, obs), "T2M:x:24h"), ValidationError);
}

TEST_CASE("quantize examples") {
    CHECK(quantize(PredictiveDistribution::empirical({30, 10, 20}), 3) == std::vector<double>{10, 20, 30});
    CHECK(quantize(PredictiveDistribution::gaussian(0, 1), 1) == std::vector<double>{0.0});
    const auto q = quantize(PredictiveDistribution::gaussian(0, 1), 3);
    CHECK(q[0] == doctest::Approx(-0.6745).epsilon(1e-4));
    CHECK(q[1] == doctest::Approx(0.0));
    CHECK(q[2] == doctest::Approx(0.6745).epsilon(1e-4));
    CHECK_THROWS_AS(quantize(PredictiveDistribution::gaussian(0, 1), 0), ValidationError);
}

TEST_CASE("empirical quantile is the left-continuous inverse") {
    const auto d = PredictiveDistribution::empirical({1, 2, 3, 4});
    // F jumps by 1/4 at each value; q(p) = min{x : F(x) >= p}.
    CHECK(d.quantile(1, 4) == 1);
    CHECK(d.quantile(1, 5) == 1);
    CHECK(d.quantile(2, 5) == 2);
    CHECK(d.quantile(1, 2) == 2);
    CHECK(d.quantile(3, 5) == 3);
    CHECK(d.quantile(4, 5) == 4);
    CHECK(d.quantile(0.26) == 2);
    CHECK_THROWS_AS((void)d.quantile(0.0), ValidationError);
    CHECK_THROWS_AS((void)d.quantile(1, 1), ValidationError);
    // Passthrough of M values quantized at M reproduces the sorted values.
    std::mt19937_64 rng(4);
    for (int m = 1; m <= 60; ++m) {
        std::vector<double> v(static_cast<std::size_t>(m));
        for (auto& x : v) x = std::normal_distribution<double>()(rng);
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        CHECK(quantize(PredictiveDistribution::passthrough(v), m) == sorted);
    }
}

TEST_CASE("ECC examples") {
    const EnsembleForecast raw({{3, 3}, {1, 1}, {2, 2}}, ids(2));
    const auto out = ecc(raw, {{10, 20, 30}, {0.1, 0.2, 0.3}}, TiePolicy::error());
    CHECK(out.members() == std::vector<std::vector<double>>{{30, 0.3}, {10, 0.1}, {20, 0.2}});

    const EnsembleForecast como({{1, 5}, {2, 6}, {3, 7}, {4, 8}}, ids(2));
    const auto oc = ecc(como, {{-1, 0, 1, 2}, {7, 8, 9, 10}}, TiePolicy::error());
    CHECK(oc.members() == std::vector<std::vector<double>>{{-1, 7}, {0, 8}, {1, 9}, {2, 10}});
}

TEST_CASE("ECC input errors") {
    const EnsembleForecast raw({{3, 3}, {1, 1}, {2, 2}}, ids(2));
    CHECK_THROWS_AS(ecc(raw, {{10, 20}, {0.1, 0.2, 0.3}}, TiePolicy::error()), DimensionError);
    CHECK_THROWS_AS(ecc(raw, {{10, 20, 30}}, TiePolicy::error()), DimensionError);
    CHECK_THROWS_AS(ecc(raw, {{30, 20, 10}, {0.1, 0.2, 0.3}}, TiePolicy::error()), ValidationError);
    const EnsembleForecast tied({{1, 3}, {1, 1}, {2, 2}}, ids(2));
    CHECK_THROWS_AS(ecc(tied, {{10, 20, 30}, {0.1, 0.2, 0.3}}, TiePolicy::error()), TieError);
    CHECK_NOTHROW(ecc(tied, {{10, 20, 30}, {0.1, 0.2, 0.3}}, TiePolicy::random(1)));
}

TEST_CASE("ECC is the identity with the raw margins as samples") {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 20; ++k) {
        const auto raw = random_ensemble(30, 4, rng);
        CHECK(ecc(raw, sorted_columns(raw), TiePolicy::error()) == raw);
    }
}

TEST_CASE("individually postprocessed baseline") {
    const auto one = individually_postprocessed({{4.0}, {5.0}}, ids(2), 9);
    CHECK(one.members() == std::vector<std::vector<double>>{{4.0, 5.0}});

    std::vector<double> s(50);
    for (int i = 0; i < 50; ++i) s[i] = i;
    const std::vector<std::string> two{"T2M:berlin:24h", "T2M:hamburg:24h"};
    const auto e = individually_postprocessed({s, s}, two, 42);
    CHECK(individually_postprocessed({s, s}, two, 42) == e);
    CHECK(individually_postprocessed({s, s}, two, 42, Parallelism{4}) == e);
    const double rho = spearman_matrix(e.as_sample())[0][1];
    CHECK(rho == doctest::Approx(-7158.0 / 124950.0).epsilon(1e-12));
    CHECK(std::abs(rho) < 0.5);
    for (const auto& col : sorted_columns(e)) CHECK(col == s);
}

TEST_CASE("Schaake examples") {
    const HistoricalRecord hist({{2, 20}, {1, 10}}, ids(2));
    const auto out = schaake_shuffle(hist, {PredictiveDistribution::empirical({5, 6}), PredictiveDistribution::empirical({50, 60})},
                                     2, TiePolicy::error());
    CHECK(out.members() == std::vector<std::vector<double>>{{6, 60}, {5, 50}});

    const HistoricalRecord como({{1, 1, 1}, {2, 3, 4}, {3, 5, 7}, {4, 6, 9}, {5, 8, 10}}, ids(3));
    const auto oc = schaake_shuffle(como,
                                    {PredictiveDistribution::gaussian(0, 1), PredictiveDistribution::gaussian(10, 2),
                                     PredictiveDistribution::empirical({3, 1, 2})},
                                    5, TiePolicy::error());
    // The empirical margin quantizes with repeats, so comonotone means nondecreasing.
    for (int axis = 0; axis < 3; ++axis) {
        const auto col = oc.margin(axis);
        CHECK(std::is_sorted(col.begin(), col.end()));
    }
    CHECK(oc.margin(2) == std::vector<double>{1, 1, 2, 2, 3});

    CHECK_THROWS_AS(schaake_shuffle(hist, {PredictiveDistribution::gaussian(0, 1), PredictiveDistribution::gaussian(0, 1)},
                                    3, TiePolicy::error()),
                    DimensionError);
    CHECK_THROWS_AS(HistoricalRecord({{1, 2}, {3}}, ids(2)), DimensionError);
}

TEST_CASE("property: Schaake output inherits historical ranks") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 40);
        const int l = 1 + static_cast<int>(rng() % 4);
        const auto h = random_ensemble(n, l, rng);
        const HistoricalRecord hist(h.members(), h.margin_ids());
        std::vector<PredictiveDistribution> dists;
        for (int axis = 0; axis < l; ++axis) dists.push_back(PredictiveDistribution::gaussian(axis * 3.0, 1.0 + axis));
        const auto out = schaake_shuffle(hist, dists, n, TiePolicy::error());
        CHECK(out.size() == n);
        for (int axis = 0; axis < l; ++axis) {
            CHECK(oracle::count_ranks(out.margin(axis)) == oracle::count_ranks(h.margin(axis)));
        }
        CHECK(schaake_shuffle(hist, dists, n, TiePolicy::error(), Parallelism{3}) == out);
    }
}

TEST_CASE("verify examples") {
    std::mt19937_64 rng(12);
    const auto raw = random_ensemble(20, 3, rng);
    const auto same = verify_dependence(raw, raw, TiePolicy::error());
    CHECK(same.copulas_equal);
    CHECK(same.max_abs_spearman_diff == 0.0);
    CHECK(same.margin_multiset_equal);

    std::vector<std::vector<double>> samples;
    for (int axis = 0; axis < 3; ++axis) samples.push_back(quantize(PredictiveDistribution::gaussian(axis, 2.0), 20));
    const auto out = ecc(raw, samples, TiePolicy::error());
    const auto r = verify_dependence(raw, out, TiePolicy::error(), samples);
    CHECK(r.copulas_equal);
    CHECK(r.max_abs_spearman_diff == 0.0);
    CHECK(r.margin_multiset_equal);
    CHECK_FALSE(verify_dependence(raw, out, TiePolicy::error()).margin_multiset_equal);

    const auto ind = individually_postprocessed(samples, raw.margin_ids(), 5);
    const auto ri = verify_dependence(raw, ind, TiePolicy::error(), samples);
    CHECK_FALSE(ri.copulas_equal);
    CHECK(ri.margin_multiset_equal);
    CHECK(ri.max_abs_spearman_diff > 0.0);

    CHECK_THROWS_AS(verify_dependence(raw, random_ensemble(19, 3, rng), TiePolicy::error()), DimensionError);
}

TEST_CASE("property: ECC invariants on random ensembles") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + static_cast<int>(rng() % 60);
        const int l = 2 + static_cast<int>(rng() % 5);
        const auto raw = random_ensemble(m, l, rng);
        std::vector<std::vector<double>> samples;
        for (int axis = 0; axis < l; ++axis) {
            samples.push_back(quantize(PredictiveDistribution::gaussian(rng() % 10, 1.0 + axis), m));
        }
        const auto out = ecc(raw, samples, TiePolicy::error());
        for (int axis = 0; axis < l; ++axis) {
            CHECK(oracle::count_ranks(out.margin(axis)) == oracle::count_ranks(raw.margin(axis)));
        }
        CHECK(sorted_columns(out) == samples);
        CHECK(permutation_array_of(out.as_sample()) == permutation_array_of(raw.as_sample()));
        CHECK(ecc(raw, samples, TiePolicy::error(), Parallelism{4}) == out);
    }
}

TEST_CASE("parallel_for visits every index once and forwards exceptions") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), Parallelism{4}, [&](std::size_t k) { hits[k] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10, Parallelism{3}, [](std::size_t k) {
                        if (k == 7) throw ValidationError("boom");
                    }),
                    ValidationError);
}

TEST_CASE("synthetic scenario is reproducible") {
    const auto a = make_synthetic_scenario(5);
    const auto b = make_synthetic_scenario(5);
    CHECK(a.raw == b.raw);
    CHECK(a.history.observations() == b.history.observations());
    CHECK(a.train.cases().size() == 30);
    CHECK(a.raw.size() == 50);
    CHECK(a.raw.dimension() == 2);
    CHECK_FALSE(make_synthetic_scenario(6).raw == a.raw);
    // The raw ensemble carries positive inter-station dependence.
    CHECK(spearman_matrix(a.raw.as_sample())[0][1] > 0.3);
}

}
