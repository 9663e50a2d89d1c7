#include "dcop/demo.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include <boost/random/normal_distribution.hpp>

#include "dcop/error.hpp"
#include "dcop/random.hpp"

namespace dcop {

namespace {

const std::vector<std::string> kStations{"T2M:berlin:24h", "T2M:hamburg:24h"};
constexpr std::array<double, 2> kClimateMean{14.0, 12.5};
constexpr double kClimateSd = 4.0;
constexpr std::array<double, 2> kBias{1.5, -0.8};
constexpr double kForecastErrorSd = 1.8;
constexpr double kMemberSd = 0.6;

class Draws {
public:
    Draws(std::uint64_t seed, std::string_view label, double correlation)
        : rng_(keyed_stream(seed, label)), rho_(correlation) {}

    // Pair of standard normals with correlation rho.
    std::array<double, 2> pair() {
        const double z1 = normal_(rng_);
        const double z2 = normal_(rng_);
        return {z1, rho_ * z1 + std::sqrt(1.0 - rho_ * rho_) * z2};
    }

private:
    std::mt19937_64 rng_;
    boost::random::normal_distribution<double> normal_;
    double rho_;
};

std::string day_label(int day) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "D%04d", day + 1);
    return buf;
}

struct Day {
    std::vector<double> truth;
    EnsembleForecast forecast;
};

Day simulate_day(Draws& draws, int members) {
    const auto t = draws.pair();
    const auto e = draws.pair();
    std::vector<double> truth(2);
    std::vector<double> centre(2);
    for (std::size_t l = 0; l < 2; ++l) {
        truth[l] = kClimateMean[l] + kClimateSd * t[l];
        centre[l] = truth[l] + kBias[l] + kForecastErrorSd * e[l];
    }
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(members));
    for (int m = 0; m < members; ++m) {
        const auto z = draws.pair();
        rows.push_back({centre[0] + kMemberSd * z[0], centre[1] + kMemberSd * z[1]});
    }
    return {std::move(truth), EnsembleForecast(std::move(rows), kStations)};
}

}  // namespace

SyntheticScenario make_synthetic_scenario(std::uint64_t seed, const SyntheticOptions& options) {
    if (options.members < 2 || options.training_days < 5 || options.history_days < 1) {
        throw ValidationError("synthetic scenario needs >= 2 members, >= 5 training days, >= 1 history day");
    }
    if (!(options.correlation > -1.0 && options.correlation < 1.0)) {
        throw ValidationError("correlation must lie in (-1, 1)");
    }

    Draws train_draws(seed, "synthetic:train", options.correlation);
    std::vector<TrainingCase> cases;
    for (int d = 0; d < options.training_days; ++d) {
        auto day = simulate_day(train_draws, options.members);
        cases.push_back(TrainingCase{day_label(d), std::move(day.forecast), std::move(day.truth)});
    }

    Draws raw_draws(seed, "synthetic:raw", options.correlation);
    auto today = simulate_day(raw_draws, options.members);

    Draws hist_draws(seed, "synthetic:history", options.correlation);
    std::vector<std::vector<double>> obs;
    std::vector<std::string> dates;
    for (int d = 0; d < options.history_days; ++d) {
        const auto t = hist_draws.pair();
        obs.push_back({kClimateMean[0] + kClimateSd * t[0], kClimateMean[1] + kClimateSd * t[1]});
        dates.push_back(day_label(d));
    }

    return SyntheticScenario{TrainingSet(std::move(cases)), std::move(today.forecast),
                             HistoricalRecord(std::move(obs), kStations, std::move(dates))};
}

}  // namespace dcop
