#pragma once

#include <cstdint>

#include "dcop/postprocess.hpp"

namespace dcop {

/// Synthetic two-station temperature setting with correlated gaussian
/// truth and a biased, underdispersive ensemble.
struct SyntheticScenario {
    TrainingSet train;
    EnsembleForecast raw;
    HistoricalRecord history;
};

struct SyntheticOptions {
    int members = 50;
    int training_days = 30;
    int history_days = 30;
    double correlation = 0.8;
};

SyntheticScenario make_synthetic_scenario(std::uint64_t seed, const SyntheticOptions& options = {});

}  // namespace dcop
