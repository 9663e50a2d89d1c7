#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dcop/empirical.hpp"

namespace dcop {

/// M members x L margins. Margin ids conventionally read "var:loc:lead".
class EnsembleForecast {
public:
    EnsembleForecast(std::vector<std::vector<double>> members, std::vector<std::string> margin_ids);

    [[nodiscard]] int size() const { return static_cast<int>(members_.size()); }
    [[nodiscard]] int dimension() const { return static_cast<int>(margin_ids_.size()); }
    [[nodiscard]] const std::vector<std::vector<double>>& members() const { return members_; }
    [[nodiscard]] const std::vector<std::string>& margin_ids() const { return margin_ids_; }
    [[nodiscard]] std::vector<double> margin(int axis) const;
    [[nodiscard]] int axis_of(const std::string& margin_id) const;

    [[nodiscard]] SampleSet as_sample() const { return SampleSet(members_, margin_ids_); }

    /// Builds the member table from per-margin columns.
    static EnsembleForecast from_columns(const std::vector<std::vector<double>>& columns,
                                         std::vector<std::string> margin_ids);

    friend bool operator==(const EnsembleForecast&, const EnsembleForecast&) = default;

private:
    std::vector<std::vector<double>> members_;
    std::vector<std::string> margin_ids_;
};

struct Gaussian {
    double mean;
    double sd;
};

/// Empirical law of `values` (kept sorted). `passthrough` marks the raw
/// ensemble margin used unchanged.
struct Empirical {
    std::vector<double> values;
    bool passthrough = false;
};

/// Univariate predictive law, accessed through its quantile function.
class PredictiveDistribution {
public:
    static PredictiveDistribution gaussian(double mean, double sd);
    static PredictiveDistribution empirical(std::vector<double> values);
    static PredictiveDistribution passthrough(std::vector<double> raw_margin);

    [[nodiscard]] const std::variant<Gaussian, Empirical>& law() const { return law_; }

    /// q(p) for 0 < p < 1. Empirical laws use the left-continuous inverse
    /// q(p) = min{x : F(x) >= p}.
    [[nodiscard]] double quantile(double p) const;
    /// q(num/den), exact index arithmetic for empirical laws.
    [[nodiscard]] double quantile(std::int64_t num, std::int64_t den) const;

private:
    explicit PredictiveDistribution(std::variant<Gaussian, Empirical> law) : law_(std::move(law)) {}

    std::variant<Gaussian, Empirical> law_;
};

/// One training date: the forecast issued for it and the verifying observation.
struct TrainingCase {
    std::string date;
    EnsembleForecast forecast;
    std::vector<double> observation;
};

/// Sliding-window training data; all cases share margin ids.
class TrainingSet {
public:
    explicit TrainingSet(std::vector<TrainingCase> cases);

    [[nodiscard]] const std::vector<TrainingCase>& cases() const { return cases_; }
    [[nodiscard]] const std::vector<std::string>& margin_ids() const;

private:
    std::vector<TrainingCase> cases_;
};

/// Gaussian regression model: mean a + b * ens_mean, variance
/// max(c + d * ens_var, variance_floor).
struct EmosLiteModel {
    double a = 0.0;
    double b = 1.0;
    double c = 0.0;
    double d = 0.0;
    bool degenerate = false;

    static constexpr double variance_floor = 1e-8;

    [[nodiscard]] PredictiveDistribution predict(const std::vector<double>& ensemble_margin) const;
};

/// Least squares of observation on ensemble mean for (a, b), then of squared
/// residuals on ensemble variance for (c, d) with d clipped to >= 0.
/// A zero-variance ensemble mean falls back to b = 1, a = mean bias, c =
/// residual variance. Needs at least 5 cases.
EmosLiteModel fit_emoslite(const TrainingSet& train, const std::string& margin_id);

/// x_m = q(m / (M+1)) for m = 1..M, nondecreasing.
std::vector<double> quantize(const PredictiveDistribution& dist, int size);

/// Margins are independent and may be run on several threads; the result is
/// identical for any thread count.
struct Parallelism {
    unsigned threads = 1;
};

/// Ensemble copula coupling: member m of margin l receives the sigma_l(m)-th
/// smallest value of samples[l], sigma_l the raw ranks.
EnsembleForecast ecc(const EnsembleForecast& raw, const std::vector<std::vector<double>>& samples,
                     const TiePolicy& policy, Parallelism par = {});

/// Each margin's sample under an independent permutation keyed by
/// (seed, margin id): same margins as ECC, dependence discarded.
EnsembleForecast individually_postprocessed(const std::vector<std::vector<double>>& samples,
                                            const std::vector<std::string>& margin_ids,
                                            std::uint64_t seed, Parallelism par = {});

/// N historical observation vectors sharing verification dates.
class HistoricalRecord {
public:
    HistoricalRecord(std::vector<std::vector<double>> observations, std::vector<std::string> margin_ids,
                     std::vector<std::string> dates = {});

    [[nodiscard]] int size() const { return static_cast<int>(observations_.size()); }
    [[nodiscard]] int dimension() const { return static_cast<int>(margin_ids_.size()); }
    [[nodiscard]] const std::vector<std::vector<double>>& observations() const { return observations_; }
    [[nodiscard]] const std::vector<std::string>& margin_ids() const { return margin_ids_; }
    [[nodiscard]] const std::vector<std::string>& dates() const { return dates_; }
    [[nodiscard]] EnsembleForecast as_ensemble() const { return EnsembleForecast(observations_, margin_ids_); }

private:
    std::vector<std::vector<double>> observations_;
    std::vector<std::string> margin_ids_;
    std::vector<std::string> dates_;
};

/// Schaake shuffle: each margin's law is quantized to N values and member n
/// receives the rank(o_n)-th smallest of them.
EnsembleForecast schaake_shuffle(const HistoricalRecord& hist,
                                 const std::vector<PredictiveDistribution>& distributions, int size,
                                 const TiePolicy& policy, Parallelism par = {});

struct DependenceReport {
    bool copulas_equal = false;
    std::vector<std::vector<double>> spearman_reference;
    std::vector<std::vector<double>> spearman_output;
    double max_abs_spearman_diff = 0.0;
    bool margin_multiset_equal = false;
};

/// Compares empirical copulas (as rank-tuple sets) and Spearman matrices of
/// `reference` and `output`. The margin check compares the sorted margins of
/// `output` with `expected_margins` when given, else with `reference`.
DependenceReport verify_dependence(const EnsembleForecast& reference, const EnsembleForecast& output,
                                   const TiePolicy& policy,
                                   const std::optional<std::vector<std::vector<double>>>& expected_margins = {});

/// Runs fn(0..n-1) on up to par.threads worker threads.
void parallel_for(std::size_t n, Parallelism par, const std::function<void(std::size_t)>& fn);

}  // namespace dcop
