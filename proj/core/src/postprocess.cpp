#include "dcop/postprocess.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "dcop/error.hpp"
#include "dcop/random.hpp"

namespace dcop {

namespace {

void require_sorted(const std::vector<double>& xs, std::size_t axis) {
    if (!std::is_sorted(xs.begin(), xs.end())) {
        throw ValidationError("sample for margin " + std::to_string(axis + 1) + " is not sorted");
    }
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Population variance.
double variance_of(const std::vector<double>& xs) {
    const double mu = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return s / static_cast<double>(xs.size());
}

struct LineFit {
    double intercept;
    double slope;
    bool degenerate;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    // Relative to the scale of x so that constant regressors with rounding
    // noise count as degenerate.
    if (sxx <= 1e-12 * (1.0 + mx * mx) * static_cast<double>(x.size())) return {my, 0.0, true};
    const double slope = sxy / sxx;
    return {my - slope * mx, slope, false};
}

}  // namespace

// ---------------------------------------------------------------------------
// EnsembleForecast

EnsembleForecast::EnsembleForecast(std::vector<std::vector<double>> members, std::vector<std::string> margin_ids)
    : members_(std::move(members)), margin_ids_(std::move(margin_ids)) {
    if (margin_ids_.empty()) throw DimensionError("ensemble needs at least one margin");
    if (members_.empty()) throw DimensionError("ensemble needs at least one member");
    for (std::size_t m = 0; m < members_.size(); ++m) {
        if (members_[m].size() != margin_ids_.size()) {
            throw DimensionError("member " + std::to_string(m + 1) + " has " + std::to_string(members_[m].size()) +
                                 " values, expected " + std::to_string(margin_ids_.size()));
        }
    }
}

std::vector<double> EnsembleForecast::margin(int axis) const {
    std::vector<double> col;
    col.reserve(members_.size());
    for (const auto& row : members_) col.push_back(row.at(static_cast<std::size_t>(axis)));
    return col;
}

int EnsembleForecast::axis_of(const std::string& margin_id) const {
    const auto it = std::find(margin_ids_.begin(), margin_ids_.end(), margin_id);
    if (it == margin_ids_.end()) throw DimensionError("unknown margin '" + margin_id + "'");
    return static_cast<int>(it - margin_ids_.begin());
}

EnsembleForecast EnsembleForecast::from_columns(const std::vector<std::vector<double>>& columns,
                                                std::vector<std::string> margin_ids) {
    if (columns.size() != margin_ids.size()) throw DimensionError("one column per margin id required");
    if (columns.empty()) throw DimensionError("ensemble needs at least one margin");
    const std::size_t m = columns.front().size();
    std::vector<std::vector<double>> members(m, std::vector<double>(columns.size()));
    for (std::size_t axis = 0; axis < columns.size(); ++axis) {
        if (columns[axis].size() != m) throw DimensionError("columns differ in length");
        for (std::size_t k = 0; k < m; ++k) members[k][axis] = columns[axis][k];
    }
    return EnsembleForecast(std::move(members), std::move(margin_ids));
}

// ---------------------------------------------------------------------------
// PredictiveDistribution

PredictiveDistribution PredictiveDistribution::gaussian(double mean, double sd) {
    if (!std::isfinite(mean) || !std::isfinite(sd) || sd <= 0.0) {
        throw ValidationError("gaussian needs finite mean and positive sd");
    }
    return PredictiveDistribution(Gaussian{mean, sd});
}

PredictiveDistribution PredictiveDistribution::empirical(std::vector<double> values) {
    if (values.empty()) throw ValidationError("empirical law needs at least one value");
    std::sort(values.begin(), values.end());
    return PredictiveDistribution(Empirical{std::move(values), false});
}

PredictiveDistribution PredictiveDistribution::passthrough(std::vector<double> raw_margin) {
    auto d = empirical(std::move(raw_margin));
    std::get<Empirical>(d.law_).passthrough = true;
    return d;
}

double PredictiveDistribution::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("quantile level must lie in (0, 1)");
    if (const auto* g = std::get_if<Gaussian>(&law_)) {
        return boost::math::quantile(boost::math::normal_distribution<double>(g->mean, g->sd), p);
    }
    const auto& v = std::get<Empirical>(law_).values;
    const auto n = static_cast<double>(v.size());
    auto k = static_cast<std::size_t>(std::ceil(p * n));
    k = std::clamp<std::size_t>(k, 1, v.size());
    return v[k - 1];
}

double PredictiveDistribution::quantile(std::int64_t num, std::int64_t den) const {
    if (!(num > 0 && num < den)) throw ValidationError("quantile level must lie in (0, 1)");
    if (std::holds_alternative<Gaussian>(law_)) {
        return quantile(static_cast<double>(num) / static_cast<double>(den));
    }
    // Smallest k with k/n >= num/den, i.e. k = ceil(num * n / den).
    const auto& v = std::get<Empirical>(law_).values;
    const auto n = static_cast<std::int64_t>(v.size());
    const std::int64_t k = (num * n + den - 1) / den;
    return v[static_cast<std::size_t>(k - 1)];
}

// ---------------------------------------------------------------------------
// Training and EMOS-lite

TrainingSet::TrainingSet(std::vector<TrainingCase> cases) : cases_(std::move(cases)) {
    if (cases_.empty()) throw DimensionError("training set is empty");
    const auto& ids = cases_.front().forecast.margin_ids();
    for (const auto& c : cases_) {
        if (c.forecast.margin_ids() != ids) throw DimensionError("training case '" + c.date + "' has different margins");
        if (c.observation.size() != ids.size()) {
            throw DimensionError("training case '" + c.date + "' has an observation of wrong length");
        }
    }
}

const std::vector<std::string>& TrainingSet::margin_ids() const { return cases_.front().forecast.margin_ids(); }

PredictiveDistribution EmosLiteModel::predict(const std::vector<double>& ensemble_margin) const {
    if (ensemble_margin.empty()) throw DimensionError("empty ensemble margin");
    const double mu = a + b * mean_of(ensemble_margin);
    const double var = std::max(c + d * variance_of(ensemble_margin), variance_floor);
    return PredictiveDistribution::gaussian(mu, std::sqrt(var));
}

EmosLiteModel fit_emoslite(const TrainingSet& train, const std::string& margin_id) {
    if (train.cases().size() < 5) {
        throw ValidationError("EMOS-lite needs at least 5 training cases, got " + std::to_string(train.cases().size()));
    }
    std::vector<double> ens_mean;
    std::vector<double> ens_var;
    std::vector<double> obs;
    for (const auto& c : train.cases()) {
        const int axis = c.forecast.axis_of(margin_id);
        const auto col = c.forecast.margin(axis);
        ens_mean.push_back(mean_of(col));
        ens_var.push_back(variance_of(col));
        obs.push_back(c.observation[static_cast<std::size_t>(axis)]);
    }

    EmosLiteModel model;
    const LineFit location = least_squares(ens_mean, obs);
    if (location.degenerate) {
        model.b = 1.0;
        std::vector<double> bias(obs.size());
        for (std::size_t k = 0; k < obs.size(); ++k) bias[k] = obs[k] - ens_mean[k];
        model.a = mean_of(bias);
        model.degenerate = true;
    } else {
        model.a = location.intercept;
        model.b = location.slope;
    }

    std::vector<double> sq_resid(obs.size());
    for (std::size_t k = 0; k < obs.size(); ++k) {
        const double r = obs[k] - (model.a + model.b * ens_mean[k]);
        sq_resid[k] = r * r;
    }
    const LineFit spread = model.degenerate ? LineFit{mean_of(sq_resid), 0.0, true} : least_squares(ens_var, sq_resid);
    if (spread.degenerate || spread.slope < 0.0) {
        model.c = mean_of(sq_resid);
        model.d = 0.0;
    } else {
        model.c = spread.intercept;
        model.d = spread.slope;
    }
    return model;
}

std::vector<double> quantize(const PredictiveDistribution& dist, int size) {
    if (size < 1) throw ValidationError("quantization size must be >= 1");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(size));
    for (int m = 1; m <= size; ++m) xs.push_back(dist.quantile(m, size + 1));
    return xs;
}

// ---------------------------------------------------------------------------
// Reordering

void parallel_for(std::size_t n, Parallelism par, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1U, par.threads), n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) {
                    try {
                        fn(k);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

EnsembleForecast ecc(const EnsembleForecast& raw, const std::vector<std::vector<double>>& samples,
                     const TiePolicy& policy, Parallelism par) {
    const auto dim = static_cast<std::size_t>(raw.dimension());
    const auto m = static_cast<std::size_t>(raw.size());
    if (samples.size() != dim) {
        throw DimensionError("need " + std::to_string(dim) + " samples, got " + std::to_string(samples.size()));
    }
    for (std::size_t axis = 0; axis < dim; ++axis) {
        if (samples[axis].size() != m) {
            throw DimensionError("sample for margin " + std::to_string(axis + 1) + " has " +
                                 std::to_string(samples[axis].size()) + " values, raw ensemble has " + std::to_string(m));
        }
        require_sorted(samples[axis], axis);
    }

    std::vector<std::vector<double>> columns(dim);
    parallel_for(dim, par, [&](std::size_t axis) {
        const auto r = ranks(raw.margin(static_cast<int>(axis)), policy, raw.margin_ids()[axis]);
        auto& col = columns[axis];
        col.resize(m);
        for (std::size_t k = 0; k < m; ++k) col[k] = samples[axis][static_cast<std::size_t>(r.ranks[k] - 1)];
    });
    return EnsembleForecast::from_columns(columns, raw.margin_ids());
}

EnsembleForecast individually_postprocessed(const std::vector<std::vector<double>>& samples,
                                            const std::vector<std::string>& margin_ids, std::uint64_t seed,
                                            Parallelism par) {
    if (samples.size() != margin_ids.size()) throw DimensionError("one sample per margin id required");
    if (samples.empty()) throw DimensionError("no margins");
    for (const auto& s : samples) {
        if (s.size() != samples.front().size()) throw DimensionError("samples differ in size");
    }
    std::vector<std::vector<double>> columns(samples.size());
    parallel_for(samples.size(), par, [&](std::size_t axis) {
        auto rng = keyed_stream(seed, margin_ids[axis]);
        const auto perm = random_permutation(samples[axis].size(), rng);
        auto& col = columns[axis];
        col.resize(perm.size());
        for (std::size_t k = 0; k < perm.size(); ++k) col[k] = samples[axis][perm[k]];
    });
    return EnsembleForecast::from_columns(columns, margin_ids);
}

HistoricalRecord::HistoricalRecord(std::vector<std::vector<double>> observations, std::vector<std::string> margin_ids,
                                   std::vector<std::string> dates)
    : observations_(std::move(observations)), margin_ids_(std::move(margin_ids)), dates_(std::move(dates)) {
    if (observations_.empty()) throw DimensionError("historical record is empty");
    if (margin_ids_.empty()) throw DimensionError("historical record has no margins");
    for (const auto& o : observations_) {
        if (o.size() != margin_ids_.size()) {
            throw DimensionError("every verification date must cover all margins");
        }
    }
    if (!dates_.empty() && dates_.size() != observations_.size()) throw DimensionError("one date per observation vector");
}

EnsembleForecast schaake_shuffle(const HistoricalRecord& hist, const std::vector<PredictiveDistribution>& distributions,
                                 int size, const TiePolicy& policy, Parallelism par) {
    if (size != hist.size()) {
        throw DimensionError("Schaake size N=" + std::to_string(size) + " but record has " + std::to_string(hist.size()) +
                             " dates");
    }
    const auto dim = static_cast<std::size_t>(hist.dimension());
    if (distributions.size() != dim) throw DimensionError("one predictive distribution per record margin required");

    const auto record = hist.as_ensemble();
    std::vector<std::vector<double>> columns(dim);
    parallel_for(dim, par, [&](std::size_t axis) {
        const auto q = quantize(distributions[axis], size);
        const auto r = ranks(record.margin(static_cast<int>(axis)), policy, record.margin_ids()[axis]);
        auto& col = columns[axis];
        col.resize(q.size());
        for (std::size_t n = 0; n < q.size(); ++n) col[n] = q[static_cast<std::size_t>(r.ranks[n] - 1)];
    });
    return EnsembleForecast::from_columns(columns, hist.margin_ids());
}

DependenceReport verify_dependence(const EnsembleForecast& reference, const EnsembleForecast& output,
                                   const TiePolicy& policy,
                                   const std::optional<std::vector<std::vector<double>>>& expected_margins) {
    if (reference.size() != output.size() || reference.margin_ids() != output.margin_ids()) {
        throw DimensionError("reference and output differ in size or margins");
    }
    DependenceReport report;
    const auto ref_sample = reference.as_sample();
    const auto out_sample = output.as_sample();

    auto ref_tuples = rank_tuples(ref_sample, policy);
    auto out_tuples = rank_tuples(out_sample, policy);
    std::sort(ref_tuples.begin(), ref_tuples.end());
    std::sort(out_tuples.begin(), out_tuples.end());
    report.copulas_equal = ref_tuples == out_tuples;

    report.spearman_reference = spearman_matrix(ref_sample, policy);
    report.spearman_output = spearman_matrix(out_sample, policy);
    for (std::size_t j = 0; j < report.spearman_reference.size(); ++j) {
        for (std::size_t k = 0; k < report.spearman_reference.size(); ++k) {
            report.max_abs_spearman_diff = std::max(
                report.max_abs_spearman_diff, std::abs(report.spearman_reference[j][k] - report.spearman_output[j][k]));
        }
    }

    report.margin_multiset_equal = true;
    for (int axis = 0; axis < output.dimension(); ++axis) {
        auto got = output.margin(axis);
        std::sort(got.begin(), got.end());
        std::vector<double> want;
        if (expected_margins) {
            want = expected_margins->at(static_cast<std::size_t>(axis));
        } else {
            want = reference.margin(axis);
        }
        std::sort(want.begin(), want.end());
        report.margin_multiset_equal = report.margin_multiset_equal && got == want;
    }
    return report;
}

}  // namespace dcop
