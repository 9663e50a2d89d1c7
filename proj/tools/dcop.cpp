// Command line front end for the dcop library.
//
// Exit status: 0 success or check passed, 1 validation failure, 2 malformed
// input or usage error.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcop/copula.hpp"
#include "dcop/demo.hpp"
#include "dcop/empirical.hpp"
#include "dcop/error.hpp"
#include "dcop/golden.hpp"
#include "dcop/io.hpp"
#include "dcop/postprocess.hpp"
#include "dcop/sklar.hpp"
#include "dcop/subcopula.hpp"

namespace fs = std::filesystem;
using namespace dcop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitMalformed = 2;

struct Common {
    unsigned threads = 1;
    std::string ties = "error";
    std::uint64_t seed = 0;
    std::string out;
};

std::uint64_t default_seed() {
    const char* env = std::getenv("DCOP_SEED");
    if (env == nullptr || *env == '\0') return 0;
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError("DCOP_SEED must be an unsigned integer, got '" + std::string(s) + "'");
    }
    return v;
}

TiePolicy tie_policy(const Common& c) {
    return c.ties == "random" ? TiePolicy::random(c.seed) : TiePolicy::error();
}

Parallelism parallelism(const Common& c) {
    if (c.threads == 0) return {std::max(1U, std::thread::hardware_concurrency())};
    return {c.threads};
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty() || c.out == "-") {
        std::cout << text;
    } else {
        write_file(c.out, text);
    }
}

std::string describe(const Violation& v) {
    std::ostringstream os;
    os << to_string(v.axiom) << " at (" << format_index(v.location) << "): " << v.value;
    return os.str();
}

int report(const std::string& kind, const ValidationReport& r) {
    if (r.passed()) {
        std::cout << "PASS " << kind << "\n";
        return kExitOk;
    }
    std::cout << "FAIL " << kind << ": " << r.violations.size() << " violation(s)\n";
    for (const auto& v : r.violations) std::cout << "  " << describe(v) << "\n";
    return kExitInvalid;
}

int cmd_validate(const std::string& path, const Common& c) {
    const auto doc = load(path);
    const auto kind = kind_of(doc);
    if (const auto* copula = std::get_if<DiscreteCopula>(&doc)) return report(kind, validate_copula(*copula));
    if (const auto* array = std::get_if<StochasticArray>(&doc)) return report(kind, validate_array(*array));
    if (const auto* sub = std::get_if<DiscreteSubcopula>(&doc)) return report(kind, validate_subcopula(*sub));
    if (const auto* joint = std::get_if<FiniteJointDistribution>(&doc)) {
        return report(kind, validate_subcopula(subcopula_of(*joint)));
    }
    // Ensembles: the rank transform must succeed under the chosen tie policy.
    const auto& ens = std::get<EnsembleForecast>(doc);
    for (int axis = 0; axis < ens.dimension(); ++axis) {
        (void)ranks(ens.margin(axis), tie_policy(c), ens.margin_ids()[static_cast<std::size_t>(axis)]);
    }
    std::cout << "PASS ensemble\n";
    return kExitOk;
}

int cmd_convert(const std::string& path, const std::string& to, const Common& c) {
    const auto doc = load(path);
    if (to == "array") {
        if (const auto* copula = std::get_if<DiscreteCopula>(&doc)) {
            emit(c, serialize(copula_to_array(*copula)));
            return kExitOk;
        }
        if (const auto* array = std::get_if<StochasticArray>(&doc)) {
            emit(c, serialize(*array));
            return kExitOk;
        }
    } else {
        if (const auto* array = std::get_if<StochasticArray>(&doc)) {
            emit(c, serialize(array_to_copula(*array)));
            return kExitOk;
        }
        if (const auto* copula = std::get_if<DiscreteCopula>(&doc)) {
            emit(c, serialize(copula->to_dense()));
            return kExitOk;
        }
    }
    throw ParseError("cannot convert a " + kind_of(doc) + " document to " + to);
}

int cmd_extend(const std::string& path, bool dense, const Common& c) {
    const auto doc = load(path);
    const auto* sub = std::get_if<DiscreteSubcopula>(&doc);
    if (sub == nullptr) throw ParseError("expected a subcopula document, got " + kind_of(doc));
    const auto r = validate_subcopula(*sub);
    if (!r.passed()) return report("subcopula", r);
    if (!is_irreducible(*sub)) {
        std::cout << "FAIL subcopula: values are not multiples of 1/M\n";
        return kExitInvalid;
    }
    const auto ext = extend(*sub);
    emit(c, serialize(dense ? ext.to_dense() : ext));
    return kExitOk;
}

int cmd_empirical(const std::string& path, const Common& c) {
    const auto ens = parse_ensemble_csv(read_file(path));
    emit(c, serialize(empirical_copula(ens.as_sample(), tie_policy(c))));
    return kExitOk;
}

std::vector<PredictiveDistribution> predictive(const std::string& method, const std::optional<TrainingSet>& train,
                                               const EnsembleForecast& current) {
    std::vector<PredictiveDistribution> dists;
    for (int axis = 0; axis < current.dimension(); ++axis) {
        const auto& id = current.margin_ids()[static_cast<std::size_t>(axis)];
        if (method == "passthrough") {
            dists.push_back(PredictiveDistribution::passthrough(current.margin(axis)));
        } else {
            if (!train) throw ParseError("--method emoslite needs --train");
            dists.push_back(fit_emoslite(*train, id).predict(current.margin(axis)));
        }
    }
    return dists;
}

std::optional<TrainingSet> load_training(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return parse_training_csv(read_file(path));
}

int cmd_ecc(const std::string& raw_path, const std::string& train_path, const std::string& method, bool individual,
            const Common& c) {
    const auto raw = parse_ensemble_csv(read_file(raw_path));
    const auto train = load_training(train_path);
    if (train && train->margin_ids() != raw.margin_ids()) {
        throw DimensionError("training and raw ensemble margins differ");
    }
    const auto dists = predictive(method, train, raw);
    std::vector<std::vector<double>> samples;
    for (const auto& d : dists) samples.push_back(quantize(d, raw.size()));
    const auto out = individual ? individually_postprocessed(samples, raw.margin_ids(), c.seed, parallelism(c))
                                : ecc(raw, samples, tie_policy(c), parallelism(c));
    emit(c, ensemble_to_csv(out));
    return kExitOk;
}

int cmd_schaake(const std::string& hist_path, const std::string& train_path, const std::string& raw_path,
                const std::string& method, int size, const Common& c) {
    const auto hist = parse_history_csv(read_file(hist_path));
    const auto train = load_training(train_path);
    std::optional<EnsembleForecast> current;
    if (!raw_path.empty()) {
        current = parse_ensemble_csv(read_file(raw_path));
    } else if (train) {
        current = train->cases().back().forecast;
    } else {
        throw ParseError("schaake needs --train or --raw");
    }
    if (current->margin_ids() != hist.margin_ids()) throw DimensionError("forecast and history margins differ");
    const auto dists = predictive(method, train, *current);
    emit(c, ensemble_to_csv(schaake_shuffle(hist, dists, size, tie_policy(c), parallelism(c))));
    return kExitOk;
}

int cmd_verify(const std::string& ref_path, const std::string& out_path, const Common& c) {
    const auto ref = parse_ensemble_csv(read_file(ref_path));
    const auto out = parse_ensemble_csv(read_file(out_path));
    const auto r = verify_dependence(ref, out, tie_policy(c));
    nlohmann::json j;
    j["copulas_equal"] = r.copulas_equal;
    j["max_abs_spearman_diff"] = r.max_abs_spearman_diff;
    j["margin_multiset_equal"] = r.margin_multiset_equal;
    j["spearman_reference"] = r.spearman_reference;
    j["spearman_output"] = r.spearman_output;
    std::cout << j.dump(2) << "\n";
    return r.copulas_equal ? kExitOk : kExitInvalid;
}

int cmd_synth(const std::string& dir, const SyntheticOptions& opts, const Common& c) {
    const auto s = make_synthetic_scenario(c.seed, opts);
    fs::create_directories(dir);
    write_file(fs::path(dir) / "train.csv", training_to_csv(s.train));
    write_file(fs::path(dir) / "raw.csv", ensemble_to_csv(s.raw));
    write_file(fs::path(dir) / "hist.csv", history_to_csv(s.history));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete copulas and ensemble reordering"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dcop 0.1.0");

    Common common;
    try {
        common.seed = default_seed();
    } catch (const Error& e) {
        std::cerr << "dcop: " << e.what() << "\n";
        return kExitMalformed;
    }

    auto add_common = [&](CLI::App* sub, bool ranks, bool output) {
        if (ranks) {
            sub->add_option("--ties", common.ties, "Tie handling for ranks")
                ->check(CLI::IsMember({"error", "random"}));
            sub->add_option("--seed", common.seed, "Seed (default: $DCOP_SEED or 0)");
        }
        if (output) sub->add_option("-o,--out", common.out, "Output file (default: stdout)");
    };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", common.threads, "Worker threads for margin processing (0 = all cores)");
    };

    std::string path;
    auto* validate = app.add_subcommand("validate", "Check the axioms of a document");
    validate->add_option("file", path, "JSON document or ensemble CSV")->required();
    add_common(validate, true, false);

    std::string to;
    auto* convert = app.add_subcommand("convert", "Convert between copula and stochastic array");
    convert->add_option("--to", to)->required()->check(CLI::IsMember({"copula", "array"}));
    convert->add_option("file", path)->required();
    add_common(convert, false, true);

    bool dense = false;
    auto* ext = app.add_subcommand("extend", "Extend a subcopula to an irreducible copula");
    ext->add_option("file", path)->required();
    ext->add_flag("--dense", dense, "Write the full grid instead of rank tuples");
    add_common(ext, false, true);

    auto* emp = app.add_subcommand("empirical", "Empirical copula of a sample CSV");
    emp->add_option("file", path)->required();
    add_common(emp, true, true);

    std::string raw_path;
    std::string train_path;
    std::string method = "emoslite";
    bool individual = false;
    auto* ecc_cmd = app.add_subcommand("ecc", "Ensemble copula coupling");
    ecc_cmd->add_option("--raw", raw_path, "Raw ensemble CSV")->required();
    ecc_cmd->add_option("--train", train_path, "Training CSV");
    ecc_cmd->add_option("--method", method)->check(CLI::IsMember({"emoslite", "passthrough"}));
    ecc_cmd->add_flag("--individual", individual, "Random pairing instead of raw ranks");
    add_common(ecc_cmd, true, true);
    add_threads(ecc_cmd);

    std::string hist_path;
    int size = 0;
    auto* schaake = app.add_subcommand("schaake", "Schaake shuffle");
    schaake->add_option("--hist", hist_path, "Historical observation CSV")->required();
    schaake->add_option("--train", train_path, "Training CSV");
    schaake->add_option("--raw", raw_path, "Current forecast (default: last training date)");
    schaake->add_option("--method", method)->check(CLI::IsMember({"emoslite", "passthrough"}));
    schaake->add_option("--size", size, "Output size N, equal to the number of historical dates")->required();
    add_common(schaake, true, true);
    add_threads(schaake);

    std::string ref_path;
    std::string cmp_path;
    auto* verify = app.add_subcommand("verify", "Compare rank dependence of two ensembles");
    verify->add_option("--ref", ref_path)->required();
    verify->add_option("--out", cmp_path)->required();
    add_common(verify, true, false);

    std::string golden;
    auto* demo = app.add_subcommand("demo", "Print a reference object");
    demo->add_option("name", golden)->required()->check(CLI::IsMember({"table1", "table2", "example4"}));

    std::string dir;
    SyntheticOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Write the synthetic two-station data set");
    synth->add_option("--dir", dir, "Output directory")->required();
    synth->add_option("--members", synth_opts.members);
    synth->add_option("--train-days", synth_opts.training_days);
    synth->add_option("--hist-days", synth_opts.history_days);
    synth->add_option("--seed", common.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitMalformed;
    }

    try {
        if (*validate) return cmd_validate(path, common);
        if (*convert) return cmd_convert(path, to, common);
        if (*ext) return cmd_extend(path, dense, common);
        if (*emp) return cmd_empirical(path, common);
        if (*ecc_cmd) return cmd_ecc(raw_path, train_path, method, individual, common);
        if (*schaake) return cmd_schaake(hist_path, train_path, raw_path, method, size, common);
        if (*verify) return cmd_verify(ref_path, cmp_path, common);
        if (*demo) {
            std::cout << golden::emit_golden(golden);
            return kExitOk;
        }
        if (*synth) return cmd_synth(dir, synth_opts, common);
    } catch (const ValidationError& e) {
        std::cerr << "dcop: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const TieError& e) {
        std::cerr << "dcop: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "dcop: " << e.what() << "\n";
        return kExitMalformed;
    }
    return kExitMalformed;
}
