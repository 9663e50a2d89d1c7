#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcop/copula.hpp"
#include "dcop/postprocess.hpp"
#include "dcop/sklar.hpp"
#include "dcop/subcopula.hpp"

namespace dcop {

/// Any object the file formats can carry. JSON kinds: "copula",
/// "copula-sparse", "array", "subcopula", "joint"; CSV files hold ensembles.
using Document = std::variant<DiscreteCopula, StochasticArray, DiscreteSubcopula,
                              FiniteJointDistribution, EnsembleForecast>;

std::string kind_of(const Document& doc);

/// Parses a JSON document. Rationals are read exactly from "p/q" strings.
/// Throws ParseError with the offending field path on any schema problem.
Document parse_document(std::string_view json_text);

/// Canonical JSON: keys sorted, entries in index order, rationals in lowest
/// terms, two-space indent, trailing newline. Byte-identical across runs.
/// Ensembles are serialized as CSV instead.
std::string serialize(const Document& doc);

/// Dispatches on extension: ".csv" reads an ensemble, anything else JSON.
Document load(const std::filesystem::path& path);
void save(const Document& doc, const std::filesystem::path& path);

/// Member CSV: header "member,<id_1>,...,<id_L>", one row per member. The
/// first column is a free label.
EnsembleForecast parse_ensemble_csv(std::string_view text);
std::string ensemble_to_csv(const EnsembleForecast& ensemble);

/// Observation record in the member CSV layout; the first column is the date.
HistoricalRecord parse_history_csv(std::string_view text);
std::string history_to_csv(const HistoricalRecord& hist);

/// Training CSV: header "date,member,<id_1>,...,<id_L>". Rows with member
/// "obs" carry the observation for that date, other rows ensemble members.
TrainingSet parse_training_csv(std::string_view text);
std::string training_to_csv(const TrainingSet& train);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trip decimal form of a double, locale independent.
std::string format_double(double x);
/// Full-string decimal parse; throws ParseError.
double parse_double(std::string_view text);

}  // namespace dcop
