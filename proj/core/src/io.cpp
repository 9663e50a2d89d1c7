#include "dcop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dcop/error.hpp"

namespace dcop {

namespace {

using nlohmann::json;

// Schema navigation with the JSON path of each field kept for diagnostics.
class Node {
public:
    Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

    [[nodiscard]] const json& raw() const { return value_; }
    [[nodiscard]] const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_ + ": " + what); }

    [[nodiscard]] Node field(const char* key) const {
        if (!value_.is_object()) fail("expected an object");
        const auto it = value_.find(key);
        if (it == value_.end()) fail(std::string("missing required field '") + key + "'");
        return Node(*it, path_ + "." + key);
    }

    [[nodiscard]] std::vector<Node> items() const {
        if (!value_.is_array()) fail("expected an array");
        std::vector<Node> out;
        out.reserve(value_.size());
        for (std::size_t k = 0; k < value_.size(); ++k) {
            out.emplace_back(value_[k], path_ + "[" + std::to_string(k) + "]");
        }
        return out;
    }

    [[nodiscard]] std::int64_t integer() const {
        if (!value_.is_number_integer()) fail("expected an integer");
        return value_.get<std::int64_t>();
    }

    [[nodiscard]] int bounded(std::int64_t lo, std::int64_t hi) const {
        const auto v = integer();
        if (v < lo || v > hi) fail("value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "]");
        return static_cast<int>(v);
    }

    [[nodiscard]] double real() const {
        if (!value_.is_number()) fail("expected a number");
        return value_.get<double>();
    }

    [[nodiscard]] std::string string() const {
        if (!value_.is_string()) fail("expected a string");
        return value_.get<std::string>();
    }

    [[nodiscard]] Rational rational() const {
        try {
            return Rational::parse(string());
        } catch (const ParseError& e) {
            fail(e.what());
        }
    }

    [[nodiscard]] MultiIndex index_key(int dimension) const {
        MultiIndex idx;
        try {
            idx = parse_index(string());
        } catch (const ParseError& e) {
            fail(e.what());
        }
        if (static_cast<int>(idx.size()) != dimension) {
            fail("index has " + std::to_string(idx.size()) + " components, expected " + std::to_string(dimension));
        }
        return idx;
    }

private:
    const json& value_;
    std::string path_;
};

constexpr int kMaxOrder = 1'000'000;
constexpr int kMaxDimension = 64;

// Reads [["i1,...,iL","p/q"], ...] into a full table over `shape`; when
// `complete` every point must appear exactly once.
std::vector<Rational> read_table(const Node& list, const Shape& shape, const std::vector<std::vector<int>>& grids,
                                 bool complete) {
    std::vector<Rational> values(shape.size(), Rational(0));
    std::vector<bool> seen(shape.size(), false);
    for (const auto& pair : list.items()) {
        const auto parts = pair.items();
        if (parts.size() != 2) pair.fail("expected [index, rational]");
        MultiIndex idx = parts[0].index_key(shape.rank());
        for (int axis = 0; axis < shape.rank(); ++axis) {
            const auto& g = grids[static_cast<std::size_t>(axis)];
            const auto it = std::lower_bound(g.begin(), g.end(), idx[axis]);
            if (it == g.end() || *it != idx[axis]) parts[0].fail("coordinate " + std::to_string(idx[axis]) + " not on grid");
            idx[axis] = static_cast<int>(it - g.begin());
        }
        const auto off = shape.offset(idx);
        if (seen[off]) parts[0].fail("duplicate index");
        seen[off] = true;
        values[off] = parts[1].rational();
    }
    if (complete) {
        const auto gap = std::find(seen.begin(), seen.end(), false);
        if (gap != seen.end()) {
            auto idx = shape.index(static_cast<std::size_t>(gap - seen.begin()));
            for (int axis = 0; axis < shape.rank(); ++axis) idx[axis] = grids[static_cast<std::size_t>(axis)][idx[axis]];
            list.fail("missing entry for index " + format_index(idx));
        }
    }
    return values;
}

std::vector<int> full_grid(int order) {
    std::vector<int> g(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) g[static_cast<std::size_t>(k)] = k;
    return g;
}

Document parse_copula(const Node& root, int order, int dimension) {
    const Shape shape(dimension, order + 1);
    Shape::checked_size(shape.extents(), kDefaultDenseBudget);
    const std::vector<std::vector<int>> grids(static_cast<std::size_t>(dimension), full_grid(order));
    auto values = read_table(root.field("values"), shape, grids, true);
    return DiscreteCopula::dense(order, dimension, std::move(values));
}

Document parse_sparse(const Node& root, int order, int dimension) {
    std::vector<MultiIndex> tuples;
    for (const auto& t : root.field("tuples").items()) {
        const auto coords = t.items();
        if (static_cast<int>(coords.size()) != dimension) t.fail("tuple length differs from L");
        MultiIndex idx;
        for (const auto& c : coords) idx.push_back(c.bounded(1, order));
        tuples.push_back(std::move(idx));
    }
    return DiscreteCopula::from_tuples(order, dimension, std::move(tuples));
}

Document parse_array(const Node& root, int order, int dimension) {
    std::map<MultiIndex, Rational> entries;
    for (const auto& pair : root.field("entries").items()) {
        const auto parts = pair.items();
        if (parts.size() != 2) pair.fail("expected [index, rational]");
        const auto idx = parts[0].index_key(dimension);
        for (int c : idx) {
            if (c < 1 || c > order) parts[0].fail("cell index outside 1.." + std::to_string(order));
        }
        if (!entries.emplace(idx, parts[1].rational()).second) parts[0].fail("duplicate index");
    }
    return StochasticArray(order, dimension, std::move(entries));
}

Document parse_subcopula(const Node& root, int order, int dimension) {
    std::vector<std::vector<int>> grids;
    const auto grid_nodes = root.field("grids").items();
    if (static_cast<int>(grid_nodes.size()) != dimension) root.field("grids").fail("expected one grid per axis");
    for (const auto& g : grid_nodes) {
        std::vector<int> levels;
        for (const auto& k : g.items()) levels.push_back(k.bounded(0, order));
        if (levels.empty() || levels.front() != 0 || levels.back() != order ||
            std::adjacent_find(levels.begin(), levels.end(), std::greater_equal<>()) != levels.end()) {
            g.fail("grid must increase strictly from 0 to M");
        }
        grids.push_back(std::move(levels));
    }
    std::vector<int> extents;
    for (const auto& g : grids) extents.push_back(static_cast<int>(g.size()));
    Shape::checked_size(extents, kDefaultDenseBudget);
    auto values = read_table(root.field("values"), Shape(extents), grids, true);
    return DiscreteSubcopula(order, std::move(grids), std::move(values));
}

Document parse_joint(const Node& root, int order, int dimension) {
    std::vector<std::vector<double>> support;
    for (const auto& point : root.field("support").items()) {
        const auto coords = point.items();
        if (static_cast<int>(coords.size()) != dimension) point.fail("support point length differs from L");
        std::vector<double> y;
        for (const auto& c : coords) y.push_back(c.real());
        support.push_back(std::move(y));
    }
    std::vector<Rational> masses;
    const auto mass_node = root.field("masses");
    for (const auto& m : mass_node.items()) masses.push_back(m.rational());
    if (masses.size() != support.size()) mass_node.fail("expected one mass per support point");
    return FiniteJointDistribution(order, std::move(support), std::move(masses));
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json header(const char* kind, int order, int dimension) {
    return json{{"kind", kind}, {"M", order}, {"L", dimension}};
}

json table_json(const std::vector<Rational>& values, const Shape& shape,
                const std::function<MultiIndex(const MultiIndex&)>& to_levels) {
    json out = json::array();
    for (std::size_t off = 0; off < shape.size(); ++off) {
        out.push_back(json::array({format_index(to_levels(shape.index(off))), values[off].str()}));
    }
    return out;
}

// --- CSV -------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

CsvTable read_csv(std::string_view text) {
    CsvTable table;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                             " fields, got " + std::to_string(cells.size()));
        }
        table.rows.push_back(std::move(cells));
        table.line_numbers.push_back(line_no);
    }
    if (table.header.empty()) throw ParseError("CSV input is empty");
    return table;
}

std::vector<std::string> margin_ids_from(const std::vector<std::string>& header, std::size_t skip) {
    if (header.size() <= skip) throw ParseError("line 1: header lists no margins");
    std::vector<std::string> ids(header.begin() + static_cast<std::ptrdiff_t>(skip), header.end());
    std::set<std::string> seen;
    for (const auto& id : ids) {
        if (id.empty()) throw ParseError("line 1: empty margin id");
        if (!seen.insert(id).second) throw ParseError("line 1: duplicate margin id '" + id + "'");
    }
    return ids;
}

std::vector<double> row_values(const CsvTable& t, std::size_t r, std::size_t skip) {
    std::vector<double> out;
    for (std::size_t c = skip; c < t.rows[r].size(); ++c) {
        try {
            out.push_back(parse_double(t.rows[r][c]));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(t.line_numbers[r]) + ", column " + std::to_string(c + 1) + ": " +
                             e.what());
        }
    }
    return out;
}

void write_row(std::string& out, std::string_view label, const std::vector<double>& values) {
    out += label;
    for (double v : values) {
        out += ',';
        out += format_double(v);
    }
    out += '\n';
}

std::string header_line(std::string_view first, const std::vector<std::string>& ids) {
    std::string out(first);
    for (const auto& id : ids) {
        out += ',';
        out += id;
    }
    out += '\n';
    return out;
}

bool has_csv_extension(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".csv";
}

}  // namespace

std::string kind_of(const Document& doc) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, DiscreteCopula>) {
                return d.is_dense() ? "copula" : "copula-sparse";
            } else if constexpr (std::is_same_v<T, StochasticArray>) {
                return "array";
            } else if constexpr (std::is_same_v<T, DiscreteSubcopula>) {
                return "subcopula";
            } else if constexpr (std::is_same_v<T, FiniteJointDistribution>) {
                return "joint";
            } else {
                return "ensemble";
            }
        },
        doc);
}

Document parse_document(std::string_view json_text) {
    json parsed;
    try {
        parsed = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    const Node root(parsed, "$");
    const auto kind = root.field("kind").string();
    const int order = root.field("M").bounded(1, kMaxOrder);
    const int dimension = root.field("L").bounded(1, kMaxDimension);

    if (kind == "copula") return parse_copula(root, order, dimension);
    if (kind == "copula-sparse") return parse_sparse(root, order, dimension);
    if (kind == "array") return parse_array(root, order, dimension);
    if (kind == "subcopula") return parse_subcopula(root, order, dimension);
    if (kind == "joint") return parse_joint(root, order, dimension);
    root.field("kind").fail("unknown kind '" + kind + "'");
}

std::string serialize(const Document& doc) {
    if (const auto* c = std::get_if<DiscreteCopula>(&doc)) {
        if (c->is_dense()) {
            auto out = header("copula", c->order(), c->dimension());
            out["values"] = table_json(c->dense_values(), c->grid_shape(), [](const MultiIndex& i) { return i; });
            return dump(out);
        }
        auto out = header("copula-sparse", c->order(), c->dimension());
        auto tuples = c->tuples();
        std::sort(tuples.begin(), tuples.end());
        out["tuples"] = tuples;
        return dump(out);
    }
    if (const auto* a = std::get_if<StochasticArray>(&doc)) {
        auto out = header("array", a->order(), a->dimension());
        json entries = json::array();
        for (const auto& [cell, value] : a->entries()) entries.push_back(json::array({format_index(cell), value.str()}));
        out["entries"] = std::move(entries);
        return dump(out);
    }
    if (const auto* s = std::get_if<DiscreteSubcopula>(&doc)) {
        auto out = header("subcopula", s->order(), s->dimension());
        out["grids"] = s->grids();
        out["values"] = table_json(s->values(), s->shape(), [s](const MultiIndex& p) { return s->levels_of(p); });
        return dump(out);
    }
    if (const auto* j = std::get_if<FiniteJointDistribution>(&doc)) {
        auto out = header("joint", j->order(), j->dimension());
        out["support"] = j->support();
        json masses = json::array();
        for (const auto& m : j->masses()) masses.push_back(m.str());
        out["masses"] = std::move(masses);
        return dump(out);
    }
    return ensemble_to_csv(std::get<EnsembleForecast>(doc));
}

Document load(const std::filesystem::path& path) {
    const auto text = read_file(path);
    try {
        if (has_csv_extension(path)) return parse_ensemble_csv(text);
        return parse_document(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save(const Document& doc, const std::filesystem::path& path) { write_file(path, serialize(doc)); }

EnsembleForecast parse_ensemble_csv(std::string_view text) {
    const auto t = read_csv(text);
    if (t.header.front() != "member") throw ParseError("line 1: first header field must be 'member'");
    auto ids = margin_ids_from(t.header, 1);
    if (t.rows.empty()) throw ParseError("ensemble CSV has no members");
    std::vector<std::vector<double>> members;
    for (std::size_t r = 0; r < t.rows.size(); ++r) members.push_back(row_values(t, r, 1));
    return EnsembleForecast(std::move(members), std::move(ids));
}

std::string ensemble_to_csv(const EnsembleForecast& ensemble) {
    auto out = header_line("member", ensemble.margin_ids());
    for (int m = 0; m < ensemble.size(); ++m) {
        write_row(out, std::to_string(m + 1), ensemble.members()[static_cast<std::size_t>(m)]);
    }
    return out;
}

HistoricalRecord parse_history_csv(std::string_view text) {
    const auto t = read_csv(text);
    if (t.header.front() != "date" && t.header.front() != "member") {
        throw ParseError("line 1: first header field must be 'date'");
    }
    auto ids = margin_ids_from(t.header, 1);
    if (t.rows.empty()) throw ParseError("history CSV has no dates");
    std::vector<std::vector<double>> obs;
    std::vector<std::string> dates;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        dates.push_back(t.rows[r][0]);
        obs.push_back(row_values(t, r, 1));
    }
    return HistoricalRecord(std::move(obs), std::move(ids), std::move(dates));
}

std::string history_to_csv(const HistoricalRecord& hist) {
    auto out = header_line("date", hist.margin_ids());
    for (int n = 0; n < hist.size(); ++n) {
        const auto k = static_cast<std::size_t>(n);
        write_row(out, hist.dates().empty() ? std::to_string(n + 1) : hist.dates()[k], hist.observations()[k]);
    }
    return out;
}

TrainingSet parse_training_csv(std::string_view text) {
    const auto t = read_csv(text);
    if (t.header.size() < 2 || t.header[0] != "date" || t.header[1] != "member") {
        throw ParseError("line 1: header must start with 'date,member'");
    }
    const auto ids = margin_ids_from(t.header, 2);

    struct Pending {
        std::vector<std::vector<double>> members;
        std::optional<std::vector<double>> obs;
        int first_line = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Pending> by_date;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& date = t.rows[r][0];
        auto [it, inserted] = by_date.try_emplace(date);
        if (inserted) {
            order.push_back(date);
            it->second.first_line = t.line_numbers[r];
        }
        auto values = row_values(t, r, 2);
        if (t.rows[r][1] == "obs") {
            if (it->second.obs) {
                throw ParseError("line " + std::to_string(t.line_numbers[r]) + ": second observation for date '" + date + "'");
            }
            it->second.obs = std::move(values);
        } else {
            it->second.members.push_back(std::move(values));
        }
    }
    if (order.empty()) throw ParseError("training CSV has no rows");

    std::vector<TrainingCase> cases;
    for (const auto& date : order) {
        auto& p = by_date.at(date);
        const auto where = "line " + std::to_string(p.first_line) + ": date '" + date + "'";
        if (!p.obs) throw ParseError(where + " has no 'obs' row");
        if (p.members.empty()) throw ParseError(where + " has no ensemble members");
        cases.push_back(TrainingCase{date, EnsembleForecast(std::move(p.members), ids), std::move(*p.obs)});
    }
    return TrainingSet(std::move(cases));
}

std::string training_to_csv(const TrainingSet& train) {
    std::string out = "date,";
    out += header_line("member", train.margin_ids());
    for (const auto& c : train.cases()) {
        for (int m = 0; m < c.forecast.size(); ++m) {
            write_row(out, c.date + "," + std::to_string(m + 1), c.forecast.members()[static_cast<std::size_t>(m)]);
        }
        write_row(out, c.date + ",obs", c.observation);
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write to '" + path.string() + "' failed");
}

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double x = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ParseError("'" + std::string(text) + "' is not a decimal number");
    }
    if (!std::isfinite(x)) throw ParseError("non-finite value '" + std::string(text) + "'");
    return x;
}

}  // namespace dcop
