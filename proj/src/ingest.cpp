#include "tsa/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tsa/errors.hpp"

namespace tsa {

std::vector<std::string> split_csv_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

namespace {

std::optional<std::size_t> resolve_column(const std::vector<std::string>& header,
                                          const std::string& ref) {
    const auto exact = std::find(header.begin(), header.end(), ref);
    if (exact != header.end()) return static_cast<std::size_t>(exact - header.begin());
    if (!ref.empty() && std::all_of(ref.begin(), ref.end(),
                                    [](unsigned char c) { return std::isdigit(c); })) {
        const std::size_t index = std::stoul(ref);
        if (index < header.size()) return index;
    }
    return std::nullopt;
}

std::size_t require_column(const std::vector<std::string>& header, const std::string& ref,
                           const std::string& role) {
    const auto col = resolve_column(header, ref);
    if (!col.has_value()) {
        throw SchemaError(role + " column '" + ref + "' not found in header");
    }
    return *col;
}

double parse_value(const std::string& text, std::size_t line_number) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || begin == end) {
        throw ParseError("line " + std::to_string(line_number) + ": cannot parse value '" + text +
                         "'");
    }
    return value;
}

int parse_year(const std::string& text, std::size_t line_number) {
    int year = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, year);
    if (ec != std::errc{} || ptr != end || begin == end) {
        throw ParseError("line " + std::to_string(line_number) + ": cannot parse year '" + text +
                         "'");
    }
    return year;
}

}  // namespace

TimeSeries ingest_csv(const IngestSpec& spec) {
    std::ifstream in(spec.path);
    if (!in) throw IoError("cannot open '" + spec.path + "' for reading");
    if (spec.year_range && spec.year_range->first > spec.year_range->second) {
        throw DegenerateInput("year range start exceeds end");
    }

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("'" + spec.path + "' is empty; header required");
    const std::vector<std::string> header = split_csv_record(line);

    const auto entity_col = spec.entity_filter.has_value()
                                ? std::optional<std::size_t>(require_column(header, spec.entity_column, "entity"))
                                : resolve_column(header, spec.entity_column);
    const std::size_t year_col = require_column(header, spec.year_column, "year");
    const std::size_t value_col = require_column(header, spec.value_column, "value");

    std::map<int, double> by_year;
    std::set<int> duplicates;
    std::set<std::string> entities_seen;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_record(line);
        const auto cell = [&](std::size_t col) -> const std::string& {
            static const std::string empty;
            return col < fields.size() ? fields[col] : empty;
        };
        if (entity_col.has_value()) {
            const std::string& entity = cell(*entity_col);
            if (spec.entity_filter.has_value() && entity != *spec.entity_filter) continue;
            entities_seen.insert(entity);
        }
        const int year = parse_year(cell(year_col), line_number);
        if (spec.year_range &&
            (year < spec.year_range->first || year > spec.year_range->second)) {
            continue;
        }
        const double value = parse_value(cell(value_col), line_number);
        if (!by_year.emplace(year, value).second) duplicates.insert(year);
    }

    if (!duplicates.empty()) {
        std::ostringstream msg;
        msg << "duplicate year(s): ";
        for (auto it = duplicates.begin(); it != duplicates.end(); ++it) {
            if (it != duplicates.begin()) msg << ", ";
            msg << *it;
        }
        if (!spec.entity_filter.has_value() && entities_seen.size() > 1) {
            msg << " (multiple entities present; use an entity filter)";
        }
        throw GapError(msg.str());
    }
    if (by_year.empty()) {
        throw DegenerateInput("no rows matched the requested entity/year filters");
    }

    std::vector<int> missing;
    for (int year = by_year.begin()->first; year <= by_year.rbegin()->first; ++year) {
        if (!by_year.count(year)) missing.push_back(year);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "missing year(s): ";
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (i > 0) msg << ", ";
            msg << missing[i];
        }
        throw GapError(msg.str());
    }

    std::vector<double> values;
    values.reserve(by_year.size());
    for (const auto& [year, value] : by_year) values.push_back(value);

    std::string label;
    if (spec.entity_filter.has_value()) {
        label = *spec.entity_filter;
    } else if (entities_seen.size() == 1) {
        label = *entities_seen.begin();
    } else {
        const std::size_t slash = spec.path.find_last_of("/\\");
        label = slash == std::string::npos ? spec.path : spec.path.substr(slash + 1);
    }
    return TimeSeries(std::move(values), by_year.begin()->first, label);
}

}  // namespace tsa
