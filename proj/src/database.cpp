#include "hag/database.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "hag/errors.h"
#include "hag/util.h"

namespace hag {

PersonaDatabase::PersonaDatabase(std::vector<PersonaRecord> records,
                                 const DimensionSchema& schema)
    : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto violations = validate_record(records_[i], schema);
        if (!violations.empty())
            throw HagError(Errc::InvariantViolation,
                           "record " + std::to_string(i) + ": " + violations.front().message);
        for (const auto& [dim, label] : records_[i].values)
            index_[dim][label].push_back(i);
    }
}

std::vector<std::size_t> PersonaDatabase::matching(const PersonaVector& persona) const {
    if (persona.empty()) {
        std::vector<std::size_t> all(records_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
    }
    // Intersect posting lists, smallest first.
    std::vector<const std::vector<std::size_t>*> lists;
    for (const auto& a : persona.assignments()) {
        auto dim_it = index_.find(a.dimension_id);
        if (dim_it == index_.end()) return {};
        auto label_it = dim_it->second.find(a.label);
        if (label_it == dim_it->second.end()) return {};
        lists.push_back(&label_it->second);
    }
    std::sort(lists.begin(), lists.end(),
              [](const auto* a, const auto* b) { return a->size() < b->size(); });
    std::vector<std::size_t> result = *lists.front();
    for (std::size_t i = 1; i < lists.size() && !result.empty(); ++i) {
        std::vector<std::size_t> next;
        std::set_intersection(result.begin(), result.end(), lists[i]->begin(),
                              lists[i]->end(), std::back_inserter(next));
        result = std::move(next);
    }
    return result;
}

std::size_t PersonaDatabase::count_matching(const PersonaVector& persona) const {
    return matching(persona).size();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& content) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool row_started = false;
    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"': in_quotes = true; row_started = true; break;
            case ',':
                row.push_back(std::move(cell));
                cell.clear();
                row_started = true;
                break;
            case '\r': break;
            case '\n':
                if (row_started || !cell.empty()) {
                    row.push_back(std::move(cell));
                    cell.clear();
                    rows.push_back(std::move(row));
                    row.clear();
                }
                row_started = false;
                break;
            default: cell.push_back(c); row_started = true; break;
        }
    }
    if (row_started || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

bool looks_like_jsonl(const std::string& path, const std::string& content) {
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl") return true;
    if (path.size() >= 7 && path.substr(path.size() - 7) == ".ndjson") return true;
    const std::string head = trim(content.substr(0, 64));
    return !head.empty() && head.front() == '{';
}

std::string cell_to_string(const nlohmann::json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_null()) return "";
    return value.dump();
}

void skip_row(IngestStats& stats, const std::string& reason) {
    ++stats.rows_skipped;
    ++stats.skip_reasons[reason];
}

}  // namespace

PersonaDatabase ingest_database(const std::string& path, const DimensionSchema& schema,
                                const Harmonizer& harmonizer,
                                const std::optional<std::map<std::string, std::string>>&
                                    column_map,
                                IngestStats* stats_out) {
    std::string content;
    try {
        content = read_file(path);
    } catch (const std::exception& e) {
        throw HagError(Errc::UnreadableSource, std::string("database source: ") + e.what());
    }

    std::map<std::string, std::string> columns;  // dimension id -> source column
    if (column_map) {
        columns = *column_map;
        for (const auto& dim : schema.dimensions())
            if (!columns.count(dim.id))
                throw HagError(Errc::ColumnMapIncomplete,
                               "column map lacks dimension " + dim.id);
    } else {
        for (const auto& dim : schema.dimensions()) columns[dim.id] = dim.source_code;
    }

    IngestStats stats;
    std::vector<PersonaRecord> kept;

    auto ingest_row = [&](const std::map<std::string, std::string>& row,
                          const std::string& fallback_id) {
        ++stats.rows_read;
        PersonaRecord record;
        record.provenance = Provenance::Real;
        for (const auto& dim : schema.dimensions()) {
            auto it = row.find(columns.at(dim.id));
            if (it == row.end()) {
                skip_row(stats, "missing " + columns.at(dim.id));
                return;
            }
            record.values[dim.id] = harmonizer.harmonize(dim, it->second);
        }
        if (!validate_record(record, schema).empty()) {
            skip_row(stats, "invalid label");
            return;
        }
        auto id_it = row.find("id");
        record.source_id = id_it != row.end() && !id_it->second.empty() ? id_it->second
                                                                        : fallback_id;
        ++stats.rows_kept;
        kept.push_back(std::move(record));
    };

    if (looks_like_jsonl(path, content)) {
        std::istringstream in(content);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            nlohmann::json doc = nlohmann::json::parse(line, nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) {
                ++stats.rows_read;
                skip_row(stats, "unparseable line");
                continue;
            }
            std::map<std::string, std::string> row;
            for (auto it = doc.begin(); it != doc.end(); ++it)
                row[it.key()] = cell_to_string(it.value());
            ingest_row(row, "row" + std::to_string(line_no));
        }
    } else {
        const auto rows = parse_csv(content);
        if (!rows.empty()) {
            const auto& header = rows.front();
            std::map<std::string, std::size_t> col_pos;
            for (std::size_t i = 0; i < header.size(); ++i) col_pos[trim(header[i])] = i;
            for (const auto& [dim_id, column] : columns)
                if (!col_pos.count(column))
                    throw HagError(Errc::ColumnMapIncomplete,
                                   "source lacks column " + column + " (dimension " + dim_id +
                                       ")");
            for (std::size_t r = 1; r < rows.size(); ++r) {
                std::map<std::string, std::string> row;
                bool short_row = false;
                for (const auto& [name, pos] : col_pos) {
                    if (pos >= rows[r].size()) { short_row = true; break; }
                    row[name] = rows[r][pos];
                }
                if (short_row) {
                    ++stats.rows_read;
                    skip_row(stats, "short row");
                    continue;
                }
                ingest_row(row, "row" + std::to_string(r));
            }
        }
    }

    if (stats_out) *stats_out = stats;
    return PersonaDatabase(std::move(kept), schema);
}

}  // namespace hag
