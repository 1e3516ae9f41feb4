#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hag/harmonize.h"
#include "hag/persona.h"
#include "hag/schema.h"

namespace hag {

// Immutable pool of real persona records with a per-dimension inverted
// index. Record ids are positions in records().
class PersonaDatabase {
  public:
    PersonaDatabase() = default;
    PersonaDatabase(std::vector<PersonaRecord> records, const DimensionSchema& schema);

    const std::vector<PersonaRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    // Ids of records agreeing with every assignment; all ids when the
    // persona is empty. Ascending order.
    std::vector<std::size_t> matching(const PersonaVector& persona) const;
    std::size_t count_matching(const PersonaVector& persona) const;

  private:
    std::vector<PersonaRecord> records_;
    std::map<std::string, std::map<std::string, std::vector<std::size_t>>> index_;
};

struct IngestStats {
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_skipped = 0;
    std::map<std::string, std::size_t> skip_reasons;
};

// Reads CSV (first line = header) or JSONL (by .jsonl/.ndjson extension or
// a leading '{'), maps source columns to schema dimensions, harmonizes raw
// values, validates, and skips rows that do not form a complete record.
// column_map: dimension id -> source column; defaults to the schema's
// survey codes. A column named "id" becomes source_id.
PersonaDatabase ingest_database(const std::string& path, const DimensionSchema& schema,
                                const Harmonizer& harmonizer = default_harmonizer(),
                                const std::optional<std::map<std::string, std::string>>&
                                    column_map = std::nullopt,
                                IngestStats* stats = nullptr);

// RFC 4180 flavor: quoted fields, doubled-quote escapes, newlines inside
// quotes. Returns rows of cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& content);

}  // namespace hag
