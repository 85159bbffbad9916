#pragma once

#include <filesystem>

#include "coopsig/experiments.h"

namespace coopsig {

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

// Throws DataError if the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

// Write-then-rename so readers never observe a partial file. Creates parent
// directories as needed.
void atomic_write_text_file(const std::filesystem::path& path, const std::string& content);

// ---------------------------------------------------------------------------
// Trial JSON (round-trip stable: parse(serialize(x)) == x, and serializing
// again reproduces the bytes)
// ---------------------------------------------------------------------------

std::string trials_to_json(const std::vector<Trial>& trials);
std::vector<Trial> trials_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Records CSV
// ---------------------------------------------------------------------------

// Exact column order contract; the reader rejects files with any other header.
extern const char* const kRecordsCsvHeader;

std::string records_to_csv(const std::vector<TrialRecord>& records);
std::vector<TrialRecord> records_from_csv(const std::string& text);

// ---------------------------------------------------------------------------
// Summary and barrier-comparison CSVs (write-only; derived views)
// ---------------------------------------------------------------------------

std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::string rbsb_to_csv(const std::vector<RbSbTest>& tests);

// ---------------------------------------------------------------------------
// Content hashing
// ---------------------------------------------------------------------------

// Hex SHA-1 of "blob <size>\0<content>" — the id git would assign the file,
// so a manifest can be checked against a committed output with git hash-object.
std::string git_blob_sha1(const std::string& content);

}  // namespace coopsig
