#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hdspc/matrixcore.hpp"

namespace hdspc {

struct CsvOptions {
    bool header = true;
    char delimiter = ',';
};

struct CsvTable {
    std::vector<std::string> columns;  ///< empty without a header row
    Matrix values;
};

/// Numeric CSV, one observation per row. Rejects blank cells, NaN/Inf,
/// ragged rows and anything strtod does not consume completely (so locale
/// decimal commas and thousands separators fail loudly).
CsvTable parse_csv(const std::string& text, const CsvOptions& opts = {});
CsvTable read_csv(const std::string& path, const CsvOptions& opts = {});

/// %.17g, so a double survives a write/read cycle unchanged.
std::string format_number(double v);

/// Same layout as nlohmann's dump, but every floating point number is
/// printed with 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Current UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string version;
    std::string input_digest;  ///< hex FNV-1a over all input files, in argument order
    std::string started_at;
    std::string finished_at;

    nlohmann::json to_json() const;
};

const char* library_version() noexcept;

}  // namespace hdspc
