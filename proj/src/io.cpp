#include "hdspc/io.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "hdspc/errors.hpp"

#ifndef HDSPC_VERSION
#define HDSPC_VERSION "0.0.0"
#endif

namespace hdspc {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == delim) {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    cells.push_back(cell);
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::string where(std::size_t line, std::size_t col) {
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double parse_cell(const std::string& raw, std::size_t line, std::size_t col) {
    const std::string s = trim(raw);
    if (s.empty()) fail(ErrorKind::InputFormat, "blank cell at " + where(line, col));
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        fail(ErrorKind::InputFormat, "not a number '" + s + "' at " + where(line, col));
    }
    if (!std::isfinite(v) || errno == ERANGE) {
        fail(ErrorKind::InputFormat, "non-finite value '" + s + "' at " + where(line, col));
    }
    return v;
}

void dump_value(const nlohmann::json& j, int indent, int depth, std::string& out) {
    const bool pretty = indent >= 0;
    auto newline = [&](int d) {
        if (!pretty) return;
        out.push_back('\n');
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out.push_back('{');
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out.push_back(',');
                first = false;
                newline(depth + 1);
                out += nlohmann::json(it.key()).dump();
                out += pretty ? ": " : ":";
                dump_value(it.value(), indent, depth + 1, out);
            }
            newline(depth);
            out.push_back('}');
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out.push_back('[');
            bool first = true;
            for (const auto& v : j) {
                if (!first) out.push_back(',');
                first = false;
                newline(depth + 1);
                dump_value(v, indent, depth + 1, out);
            }
            newline(depth);
            out.push_back(']');
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_number(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

CsvTable parse_csv(const std::string& text, const CsvOptions& opts) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    CsvTable table;
    std::size_t lineno = 0;
    std::size_t width = 0;
    bool pending_blank = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) {
            pending_blank = true;
            continue;
        }
        if (pending_blank) fail(ErrorKind::InputFormat, "blank line before line " + std::to_string(lineno));
        auto cells = split_line(line, opts.delimiter);
        if (width == 0) width = cells.size();
        if (cells.size() != width) {
            fail(ErrorKind::InputFormat, "line " + std::to_string(lineno) + " has " +
                                             std::to_string(cells.size()) + " fields, expected " +
                                             std::to_string(width));
        }
        if (opts.header && table.columns.empty() && rows.empty()) {
            for (auto& c : cells) table.columns.push_back(trim(c));
            continue;
        }
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) row[j] = parse_cell(cells[j], lineno, j + 1);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(ErrorKind::InputFormat, "no data rows");
    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return table;
}

CsvTable read_csv(const std::string& path, const CsvOptions& opts) {
    return parse_csv(read_file(path), opts);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_json(const nlohmann::json& j, int indent) {
    std::string out;
    dump_value(j, indent, 0, out);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InputFormat, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InputFormat, "cannot write '" + path + "'");
    out << contents;
    if (!out) fail(ErrorKind::InputFormat, "write to '" + path + "' failed");
}

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t state) {
    for (unsigned char ch : bytes) {
        state ^= ch;
        state *= 0x100000001b3ULL;
    }
    return state;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    return {{"command", command},         {"config", config},
            {"seed", seed},               {"version", version},
            {"input_digest", input_digest}, {"started_at", started_at},
            {"finished_at", finished_at}};
}

const char* library_version() noexcept { return HDSPC_VERSION; }

}  // namespace hdspc
