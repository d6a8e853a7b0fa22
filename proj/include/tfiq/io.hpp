#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tfiq/error.hpp"

namespace tfiq {

/// CSV numeric format: 12 significant digits, '.' decimal, no locale.
std::string format_number(double v);

/// Temp file + rename; no partially written final files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const; // -1 when absent
};

/// Reads a comma-separated table; '#' lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

} // namespace tfiq
