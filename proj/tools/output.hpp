// output.hpp — deterministic CSV formatting

#pragma once

#include "starnet/dynamics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace starnet::cli {

// 17 significant digits, round-trip exact; identical input gives identical bytes.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> row_labels; // optional first column, header[0] names it
};

std::string to_csv(const CsvTable& table);
CsvTable to_table(const Trajectory& traj);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace starnet::cli
