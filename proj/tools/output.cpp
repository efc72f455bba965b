#include "output.hpp"

#include "starnet/error.hpp"

#include <cstdio>
#include <fstream>

namespace starnet::cli {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += table.header[c];
    }
    out += '\n';
    const bool labelled = !table.row_labels.empty();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (labelled) out += table.row_labels[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c || labelled) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

CsvTable to_table(const Trajectory& traj) {
    CsvTable t;
    t.header.push_back("t");
    for (const auto& l : traj.labels) t.header.push_back(l);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::vector<double> row{traj.times[i]};
        for (const auto& col : traj.columns) row.push_back(col[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::resource, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::resource, "write failed for '" + path.string() + "'");
}

} // namespace starnet::cli
