#include "dispersal/output.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <unistd.h>

#include "json.hpp"

namespace dispersal {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", tmp.string()));
        out << content;
        out.flush();
        if (!out) throw std::runtime_error(fmt::format("write failed for '{}'", tmp.string()));
    }
    fs::rename(tmp, path);
}

std::string format_csv(const OutputHeader& header, const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows) {
    std::string out = fmt::format("# command: {}\n# config_digest: {}\n# columns: {}\n",
                                  header.command, header.config_digest, fmt::join(columns, ","));
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::logic_error("csv row width does not match the column list");
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += fmt::format("{:.17g}", row[k]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const fs::path& path, const OutputHeader& header,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    write_file_atomic(path, format_csv(header, columns, rows));
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::vector<double> row;
        std::string field;
        std::istringstream fields(line);
        while (std::getline(fields, field, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(field, &used));
                if (field.find_first_not_of(" \t\r", used) != std::string::npos)
                    throw std::invalid_argument("trailing characters");
            } catch (const std::exception&) {
                throw std::runtime_error(
                    fmt::format("{}:{}: '{}' is not a number", path.string(), line_no, field));
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_manifest(const fs::path& path, const RunManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_digest"] = m.config_digest;
    j["output_paths"] = m.output_paths;
    j["snapshot_times"] = m.snapshot_times;
    j["wall_time"] = m.wall_time;
    j["exit_status"] = m.exit_status;
    write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace dispersal
