#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dispersal {

/// Header shared by every file one command writes.
struct OutputHeader {
    std::string command;
    std::string config_digest;
};

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::vector<std::string> output_paths;
    std::vector<double> snapshot_times;
    double wall_time = 0.0;
    int exit_status = 0;
};

/// Writes text to path through a temporary sibling and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Comma-separated numeric table. The file opens with '#' lines for the
/// command, the config digest and the column names; every other line is
/// data formatted with 17 significant digits.
std::string format_csv(const OutputHeader& header, const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& rows);

void write_csv(const std::filesystem::path& path, const OutputHeader& header,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

/// Numeric rows of a CSV file, skipping '#' comment lines and blank lines.
/// Throws std::runtime_error on unreadable files or non-numeric fields.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace dispersal
