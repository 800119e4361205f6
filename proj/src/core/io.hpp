#pragma once

// CSV serialization and run manifests.  CSV files use LF line endings, a
// fixed header row, and floats printed with 17 significant digits so a
// written file reads back to bitwise-identical doubles.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdi {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// %.17g rendering; round-trips any finite double exactly.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;  // all rows same width as header
};

std::string csv_serialize(const CsvTable& table);
void csv_write(const std::string& path, const CsvTable& table);
CsvTable csv_read(const std::string& path);

// Drop the final comma-separated field of every line (header included).
// Used to strip the wall-clock timing column before digesting a simulation
// CSV, so the digest is reproducible across re-runs.
std::string csv_drop_last_column(const std::string& csv);

// FNV-1a over raw bytes; stable content fingerprint for manifests.
std::uint64_t fnv1a64(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace fdi
