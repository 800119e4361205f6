#include "core/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fdi {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_serialize(const CsvTable& table) {
    std::ostringstream out;
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw IoError("csv row width does not match header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

void csv_write(const std::string& path, const CsvTable& table) {
    write_file(path, csv_serialize(table));
}

CsvTable csv_read(const std::string& path) {
    std::string text = read_file(path);
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty csv: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) table.header.push_back(cell);
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream rs(line);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            char* end = nullptr;
            double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw IoError(path + ":" + std::to_string(line_no) + ": '" + cell +
                              "' is not a number");
            row.push_back(v);
        }
        if (row.size() != table.header.size())
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": row width does not match header");
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string csv_drop_last_column(const std::string& csv) {
    std::string out;
    out.reserve(csv.size());
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.rfind(',');
        if (pos != std::string::npos) line.erase(pos);
        out += line;
        out += '\n';
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace fdi
