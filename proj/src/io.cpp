#include "capwave/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace capwave {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, mode | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream is(path, mode);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return is;
}

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
        std::memcpy(&v, b, sizeof(T));
    }
    return v;
}

template <class T>
void put(std::ostream& os, T v) {
    v = to_little(v);
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("binary file truncated");
    return to_little(v);
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    auto os = open_out(path);
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw std::invalid_argument("write_csv: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

CsvTable read_csv(const std::filesystem::path& path) {
    auto is = open_in(path);
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) return t;
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) t.header.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        t.rows.push_back(std::move(row));
    }
    return t;
}

void write_binary(const std::filesystem::path& path, const CVec& data) {
    auto os = open_out(path, std::ios::out | std::ios::binary);
    put<std::uint64_t>(os, data.size());
    for (const cplx& z : data) {
        put<double>(os, z.real());
        put<double>(os, z.imag());
    }
}

CVec read_binary(const std::filesystem::path& path) {
    auto is = open_in(path, std::ios::in | std::ios::binary);
    const auto n = get<std::uint64_t>(is);
    CVec out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double re = get<double>(is);
        out.emplace_back(re, get<double>(is));
    }
    return out;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path) {
    auto is = open_in(path);
    return Json::parse(is);
}

std::string config_hash(const Json& config) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_run_files(const std::filesystem::path& dir, const Json& config, double wall_seconds) {
    std::filesystem::create_directories(dir);
    write_json(dir / "config.json", config);
    Json meta;
    meta["version"] = kVersion;
    meta["config_hash"] = config_hash(config);
    meta["wall_time_s"] = wall_seconds;
    write_json(dir / "metadata.json", meta);
}

}  // namespace capwave
