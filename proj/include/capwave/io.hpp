#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "capwave/grid.hpp"
#include "json.hpp"

namespace capwave {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

// 17 significant digits, round-trip exact
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

// 8-byte little-endian count, then little-endian (re, im) doubles
void write_binary(const std::filesystem::path& path, const CVec& data);
CVec read_binary(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

// FNV-1a over the compact dump, as 16 hex digits
std::string config_hash(const Json& config);

// config.json and metadata.json (version, config hash, wall time) in dir
void write_run_files(const std::filesystem::path& dir, const Json& config, double wall_seconds);

}  // namespace capwave
