#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "cylobs/grid.hpp"

namespace cylobs {

/// 17 significant digits, scientific; round-trips doubles exactly.
std::string format_value(double x);

/// Field CSV: header x1[,x2],xn,value; row-major, axial fastest.
void write_csv(const Field& u, const std::filesystem::path& path);

/// ReducedField CSV: header x1[,x2],value.
void write_csv(const ReducedField& f, const std::filesystem::path& path);

void write_text(const std::string& text, const std::filesystem::path& path);

/// FNV-1a hash used to stamp reports with their configuration.
std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::string_view data);

}  // namespace cylobs
