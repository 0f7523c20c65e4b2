#pragma once

// "NFS1" field dump: magic "NFS1", u32 LE d, u32 LE n, f64 LE L, then n^d
// f64 LE samples in row-major order.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nfs/grid.hpp"

namespace nfs {

std::vector<std::uint8_t> encode_nfs1(const RealField& field);

/// Throws BadFieldFile on wrong magic, truncated or oversized payloads.
RealField decode_nfs1(const std::vector<std::uint8_t>& bytes, FieldRole role = FieldRole::Generic);

void write_nfs1(const std::filesystem::path& path, const RealField& field);
RealField read_nfs1(const std::filesystem::path& path, FieldRole role = FieldRole::Generic);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace nfs
