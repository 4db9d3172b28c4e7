#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>

#include "thermalab/spectrum.hpp"

namespace thermalab {

// Hex SHA-256 of a byte buffer.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& s);

// Binary spectrum cache. Layout: magic "THLB", format version (u32),
// dimension (u64), little-endian f64 eigenvalues, interleaved re/im f64
// eigenvector matrix column-major, then the 32-byte SHA-256 of everything
// before it. Loading verifies the digest, the eigenvalue ordering, and the
// eigenvector orthonormality; any mismatch throws CacheCorruptError rather
// than recomputing silently.
void save_spectrum_cache(const std::filesystem::path& file, const Spectrum& spec);
Spectrum load_spectrum_cache(const std::filesystem::path& file);

// dir/<kind>-<key>.thlb
std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& kind,
                                 const std::string& key);

}  // namespace thermalab
