#include "thermalab/cache.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "thermalab/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "spectrum cache I/O assumes a little-endian host");

namespace thermalab {

namespace {

constexpr char kMagic[4] = {'T', 'H', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kDigestSize = 32;

std::vector<unsigned char> sha256_raw(const void* data, std::size_t size) {
    std::vector<unsigned char> digest(EVP_MAX_MD_SIZE);
    unsigned int len = 0;
    if (EVP_Digest(data, size, digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw CacheCorruptError("SHA-256 computation failed");
    digest.resize(len);
    return digest;
}

void append(std::vector<char>& buf, const void* data, std::size_t size) {
    const char* p = static_cast<const char*>(data);
    buf.insert(buf.end(), p, p + size);
}

}  // namespace

std::string sha256_hex(const void* data, std::size_t size) {
    const auto digest = sha256_raw(data, size);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(digest.size() * 2);
    for (unsigned char byte : digest) {
        out.push_back(hex[byte >> 4]);
        out.push_back(hex[byte & 0xF]);
    }
    return out;
}

std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

void save_spectrum_cache(const std::filesystem::path& file, const Spectrum& spec) {
    const std::uint64_t dim = static_cast<std::uint64_t>(spec.dim());
    std::vector<char> payload;
    payload.reserve(sizeof(kMagic) + sizeof(kVersion) + sizeof(dim) +
                    dim * sizeof(double) * (1 + 2 * dim));
    append(payload, kMagic, sizeof(kMagic));
    append(payload, &kVersion, sizeof(kVersion));
    append(payload, &dim, sizeof(dim));
    append(payload, spec.energies.data(), dim * sizeof(double));
    for (std::uint64_t col = 0; col < dim; ++col) {
        for (std::uint64_t row = 0; row < dim; ++row) {
            const Complex v = spec.vectors(row, col);
            const double re = v.real(), im = v.imag();
            append(payload, &re, sizeof(re));
            append(payload, &im, sizeof(im));
        }
    }
    const auto digest = sha256_raw(payload.data(), payload.size());

    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheCorruptError("cannot open cache file for writing: " + file.string());
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.write(reinterpret_cast<const char*>(digest.data()),
              static_cast<std::streamsize>(digest.size()));
    if (!out) throw CacheCorruptError("short write to cache file: " + file.string());
}

Spectrum load_spectrum_cache(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary | std::ios::ate);
    if (!in) throw CacheCorruptError("cannot open cache file: " + file.string());
    const std::streamsize total = in.tellg();
    in.seekg(0);
    if (total < static_cast<std::streamsize>(sizeof(kMagic) + sizeof(kVersion) +
                                             sizeof(std::uint64_t) + kDigestSize))
        throw CacheCorruptError("cache file truncated: " + file.string());

    std::vector<char> bytes(static_cast<std::size_t>(total));
    in.read(bytes.data(), total);
    if (!in) throw CacheCorruptError("short read from cache file: " + file.string());

    const std::size_t payload_size = bytes.size() - kDigestSize;
    const auto digest = sha256_raw(bytes.data(), payload_size);
    if (std::memcmp(digest.data(), bytes.data() + payload_size, kDigestSize) != 0)
        throw CacheCorruptError("cache digest mismatch: " + file.string());

    std::size_t off = 0;
    if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw CacheCorruptError("cache magic mismatch: " + file.string());
    off += sizeof(kMagic);
    std::uint32_t version = 0;
    std::memcpy(&version, bytes.data() + off, sizeof(version));
    off += sizeof(version);
    if (version != kVersion) throw CacheCorruptError("unsupported cache format version");
    std::uint64_t dim = 0;
    std::memcpy(&dim, bytes.data() + off, sizeof(dim));
    off += sizeof(dim);
    const std::size_t expect =
        off + dim * sizeof(double) + dim * dim * 2 * sizeof(double) + kDigestSize;
    if (bytes.size() != expect)
        throw CacheCorruptError("cache size inconsistent with header: " + file.string());

    Spectrum spec;
    spec.energies.resize(static_cast<long>(dim));
    std::memcpy(spec.energies.data(), bytes.data() + off, dim * sizeof(double));
    off += dim * sizeof(double);
    spec.vectors.resize(static_cast<long>(dim), static_cast<long>(dim));
    std::memcpy(reinterpret_cast<char*>(spec.vectors.data()), bytes.data() + off,
                dim * dim * 2 * sizeof(double));

    for (std::uint64_t i = 1; i < dim; ++i) {
        if (spec.energies(i) < spec.energies(i - 1))
            throw CacheCorruptError("cached eigenvalues are not ascending");
    }
    spec.ortho_residual =
        (spec.vectors.adjoint() * spec.vectors -
         Eigen::MatrixXcd::Identity(static_cast<long>(dim), static_cast<long>(dim)))
            .cwiseAbs()
            .maxCoeff();
    if (spec.ortho_residual > 1e-10)
        throw CacheCorruptError("cached eigenvectors fail the orthonormality invariant");
    spec.classes = degeneracy_classes(spec.energies);
    return spec;
}

std::filesystem::path cache_path(const std::filesystem::path& dir, const std::string& kind,
                                 const std::string& key) {
    return dir / (kind + "-" + key + ".thlb");
}

}  // namespace thermalab
