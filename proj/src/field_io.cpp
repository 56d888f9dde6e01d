// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/field_io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hfss/error.hpp"
#include "json.hpp"

namespace hfss {

namespace {

using nlohmann::json;

constexpr int supported_major = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint64_t get_le(std::string_view s, std::size_t at, int bytes) {
    std::uint64_t v = 0;
    for (int b = 0; b < bytes; ++b) v |= std::uint64_t(static_cast<unsigned char>(s[at + b])) << (8 * b);
    return v;
}

int major_of(const std::string& version) {
    try {
        return std::stoi(version.substr(0, version.find('.')));
    } catch (const std::exception&) {
        fail(ErrorKind::version_mismatch, "unreadable format version '" + version + "'");
    }
}

std::string frame(std::string_view magic, const json& header, std::size_t payload_bytes) {
    const std::string h = header.dump();
    std::string out;
    out.reserve(magic.size() + 4 + h.size() + payload_bytes);
    out.append(magic);
    put_u32(out, static_cast<std::uint32_t>(h.size()));
    out.append(h);
    return out;
}

// Returns the parsed header and the payload offset.
std::pair<json, std::size_t> unframe(std::string_view bytes, std::string_view magic) {
    if (bytes.size() < magic.size() || bytes.substr(0, magic.size()) != magic)
        fail(ErrorKind::bad_magic, "missing " + std::string(magic) + " magic");
    if (bytes.size() < magic.size() + 4) fail(ErrorKind::truncated_payload, "file ends inside the header length");
    const std::size_t hlen = get_le(bytes, magic.size(), 4);
    const std::size_t start = magic.size() + 4;
    if (bytes.size() < start + hlen) fail(ErrorKind::truncated_payload, "file ends inside the JSON header");
    json header;
    try {
        header = json::parse(bytes.substr(start, hlen));
    } catch (const json::exception& e) {
        fail(ErrorKind::truncated_payload, std::string("unreadable JSON header: ") + e.what());
    }
    if (!header.is_object() || !header.contains("version"))
        fail(ErrorKind::version_mismatch, "header carries no version");
    const std::string version = header["version"].get<std::string>();
    if (major_of(version) > supported_major)
        fail(ErrorKind::version_mismatch, "file version " + version + " is newer than this reader");
    return {std::move(header), start + hlen};
}

template <class T>
T field_of(const json& h, const char* key) {
    try {
        return h.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::truncated_payload, std::string("header field '") + key + "' missing or malformed");
    }
}

}  // namespace

std::string encode_field(const FieldGrid& f) {
    const std::size_t count = f.grid.size() * f.meta.d;
    require(f.values.size() == count, "field values do not match grid size x components");
    json h;
    h["shape"] = f.grid.shape;
    h["lower"] = f.grid.lower;
    h["upper"] = f.grid.upper;
    h["hurst"] = f.meta.H.values();
    h["alpha"] = f.meta.alpha;
    h["n"] = f.meta.n;
    h["M"] = f.meta.M;
    h["seed"] = f.meta.seed;
    h["atom_count"] = f.meta.atom_count;
    h["theta"] = f.meta.theta;
    h["d"] = f.meta.d;
    h["engine"] = f.meta.engine;
    h["law"] = f.meta.law;
    h["version"] = f.meta.version;
    h["run_id"] = f.meta.run_id;
    std::string out = frame(field_magic, h, 8 * count);
    for (double v : f.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

FieldGrid decode_field(std::string_view bytes) {
    const auto [h, at] = unframe(bytes, field_magic);
    FieldGrid f;
    f.grid.shape = field_of<std::vector<std::size_t>>(h, "shape");
    f.grid.lower = field_of<std::vector<double>>(h, "lower");
    f.grid.upper = field_of<std::vector<double>>(h, "upper");
    const auto H = field_of<std::vector<double>>(h, "hurst");
    if (!H.empty()) f.meta.H = HurstVector(H);
    f.meta.alpha = field_of<double>(h, "alpha");
    f.meta.n = field_of<int>(h, "n");
    f.meta.M = field_of<double>(h, "M");
    f.meta.seed = field_of<std::uint64_t>(h, "seed");
    f.meta.atom_count = field_of<std::size_t>(h, "atom_count");
    f.meta.theta = field_of<double>(h, "theta");
    f.meta.d = field_of<std::size_t>(h, "d");
    f.meta.engine = field_of<std::string>(h, "engine");
    f.meta.law = field_of<std::string>(h, "law");
    f.meta.version = field_of<std::string>(h, "version");
    f.meta.run_id = field_of<std::string>(h, "run_id");
    if (f.grid.shape.empty() || f.grid.lower.size() != f.grid.N() || f.grid.upper.size() != f.grid.N())
        fail(ErrorKind::truncated_payload, "header grid is inconsistent");
    const std::size_t count = f.grid.size() * f.meta.d;
    if (bytes.size() - at != 8 * count)
        fail(ErrorKind::truncated_payload, "payload length does not match the header shape");
    f.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) f.values[i] = std::bit_cast<double>(get_le(bytes, at + 8 * i, 8));
    return f;
}

void write_field(const std::string& path, const FieldGrid& field) { write_file_atomic(path, encode_field(field)); }

FieldGrid read_field(const std::string& path) { return decode_field(read_file(path)); }

std::string encode_coefficients(const CoefficientTensor& t) {
    json h;
    h["seed"] = t.seed;
    h["n"] = t.truncation.n;
    h["M"] = t.truncation.M;
    h["alpha"] = t.alpha;
    h["hurst"] = t.H.values();
    h["N"] = t.N;
    h["kmax"] = t.truncation.kmax();
    h["count"] = t.entries.size();
    h["atom_count"] = t.atom_count;
    h["version"] = software_version;
    std::string out = frame(coeff_magic, h, 8 * t.entries.size());
    for (const cplx& z : t.entries) {
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(z.real())));
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(z.imag())));
    }
    return out;
}

CoefficientTensor decode_coefficients(std::string_view bytes) {
    const auto [h, at] = unframe(bytes, coeff_magic);
    CoefficientTensor t;
    t.seed = field_of<std::uint64_t>(h, "seed");
    t.truncation.n = field_of<int>(h, "n");
    t.truncation.M = field_of<double>(h, "M");
    t.alpha = field_of<double>(h, "alpha");
    const auto H = field_of<std::vector<double>>(h, "hurst");
    if (!H.empty()) t.H = HurstVector(H);
    t.N = field_of<std::size_t>(h, "N");
    t.atom_count = field_of<std::size_t>(h, "atom_count");
    const auto count = field_of<std::size_t>(h, "count");
    if (bytes.size() - at != 8 * count) fail(ErrorKind::truncated_payload, "payload length does not match the header count");
    t.entries.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const float re = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(bytes, at + 8 * i, 4)));
        const float im = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(bytes, at + 8 * i + 4, 4)));
        t.entries[i] = cplx(re, im);
    }
    return t;
}

void write_file_atomic(const std::string& path, std::string_view bytes) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) fail(ErrorKind::io_failure, "output directory does not exist: " + dir.string());
    const fs::path tmp = dir / ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::io_failure, "cannot open " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            fail(ErrorKind::io_failure, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        fail(ErrorKind::io_failure, "rename to " + path + " failed: " + ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io_failure, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorKind::io_failure, "SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

}  // namespace hfss
