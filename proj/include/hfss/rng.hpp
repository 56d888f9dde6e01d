// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <array>
#include <cstdint>

namespace hfss {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static counter_type generate(counter_type ctr, key_type key);
};

std::uint64_t splitmix64(std::uint64_t x);

// Labels for derived streams. The derivation scheme is
//   child = splitmix64(parent ^ splitmix64(label * 0x9E3779B97F4A7C15 + index))
// and is part of the reproducibility contract; do not renumber.
enum class StreamLabel : std::uint64_t {
    atoms = 1,
    gaussian_coefficients = 2,
    component = 3,
    replication = 4,
};

std::uint64_t derive_seed(std::uint64_t parent, StreamLabel label, std::uint64_t index);

// Random access view of one stream: block b yields four 32-bit words, i.e.
// two open-interval uniforms.
class CounterStream {
public:
    explicit CounterStream(std::uint64_t seed, std::uint64_t substream = 0);

    Philox4x32::counter_type block(std::uint64_t b) const;

    // Two uniforms in (0, 1) from block b.
    std::array<double, 2> uniforms(std::uint64_t b) const;

    // Two independent standard normals from block b (Box-Muller).
    std::array<double, 2> normals(std::uint64_t b) const;

private:
    Philox4x32::key_type key_;
    std::uint32_t sub_lo_, sub_hi_;
};

// 52-bit uniform in (0, 1) from two 32-bit words; both endpoints excluded.
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t x = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
    return (static_cast<double>(x) + 0.5) * 0x1.0p-52;
}

}  // namespace hfss
