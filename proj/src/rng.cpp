// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#include "hfss/rng.hpp"

#include <cmath>

#include "hfss/numerics.hpp"

namespace hfss {

Philox4x32::counter_type Philox4x32::generate(counter_type ctr, key_type key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, StreamLabel label, std::uint64_t index) {
    const auto l = static_cast<std::uint64_t>(label);
    return splitmix64(parent ^ splitmix64(l * 0x9E3779B97F4A7C15ull + index));
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t substream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      sub_lo_(static_cast<std::uint32_t>(substream)),
      sub_hi_(static_cast<std::uint32_t>(substream >> 32)) {}

Philox4x32::counter_type CounterStream::block(std::uint64_t b) const {
    return Philox4x32::generate(
        {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), sub_lo_, sub_hi_}, key_);
}

std::array<double, 2> CounterStream::uniforms(std::uint64_t b) const {
    const auto w = block(b);
    return {uniform_open(w[0], w[1]), uniform_open(w[2], w[3])};
}

std::array<double, 2> CounterStream::normals(std::uint64_t b) const {
    const auto u = uniforms(b);
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double a = two_pi * u[1];
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace hfss
