#include "doctest.h"
#include "hfss/rng.hpp"

#include <cmath>

using namespace hfss;

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::counter_type;
    using K = Philox4x32::key_type;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::generate(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                               K{0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::generate(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               K{0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniforms stay in the open unit interval") {
    CHECK(uniform_open(0, 0) > 0.0);
    CHECK(uniform_open(0xffffffffu, 0xffffffffu) < 1.0);
    CounterStream s(42);
    double mean = 0.0;
    const int n = 20000;
    for (int b = 0; b < n; ++b) {
        const auto u = s.uniforms(b);
        mean += u[0] + u[1];
    }
    CHECK(std::abs(mean / (2 * n) - 0.5) < 0.01);
}

TEST_CASE("stream derivation separates labels and indices") {
    CHECK(derive_seed(7, StreamLabel::atoms, 0) != derive_seed(7, StreamLabel::component, 0));
    CHECK(derive_seed(7, StreamLabel::component, 0) != derive_seed(7, StreamLabel::component, 1));
    CHECK(derive_seed(7, StreamLabel::component, 1) == derive_seed(7, StreamLabel::component, 1));
    CounterStream a(1, 0), b(1, 1);
    CHECK(a.block(0) != b.block(0));
}
