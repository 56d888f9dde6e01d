// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 HFSS Project Contributors
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hfss/lepage.hpp"
#include "hfss/synthesis.hpp"

namespace hfss {

// Field files: "ZHFIELD1", u32 LE header length, UTF-8 JSON header, then the
// values as LE f64 (component-major, row-major within a component).
inline constexpr std::string_view field_magic = "ZHFIELD1";
// Coefficient files: "ZHCOEFF1", u32 LE header length, JSON header, then LE
// complex64 pairs (re, im as f32) in lexicographic (J, K) order.
inline constexpr std::string_view coeff_magic = "ZHCOEFF1";

std::string encode_field(const FieldGrid& field);
FieldGrid decode_field(std::string_view bytes);
void write_field(const std::string& path, const FieldGrid& field);
FieldGrid read_field(const std::string& path);

std::string encode_coefficients(const CoefficientTensor& tensor);
CoefficientTensor decode_coefficients(std::string_view bytes);

// Writes to a temporary file in the same directory, then renames over path.
void write_file_atomic(const std::string& path, std::string_view bytes);
std::string read_file(const std::string& path);

std::string sha256_hex(std::string_view bytes);

}  // namespace hfss
