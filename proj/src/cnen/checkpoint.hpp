// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cnen/encoder.hpp"

namespace cnen {

// Parameter checkpoint, little endian:
//   "CNEP" | u32 version=1 | u32 tensor_count
//   per tensor: u32 name_len | name | u64 rows | u64 cols | f64[rows*cols]
// Tensors appear in ModelParams::for_each order; loading matches by name
// and checks shapes against the expected dimensions.
std::vector<std::uint8_t> encode_checkpoint(const ModelParams& params);
ModelParams decode_checkpoint(const std::vector<std::uint8_t>& bytes,
                              const ModelDims& dims);

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path, const ModelDims& dims);

}  // namespace cnen
