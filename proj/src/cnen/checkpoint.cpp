// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>

namespace cnen {
namespace {

constexpr char kMagic[4] = {'C', 'N', 'E', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_u(const std::vector<std::uint8_t>& in, std::size_t& pos, int bytes) {
  if (pos + static_cast<std::size_t>(bytes) > in.size())
    throw DataError("checkpoint truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i)
    v |= static_cast<std::uint64_t>(in[pos + static_cast<std::size_t>(i)]) << (8 * i);
  pos += static_cast<std::size_t>(bytes);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const ModelParams& params) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u(out, kVersion, 4);
  std::uint32_t count = 0;
  params.for_each([&](const std::string&, const RowMatrix&) { ++count; });
  put_u(out, count, 4);
  params.for_each([&](const std::string& name, const RowMatrix& t) {
    put_u(out, name.size(), 4);
    out.insert(out.end(), name.begin(), name.end());
    put_u(out, static_cast<std::uint64_t>(t.rows()), 8);
    put_u(out, static_cast<std::uint64_t>(t.cols()), 8);
    for (Eigen::Index i = 0; i < t.size(); ++i)
      put_u(out, std::bit_cast<std::uint64_t>(t.data()[i]), 8);
  });
  return out;
}

ModelParams decode_checkpoint(const std::vector<std::uint8_t>& in, const ModelDims& dims) {
  if (in.size() < 12 || std::memcmp(in.data(), kMagic, 4) != 0)
    throw DataError("not a parameter checkpoint");
  std::size_t pos = 4;
  if (get_u(in, pos, 4) != kVersion) throw DataError("unsupported checkpoint version");
  const auto count = get_u(in, pos, 4);
  std::map<std::string, RowMatrix> tensors;
  for (std::uint64_t k = 0; k < count; ++k) {
    const auto len = get_u(in, pos, 4);
    if (pos + len > in.size()) throw DataError("checkpoint truncated");
    std::string name(in.begin() + static_cast<std::ptrdiff_t>(pos),
                     in.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
    const auto rows = static_cast<Eigen::Index>(get_u(in, pos, 8));
    const auto cols = static_cast<Eigen::Index>(get_u(in, pos, 8));
    if (static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols) * 8 > in.size() - pos)
      throw DataError("checkpoint truncated");
    RowMatrix t(rows, cols);
    for (Eigen::Index i = 0; i < t.size(); ++i)
      t.data()[i] = std::bit_cast<double>(get_u(in, pos, 8));
    tensors.emplace(std::move(name), std::move(t));
  }
  ModelParams p = ModelParams::zeros(dims);
  p.for_each([&](const std::string& name, RowMatrix& t) {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw DataError("checkpoint lacks tensor '" + name + "'");
    if (it->second.rows() != t.rows() || it->second.cols() != t.cols())
      throw DataError("checkpoint tensor '" + name + "' has the wrong shape");
    t = it->second;
  });
  if (tensors.size() != count || count != static_cast<std::uint64_t>(std::distance(
                                               tensors.begin(), tensors.end())))
    throw DataError("checkpoint has duplicate tensors");
  return p;
}

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

ModelParams load_checkpoint(const std::filesystem::path& path, const ModelDims& dims) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
  return decode_checkpoint(bytes, dims);
}

}  // namespace cnen
