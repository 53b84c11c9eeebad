#include "dpcjam/sample_io.hpp"

#include <array>
#include <cstring>
#include <fstream>

namespace dpcjam {

namespace {

const std::array<Component, kSampleComponents> kOrder = {Component::X, Component::S,
                                                         Component::J, Component::Z,
                                                         Component::Y, Component::U};

void put_u32(std::ostream& os, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  os.write(b, 4);
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t v;
  std::memcpy(&v, &x, sizeof v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  os.write(b, 8);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double x;
  std::memcpy(&x, &v, sizeof x);
  return x;
}

}  // namespace

void write_samples(const std::string& path, const SampleBatch& batch) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open for writing: " + path);
  put_u32(os, kSampleMagic);
  put_u32(os, kSampleVersion);
  put_u32(os, static_cast<std::uint32_t>(batch.N));
  put_u32(os, static_cast<std::uint32_t>(batch.n));
  put_u32(os, kSampleComponents);
  put_u32(os, batch.base == LogBase::Bits ? 0u : 1u);
  put_u32(os, static_cast<std::uint32_t>(batch.seed & 0xFFFFFFFFu));
  put_u32(os, static_cast<std::uint32_t>(batch.seed >> 32));
  for (Component c : kOrder) {
    const Matrix& m = batch.component(c);
    for (int i = 0; i < batch.n; ++i) {
      for (int k = 0; k < batch.N; ++k) put_f64(os, m(k, i));
    }
  }
  os.flush();
  if (!os) throw Error("write failed: " + path);
}

SampleBatch read_samples(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open for reading: " + path);
  std::array<std::uint32_t, 8> header{};
  for (auto& w : header) w = get_u32(is);
  if (!is) throw Error("truncated header: " + path);
  if (header[0] != kSampleMagic) throw Error("bad magic: " + path);
  if (header[1] != kSampleVersion) throw Error("unsupported version: " + path);
  if (header[4] != kSampleComponents) throw Error("unexpected component count: " + path);
  SampleBatch batch;
  batch.N = static_cast<int>(header[2]);
  batch.n = static_cast<int>(header[3]);
  batch.base = header[5] == 0 ? LogBase::Bits : LogBase::Nats;
  batch.seed = static_cast<std::uint64_t>(header[6]) | (static_cast<std::uint64_t>(header[7]) << 32);
  Matrix* targets[] = {&batch.X, &batch.S, &batch.J, &batch.Z, &batch.Y, &batch.U};
  for (Matrix* m : targets) {
    m->resize(batch.N, batch.n);
    for (int i = 0; i < batch.n; ++i) {
      for (int k = 0; k < batch.N; ++k) (*m)(k, i) = get_f64(is);
    }
  }
  if (!is) throw Error("truncated data: " + path);
  return batch;
}

}  // namespace dpcjam
