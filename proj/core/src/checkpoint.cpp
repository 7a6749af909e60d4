#include "pxflow/checkpoint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pxflow/error.hpp"

namespace pxflow {

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

void put_f64(std::string& buf, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw Error("checkpoint truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  void bytes(char* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_.data() + pos_, n);
    pos_ += n;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& ck) {
  ck.grid.validate();
  std::string buf;
  buf.append(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_u32(buf, kCheckpointVersion);
  put_u32(buf, static_cast<std::uint32_t>(ck.grid.dim));
  for (int a = 0; a < ck.grid.dim; ++a) put_u32(buf, static_cast<std::uint32_t>(ck.grid.nodes[a]));
  for (int a = 0; a < ck.grid.dim; ++a) put_f64(buf, ck.grid.length[a]);
  put_f64(buf, ck.time);
  put_u32(buf, static_cast<std::uint32_t>(ck.fields.size()));
  for (const auto& f : ck.fields) {
    if (f.size() != ck.grid.size()) throw InvalidArgument("checkpoint field has wrong sample count");
    for (double v : f) put_f64(buf, v);
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open checkpoint for writing: " + path);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os) throw Error("failed writing checkpoint: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open checkpoint: " + path);
  Reader r(std::string(std::istreambuf_iterator<char>(is), {}));
  char magic[8];
  r.bytes(magic, 8);
  if (std::memcmp(magic, kCheckpointMagic, 8) != 0) throw Error("not a pxflow checkpoint: " + path);
  const auto version = r.u32();
  if (version != kCheckpointVersion) throw Error("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  ck.grid.dim = static_cast<int>(r.u32());
  if (ck.grid.dim != 2 && ck.grid.dim != 3) throw Error("checkpoint has invalid dimension");
  ck.grid.nodes = {1, 1, 1};
  ck.grid.length = {1.0, 1.0, 1.0};
  for (int a = 0; a < ck.grid.dim; ++a) ck.grid.nodes[a] = static_cast<int>(r.u32());
  for (int a = 0; a < ck.grid.dim; ++a) ck.grid.length[a] = r.f64();
  ck.grid.validate();
  ck.time = r.f64();
  const auto count = r.u32();
  ck.fields.resize(count);
  for (auto& f : ck.fields) {
    f.resize(ck.grid.size());
    for (auto& v : f) v = r.f64();
  }
  if (!r.done()) throw Error("trailing bytes in checkpoint: " + path);
  return ck;
}

void write_velocity_checkpoint(const std::string& path, const VectorField& u, double time) {
  Checkpoint ck;
  ck.grid = u.grid();
  ck.time = time;
  for (int c = 0; c < u.components(); ++c) {
    auto comp = u.component(c);
    ck.fields.emplace_back(comp.begin(), comp.end());
  }
  write_checkpoint(path, ck);
}

VectorField read_velocity_checkpoint(const std::string& path, double* time) {
  Checkpoint ck = read_checkpoint(path);
  if (static_cast<int>(ck.fields.size()) != ck.grid.dim) {
    throw Error("velocity checkpoint must hold one field per component");
  }
  VectorField u(ck.grid);
  for (int c = 0; c < ck.grid.dim; ++c) std::copy(ck.fields[c].begin(), ck.fields[c].end(), u.component(c).begin());
  if (time != nullptr) *time = ck.time;
  return u;
}

}  // namespace pxflow
