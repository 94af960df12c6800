#pragma once

// Little-endian byte readers/writers for the binary file formats. Offsets are
// tracked so malformed files can be reported with the failing byte position.

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>

#include "fedsq/error.hpp"

namespace fedsq::detail {

class ByteWriter {
 public:
  explicit ByteWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw FormatError("cannot open '" + path + "' for writing");
    path_ = path;
  }

  void magic(const char (&m)[9]) { out_.write(m, 8); }
  void u32(std::uint32_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void f64(double v) { put(std::bit_cast<std::uint64_t>(v)); }

  void close() {
    out_.close();
    if (!out_) throw FormatError("write to '" + path_ + "' failed");
  }

 private:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(buf, sizeof(T));
  }

  std::ofstream out_;
  std::string path_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw FormatError("cannot open '" + path + "' for reading");
  }

  void magic(const char (&m)[9]) {
    char buf[8];
    read(buf, 8);
    for (int i = 0; i < 8; ++i) {
      if (buf[i] != m[i]) fail("bad magic");
    }
  }

  std::uint32_t u32() { return take<std::uint32_t>(); }
  std::uint64_t u64() { return take<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(take<std::uint64_t>()); }

  void expect_eof() {
    in_.peek();
    if (!in_.eof()) fail("trailing bytes");
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw FormatError("'" + path_ + "': " + msg + " at byte " + std::to_string(offset_));
  }

  std::size_t offset() const { return offset_; }

 private:
  template <typename T>
  T take() {
    unsigned char buf[sizeof(T)];
    read(reinterpret_cast<char*>(buf), sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
  }

  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated payload");
    offset_ += n;
  }

  std::ifstream in_;
  std::string path_;
  std::size_t offset_ = 0;
};

}  // namespace fedsq::detail
