#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

// Little-endian binary stream helpers for the model file formats. Explicit
// byte order keeps files portable across hosts.

namespace reviewforge::binio {

inline void write_u8(std::ostream& out, std::uint8_t v) {
  out.put(static_cast<char>(v));
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline void write_i32(std::ostream& out, std::int32_t v) {
  write_u32(out, static_cast<std::uint32_t>(v));
}

inline void write_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  write_u64(out, bits);
}

inline void write_string(std::ostream& out, std::string_view s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint8_t read_u8(std::istream& in) {
  int c = in.get();
  if (c == EOF) throw std::runtime_error("unexpected end of model file");
  return static_cast<std::uint8_t>(c);
}

inline std::uint32_t read_u32(std::istream& in) {
  char b[4];
  if (!in.read(b, 4)) throw std::runtime_error("unexpected end of model file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

inline std::uint64_t read_u64(std::istream& in) {
  char b[8];
  if (!in.read(b, 8)) throw std::runtime_error("unexpected end of model file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  return v;
}

inline std::int32_t read_i32(std::istream& in) {
  return static_cast<std::int32_t>(read_u32(in));
}

inline double read_f64(std::istream& in) {
  std::uint64_t bits = read_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

inline std::string read_string(std::istream& in) {
  std::uint32_t len = read_u32(in);
  std::string s(len, '\0');
  if (len > 0 && !in.read(s.data(), len)) throw std::runtime_error("unexpected end of model file");
  return s;
}

}  // namespace reviewforge::binio
