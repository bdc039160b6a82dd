#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "vltm/errors.hpp"

namespace vltm::io {

static_assert(sizeof(double) == 8 && sizeof(float) == 4, "IEEE-754 binary32/64 layout required");

namespace detail {

template <typename Int>
void put_le(std::ostream& os, Int v) {
  unsigned char bytes[sizeof(Int)];
  for (std::size_t i = 0; i < sizeof(Int); ++i)
    bytes[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(bytes), sizeof(Int));
}

template <typename Int>
Int get_le(std::istream& is, const std::string& context) {
  unsigned char bytes[sizeof(Int)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(Int)))
    throw format_error(format_error::kind::bad_size, context + ": file truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(Int); ++i)
    v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<Int>(v);
}

}  // namespace detail

inline void put_u32(std::ostream& os, std::uint32_t v) { detail::put_le(os, v); }

inline std::uint32_t get_u32(std::istream& is, const std::string& context) {
  return detail::get_le<std::uint32_t>(is, context);
}

inline void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  detail::put_le(os, bits);
}

inline double get_f64(std::istream& is, const std::string& context) {
  const std::uint64_t bits = detail::get_le<std::uint64_t>(is, context);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

inline void put_f32(std::ostream& os, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  detail::put_le(os, bits);
}

inline float get_f32(std::istream& is, const std::string& context) {
  const std::uint32_t bits = detail::get_le<std::uint32_t>(is, context);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

inline void put_magic(std::ostream& os, const char (&magic)[5]) { os.write(magic, 4); }

/// Reads 4 magic bytes and checks them, reporting the bytes found on
/// mismatch.
inline void expect_magic(std::istream& is, const char (&magic)[5], const std::string& context) {
  char got[4];
  if (!is.read(got, 4))
    throw format_error(format_error::kind::bad_size, context + ": file shorter than its magic");
  if (std::memcmp(got, magic, 4) != 0) {
    std::string printable;
    for (char c : got)
      printable += (c >= 0x20 && c < 0x7f) ? c : '?';
    throw format_error(format_error::kind::bad_magic,
                       context + ": bad magic \"" + printable + "\", expected \"" + magic + "\"");
  }
}

/// Reads 4 bytes without consuming semantics, for format dispatch.
inline std::string peek_magic(std::istream& is) {
  char got[4];
  if (!is.read(got, 4))
    throw format_error(format_error::kind::bad_size, "file shorter than a format magic");
  return std::string(got, 4);
}

inline void expect_eof(std::istream& is, const std::string& context) {
  if (is.peek() != std::char_traits<char>::eof())
    throw format_error(format_error::kind::bad_size, context + ": trailing bytes after payload");
}

}  // namespace vltm::io
