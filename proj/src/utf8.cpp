#include "tokeval/utf8.hpp"

namespace tokeval::utf8 {

namespace {

// Returns the sequence length consumed and writes the codepoint, or 0 on
// an invalid sequence at data[0].
std::size_t decode_one(const unsigned char* data, std::size_t avail, uint32_t& cp) {
  const unsigned char b0 = data[0];
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  }
  std::size_t len;
  uint32_t min_cp;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    min_cp = 0x80;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    min_cp = 0x800;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    min_cp = 0x10000;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (avail < len) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    if ((data[i] & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (data[i] & 0x3F);
  }
  if (cp < min_cp) return 0;                       // overlong
  if (cp > 0x10FFFF) return 0;
  if (cp >= 0xD800 && cp <= 0xDFFF) return 0;      // surrogate
  return len;
}

}  // namespace

std::size_t invalid_offset(std::string_view s) {
  const auto* data = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t i = 0;
  while (i < s.size()) {
    uint32_t cp;
    std::size_t n = decode_one(data + i, s.size() - i, cp);
    if (n == 0) return i;
    i += n;
  }
  return npos;
}

std::vector<uint32_t> decode(std::string_view s) {
  std::vector<uint32_t> out;
  out.reserve(s.size());
  const auto* data = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t i = 0;
  while (i < s.size()) {
    uint32_t cp;
    std::size_t n = decode_one(data + i, s.size() - i, cp);
    if (n == 0) {
      out.push_back(0xFFFD);
      ++i;
    } else {
      out.push_back(cp);
      i += n;
    }
  }
  return out;
}

std::string encode(uint32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

std::string encode(const std::vector<uint32_t>& cps) {
  std::string out;
  out.reserve(cps.size());
  for (uint32_t cp : cps) out += encode(cp);
  return out;
}

std::vector<std::string> split(std::string_view s) {
  std::vector<std::string> out;
  const auto* data = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t i = 0;
  while (i < s.size()) {
    uint32_t cp;
    std::size_t n = decode_one(data + i, s.size() - i, cp);
    if (n == 0) n = 1;
    out.emplace_back(s.substr(i, n));
    i += n;
  }
  return out;
}

std::size_t length(std::string_view s) {
  const auto* data = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t i = 0, count = 0;
  while (i < s.size()) {
    uint32_t cp;
    std::size_t n = decode_one(data + i, s.size() - i, cp);
    i += (n == 0) ? 1 : n;
    ++count;
  }
  return count;
}

}  // namespace tokeval::utf8
