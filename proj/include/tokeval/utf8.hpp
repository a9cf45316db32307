#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tokeval::utf8 {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Byte offset of the first invalid UTF-8 sequence, or npos if valid.
// Rejects overlong encodings, surrogates and codepoints above U+10FFFF.
std::size_t invalid_offset(std::string_view s);

// Decodes to codepoints. Invalid bytes decode as U+FFFD, one per byte,
// so the function is total; validate first where strictness matters.
std::vector<uint32_t> decode(std::string_view s);

std::string encode(uint32_t cp);
std::string encode(const std::vector<uint32_t>& cps);

// Splits into per-codepoint strings (each element one codepoint).
// Invalid bytes come back verbatim as single-byte elements.
std::vector<std::string> split(std::string_view s);

// Codepoint count (invalid bytes count one each).
std::size_t length(std::string_view s);

}  // namespace tokeval::utf8
