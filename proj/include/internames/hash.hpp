#ifndef INTERNAMES_HASH_HPP
#define INTERNAMES_HASH_HPP

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace internames {

/// FNV-1a, 64 bit. Stable across platforms, unlike std::hash.
constexpr std::uint64_t
fnv1a(std::string_view data) noexcept
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string
hex64(std::uint64_t v)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

} // namespace internames

#endif // INTERNAMES_HASH_HPP
