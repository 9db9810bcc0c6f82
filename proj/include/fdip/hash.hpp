#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fdip {

/// Streaming FNV-1a, used for scenario fingerprints and event-trace hashes.
class Fnv1a64 {
public:
  Fnv1a64& add_bytes(const void* data, std::size_t n) {
    auto p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  Fnv1a64& add(std::string_view s) { return add_bytes(s.data(), s.size()); }
  Fnv1a64& add(std::uint64_t v) { return add_bytes(&v, sizeof v); }
  Fnv1a64& add(std::int64_t v) { return add_bytes(&v, sizeof v); }

  std::uint64_t digest() const { return hash_; }

  std::string hex() const {
    static const char* k = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t h = hash_;
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = k[h & 0xf];
    return out;
  }

private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

} // namespace fdip
