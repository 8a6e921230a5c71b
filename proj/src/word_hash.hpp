#pragma once

#include <cstddef>
#include <cstdint>

#include "thue2dlite/thue.hpp"

namespace thue2dlite {

  // FNV-1a over the letters.
  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept {
      std::uint64_t h = 1469598103934665603ULL;
      for (auto x : w) {
        h ^= x;
        h *= 1099511628211ULL;
      }
      h ^= w.size();
      return static_cast<std::size_t>(h);
    }
  };

}  // namespace thue2dlite
