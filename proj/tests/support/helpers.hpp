#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "thue2dlite/harness.hpp"
#include "thue2dlite/thue.hpp"

namespace helpers {

  namespace t = thue2dlite;

  inline std::filesystem::path fixture_path(std::string_view name) {
    return std::filesystem::path(FIXTURES_DIR) / (std::string(name) + ".thue");
  }

  inline t::ThueInstance fixture(std::string_view name) {
    return t::parse_thue(t::read_file(fixture_path(name)));
  }

  inline std::vector<std::string> fixture_names() {
    return {"pos_idempotent", "pos_cubic",      "pos_commutative", "neg_free",
            "neg_cubic",      "neg_commutative", "unres_power",     "unres_long_path"};
  }

  inline std::vector<std::string> fixtures_with_prefix(std::string_view prefix) {
    std::vector<std::string> out;
    for (auto& n : fixture_names())
      if (n.starts_with(prefix)) out.push_back(n);
    return out;
  }

  inline t::ThueInstance instance(std::string_view text) {
    return t::parse_thue(text);
  }

  inline t::Word word(t::ThueInstance const& inst, std::string_view w) {
    return inst.alphabet.parse_word(w);
  }

}  // namespace helpers
