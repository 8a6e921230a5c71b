#pragma once

// Commands behind the thue2dlite executable. Each returns an exit code, a
// JSON report and a short human-readable rendering.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "thue2dlite/ontology.hpp"
#include "thue2dlite/query.hpp"
#include "thue2dlite/structure.hpp"
#include "thue2dlite/thue.hpp"

namespace thue2dlite {

  namespace exit_code {
    inline constexpr int ok          = 0;  // success / positive verdict
    inline constexpr int negative    = 1;  // negative verdict or failed check
    inline constexpr int unknown     = 2;  // nothing decided within bounds
    inline constexpr int input_error = 3;  // unreadable input, unsafe query
    inline constexpr int not_a_model = 4;  // eval: model violates ontology
    inline constexpr int usage       = 64;
  }  // namespace exit_code

  inline constexpr char const* kConfigEnvVar = "THUE2DLITE_CONFIG";

  struct Config {
    std::size_t max_word_len        = 0;  // 0: |l| + |r| + 8
    std::size_t max_expansions      = 1'000'000;
    std::size_t max_semigroup_order = 4;
    std::size_t quotient_max_len    = 8;
    std::size_t chase_depth         = 3;
    std::size_t enum_max_vertices   = 0;  // 0: 3, 2 or 1 by alphabet size
    bool        una                 = true;
    bool        pcwa                = true;
    bool        phi_negate_T        = false;
    Variant     variant             = Variant::neq;

    SearchBounds search_bounds(ThueInstance const& inst) const;
    std::size_t  enumeration_vertices(std::size_t letters) const;
    ModelCheckFlags flags() const {
      return {una, pcwa};
    }
  };

  nlohmann::json to_json(Config const& c);
  // Unknown keys and ill-typed values throw Error.
  Config config_from_json(nlohmann::json const& j, Config base = {});
  // Defaults, overridden by the file named in THUE2DLITE_CONFIG if set.
  Config config_from_env();

  struct CommandResult {
    int            exit = exit_code::ok;
    nlohmann::json report;
    std::string    text;
  };

  std::string read_file(std::filesystem::path const& p);
  // Writes through a temporary file and a rename.
  void write_file_atomic(std::filesystem::path const& p, std::string const& content);

  ////////////////////////////////////////////////////////////////////////
  // Verdicts and the structures commands share
  ////////////////////////////////////////////////////////////////////////

  enum class InstanceVerdict { positive, negative, unknown };
  char const* to_string(InstanceVerdict v);

  struct CanonicalModel {
    Structure   structure;
    std::string source;  // "quotient" or "semigroup"
    std::optional<SemigroupWitness> witness;
    std::optional<FiniteQuotient>   quotient;
  };

  struct Analysis {
    InstanceVerdict               verdict = InstanceVerdict::unknown;
    Verdict                       rewrite;
    std::optional<CanonicalModel> canonical;  // finite 𝔻 when certifiable
    std::string                   canonical_note;
  };

  // Runs the bounded rewriting search, the quotient certification and the
  // semigroup search. The canonical structure prefers the certified
  // quotient and falls back to S^1 of a separating semigroup.
  Analysis analyse(ThueInstance const& inst, Config const& cfg);

  // 𝔻 plus slots 1..n.
  Structure with_slots(Structure const& canonical, ThueInstance const& inst, Variant v);

  ConjunctiveQuery combined_query(ThueInstance const& inst, Variant v, Config const& cfg);

  ////////////////////////////////////////////////////////////////////////
  // Commands
  ////////////////////////////////////////////////////////////////////////

  CommandResult cmd_compile(ThueInstance const&          inst,
                            Variant                      v,
                            std::filesystem::path const& out_dir,
                            Config const&                cfg);
  CommandResult cmd_rewrite(ThueInstance const& inst, Config const& cfg);
  CommandResult cmd_countermodel(ThueInstance const&                         inst,
                                 Variant                                     v,
                                 std::optional<std::filesystem::path> const& out_dir,
                                 Config const&                               cfg);
  CommandResult cmd_eval(UnionQuery const&              query,
                         Structure const&               model,
                         std::optional<Ontology> const& onto,
                         Config const&                  cfg);
  CommandResult cmd_check_model(Structure const& model, Ontology const& onto, Config const& cfg);
  CommandResult cmd_verify(ThueInstance const& inst, std::string const& id, Config const& cfg);

  // Known names: ontology-iff-candidate, imperfect-implies-gamma-neq,
  // imperfect-implies-gamma-neg.
  std::vector<std::string> enumerate_checks();
  // Throws std::invalid_argument on an unknown check name.
  CommandResult cmd_enumerate(ThueInstance const& inst,
                              std::size_t         max_vertices,
                              std::string const&  check,
                              Config const&       cfg);

  // Names of the verify checks, in report order.
  std::vector<std::string> verify_check_names();

  nlohmann::json to_json(Structure const& d);
  nlohmann::json to_json(RewritePath const& p, ThueInstance const& inst);
  nlohmann::json to_json(SemigroupWitness const& w, ThueInstance const& inst);

}  // namespace thue2dlite
