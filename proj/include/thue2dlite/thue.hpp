#pragma once

// Thue systems: instances, the one-step rewriting relation, bounded
// equivalence search, finite quotients and separating semigroups.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace thue2dlite {

  // Index of a symbol in an Alphabet.
  using Letter = std::uint32_t;
  // A word is a sequence of letters; the empty word is valid.
  using Word = std::vector<Letter>;

  // Finite alphabet. Symbols are kept sorted by name, so letter indices and
  // iteration order are deterministic.
  class Alphabet {
   public:
    Alphabet() = default;
    // Throws std::invalid_argument on duplicate or malformed names.
    explicit Alphabet(std::vector<std::string> names);

    std::size_t size() const noexcept {
      return names_.size();
    }
    std::string const& name(Letter x) const {
      return names_.at(x);
    }
    std::vector<std::string> const& names() const noexcept {
      return names_;
    }
    std::optional<Letter> find(std::string_view name) const;

    // Single-character alphabets print as plain strings, others as
    // parenthesised tokens "(sym1)(sym2)".
    std::string format(Word const& w) const;
    // Inverse of format; throws UnknownSymbol.
    Word parse_word(std::string_view text) const;

    bool operator==(Alphabet const&) const = default;

   private:
    std::vector<std::string> names_;
  };

  bool is_valid_symbol_name(std::string_view name);

  struct RewritePair {
    Word left;
    Word right;

    bool operator==(RewritePair const&) const = default;
  };

  enum class Variant { neq, neg };

  char const* to_string(Variant v);
  std::optional<Variant> parse_variant(std::string_view text);

  struct ThueInstance {
    Alphabet                 alphabet;
    std::vector<RewritePair> rules;
    Word                     goal_left;
    Word                     goal_right;

    // Number of rules (k).
    std::size_t rule_count() const noexcept {
      return rules.size();
    }
    // Number of letters (m).
    std::size_t letter_count() const noexcept {
      return alphabet.size();
    }
    // Number of slots the reduction allocates: k+m for the inequality
    // variant, 2(k+m) for the negation variant.
    std::size_t slot_count(Variant v) const noexcept {
      auto n = rule_count() + letter_count();
      return v == Variant::neq ? n : 2 * n;
    }

    bool operator==(ThueInstance const&) const = default;
  };

  // Parses the line-oriented .thue format. Throws ParseError.
  ThueInstance parse_thue(std::string_view text);
  std::string  write_thue(ThueInstance const& inst);

  ////////////////////////////////////////////////////////////////////////
  // Rewriting
  ////////////////////////////////////////////////////////////////////////

  enum class Direction : std::uint8_t { left_to_right, right_to_left };

  char const* to_string(Direction d);

  inline Direction reversed(Direction d) noexcept {
    return d == Direction::left_to_right ? Direction::right_to_left
                                         : Direction::left_to_right;
  }

  // One application of a rule: rule_index is 0-based, position is the offset
  // of the replaced factor in the source word.
  struct RewriteStep {
    std::size_t rule_index = 0;
    std::size_t position   = 0;
    Direction   direction  = Direction::left_to_right;

    bool operator==(RewriteStep const&) const = default;
  };

  struct Neighbor {
    Word        word;
    RewriteStep step;

    bool operator==(Neighbor const&) const = default;
  };

  // Every word reachable from w by one rule application, in the order
  // (rule index, position, direction).
  std::vector<Neighbor> rewrite_neighbors(Word const&                  w,
                                          std::span<RewritePair const> rules);

  // Applies a single step; std::nullopt if the step does not match w.
  std::optional<Word> apply_step(Word const&                  w,
                                 std::span<RewritePair const> rules,
                                 RewriteStep                  step);

  // words.front() == u, words.back() == v, steps[i] rewrites words[i] into
  // words[i+1].
  struct RewritePath {
    std::vector<Word>        words;
    std::vector<RewriteStep> steps;
  };

  bool validate_path(RewritePath const&           path,
                     Word const&                  u,
                     Word const&                  v,
                     std::span<RewritePair const> rules);

  struct SearchBounds {
    std::size_t max_word_len   = 0;
    std::size_t max_expansions = 1'000'000;
  };

  // Default length cap: |l| + |r| + 8.
  SearchBounds default_bounds(ThueInstance const& inst);

  enum class Exhausted {
    // Both frontiers emptied and no word was discarded for length: the
    // equivalence class of u was explored completely.
    class_closed,
    // Frontiers emptied, but some neighbours were longer than max_word_len.
    word_length,
    // max_expansions reached.
    expansions,
  };

  char const* to_string(Exhausted e);

  struct BoundReport {
    Exhausted   reason;
    std::size_t expansions = 0;
    std::size_t visited    = 0;
  };

  struct Equivalent {
    RewritePath path;
  };

  struct Unknown {
    BoundReport report;
  };

  using Verdict = std::variant<Equivalent, Unknown>;

  // Bidirectional breadth-first search restricted to words of length at most
  // bounds.max_word_len. Sound but necessarily incomplete.
  Verdict decide_equiv_bounded(Word const&                  u,
                               Word const&                  v,
                               std::span<RewritePair const> rules,
                               SearchBounds                 bounds);

  ////////////////////////////////////////////////////////////////////////
  // Finite semigroups
  ////////////////////////////////////////////////////////////////////////

  using Element = std::uint32_t;

  struct SemigroupWitness {
    std::size_t          order = 0;
    std::vector<Element> table;          // row-major order x order
    std::vector<Element> generator_map;  // indexed by Letter

    Element product(Element x, Element y) const {
      return table[x * order + y];
    }

    bool operator==(SemigroupWitness const&) const = default;
  };

  // Image of a non-empty word under the homomorphism extending
  // generator_map. Throws std::invalid_argument on the empty word.
  Element eval_in_semigroup(Word const& w, SemigroupWitness const& witness);

  bool is_associative(SemigroupWitness const& witness);

  // Empty string when the witness certifies inst negative, otherwise a
  // description of the first broken invariant.
  std::string check_witness(ThueInstance const& inst, SemigroupWitness const& w);

  // Exhaustive search over multiplication tables of order 1..max_order in
  // lexicographic order, then over generator assignments in lexicographic
  // order. Returns the first witness found.
  std::optional<SemigroupWitness>
  find_separating_semigroup(ThueInstance const& inst, std::size_t max_order);

  // Calls f on every associative table of the given order (generator_map
  // left empty), in lexicographic order. Stops early when f returns false.
  void for_each_semigroup(std::size_t                                    order,
                          std::function<bool(SemigroupWitness const&)> const& f);

  ////////////////////////////////////////////////////////////////////////
  // Finite quotients of A* by the rewriting congruence
  ////////////////////////////////////////////////////////////////////////

  // A certified finite quotient: classes are numbered in shortlex order of
  // their least representative, so class 0 is [ε].
  struct FiniteQuotient {
    std::vector<Word>                     representatives;
    std::vector<std::vector<std::size_t>> successor;  // [class][letter]

    std::size_t size() const noexcept {
      return representatives.size();
    }
    std::size_t class_of(Word const& w) const;
  };

  // Congruence closure over the words of length <= max_len, followed by a
  // closure check. Throws NotClosedAtBound when the quotient cannot be
  // certified at this bound.
  FiniteQuotient certify_quotient(ThueInstance const& inst, std::size_t max_len);

}  // namespace thue2dlite
