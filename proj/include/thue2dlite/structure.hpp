#pragma once

// Finite relational structures over the signature made of the alphabet
// letters (binary), the unary symbol A and the binary symbol T.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thue2dlite/thue.hpp"

namespace thue2dlite {

  using VertexId = std::uint32_t;

  // Binary relation index: letters are 0..m-1, T is m.
  using RoleId = std::uint32_t;

  inline constexpr std::string_view kConceptA = "A";
  inline constexpr std::string_view kRoleT    = "T";

  struct Signature {
    Alphabet letters;

    std::size_t letter_count() const noexcept {
      return letters.size();
    }
    std::size_t role_count() const noexcept {
      return letters.size() + 1;
    }
    RoleId t_role() const noexcept {
      return static_cast<RoleId>(letters.size());
    }
    std::optional<RoleId> role(std::string_view name) const;
    std::string           role_name(RoleId r) const;

    bool operator==(Signature const&) const = default;
  };

  Signature signature_of(ThueInstance const& inst);

  class Structure {
   public:
    explicit Structure(Signature sig, std::size_t vertices = 0);

    Signature const& signature() const noexcept {
      return sig_;
    }
    std::size_t size() const noexcept {
      return n_;
    }

    VertexId add_vertex();
    void     add_vertices(std::size_t count);

    bool has_A(VertexId v) const {
      return a_[v] != 0;
    }
    void set_A(VertexId v, bool value = true);

    bool has_edge(RoleId r, VertexId s, VertexId t) const {
      return adj_[r][s * n_ + t] != 0;
    }
    void set_edge(RoleId r, VertexId s, VertexId t, bool value = true);

    std::vector<VertexId>                      successors(RoleId r, VertexId s) const;
    std::vector<VertexId>                      predecessors(RoleId r, VertexId t) const;
    std::vector<std::pair<VertexId, VertexId>> edges(RoleId r) const;
    std::vector<VertexId>                      A_vertices() const;
    std::size_t                                fact_count() const;

    void                    set_constant(std::string name, VertexId v);
    std::optional<VertexId> constant(std::string_view name) const;
    std::map<std::string, VertexId, std::less<>> const& constants() const noexcept {
      return constants_;
    }

    bool operator==(Structure const&) const = default;

   private:
    void check_vertex(VertexId v) const;

    Signature                              sig_;
    std::size_t                            n_ = 0;
    std::vector<std::uint8_t>              a_;
    std::vector<std::vector<std::uint8_t>> adj_;  // [role][s * n + t]
    std::map<std::string, VertexId, std::less<>> constants_;
  };

  // Name of the constant the reduction's core ontology asserts facts about.
  inline constexpr std::string_view kConstantA = "a";
  std::string slot_b(std::size_t n);
  std::string slot_c(std::size_t n);

  ////////////////////////////////////////////////////////////////////////
  // Candidate structures
  ////////////////////////////////////////////////////////////////////////

  enum class CandidateCondition { p1, p2, p3 };

  struct CandidateViolation {
    CandidateCondition condition;
    VertexId           vertex;
    std::string        symbol;  // missing fact's symbol ("A", "T" or a letter)

    bool operator==(CandidateViolation const&) const = default;
  };

  struct CandidateReport {
    std::vector<CandidateViolation> violations;
    bool ok() const noexcept {
      return violations.empty();
    }
  };

  // Checks (p1) at the constant a, (p2) and (p3). Throws MissingConstant.
  CandidateReport is_candidate(Structure const& d);

  ////////////////////////////////////////////////////////////////////////
  // Builders
  ////////////////////////////////////////////////////////////////////////

  // The two-vertex slot with constants b<n>, c<n>. n >= 1.
  Structure slot(std::size_t n, Signature const& sig);

  // Vertices are relabelled apart in order. Throws DuplicateConstant or
  // SignatureMismatch.
  Structure disjoint_union(std::span<Structure const> parts);

  // One vertex carrying every fact of the signature, interpreting every
  // listed constant.
  Structure well_of_positivity(Signature const& sig,
                               std::span<std::string const> constants = {});

  struct QuotientBounded {
    std::size_t max_len = 0;
  };

  using CanonicalSource = std::variant<QuotientBounded, SemigroupWitness>;

  // Finite canonical structure: either the certified quotient of A* (throws
  // NotClosedAtBound), or the monoid S^1 of a separating semigroup.
  Structure build_canonical_finite(ThueInstance const& inst, CanonicalSource const& src);
  Structure canonical_from_quotient(ThueInstance const& inst, FiniteQuotient const& q);
  Structure canonical_from_semigroup(ThueInstance const& inst, SemigroupWitness const& s);

  ////////////////////////////////////////////////////////////////////////
  // Walks and perfection
  ////////////////////////////////////////////////////////////////////////

  // Endpoints of the paths from start spelling w, sorted.
  std::vector<VertexId> walk(Structure const& d, VertexId start, Word const& w);

  // Vertices reachable from start along letter edges (start included),
  // sorted.
  std::vector<VertexId> reachable(Structure const& d, VertexId start);

  struct Imperfection {
    VertexId    vertex;
    std::size_t rule_index;  // 0-based
    // left_to_right: some l_k-endpoint is not an r_k-endpoint.
    Direction direction;
  };

  struct PerfectionReport {
    std::optional<Imperfection> imperfection;
    std::size_t                 reachable_count = 0;

    bool perfect() const noexcept {
      return !imperfection.has_value();
    }
  };

  // Throws MissingConstant.
  PerfectionReport is_perfect(Structure const& d, std::span<RewritePair const> rules);

  ////////////////////////////////////////////////////////////////////////
  // Enumeration
  ////////////////////////////////////////////////////////////////////////

  inline constexpr std::size_t kDefaultEnumerationCeiling = 4;

  using StructureVisitor = std::function<void(Structure const&)>;

  // Every structure with 1..max_vertices vertices and constant a at vertex 0.
  // Returns the number visited. Throws CeilingExceeded.
  std::size_t for_each_structure(Signature const&        sig,
                                 std::size_t             max_vertices,
                                 StructureVisitor const& visit,
                                 std::size_t ceiling = kDefaultEnumerationCeiling);

  // The candidate structures among the above, generated directly.
  std::size_t enumerate_candidate_structures(
      Signature const&        sig,
      std::size_t             max_vertices,
      StructureVisitor const& visit,
      std::size_t             ceiling = kDefaultEnumerationCeiling);

  ////////////////////////////////////////////////////////////////////////
  // .struct text format
  ////////////////////////////////////////////////////////////////////////

  std::string write_struct(Structure const& d);
  // Throws ParseError.
  Structure parse_struct(std::string_view text);

}  // namespace thue2dlite
