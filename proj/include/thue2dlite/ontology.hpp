#pragma once

// DL-Lite_core ontologies over the signature {A} ∪ letters ∪ {T}: axioms,
// the reduction's ontologies, model checking and a bounded chase.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "thue2dlite/structure.hpp"

namespace thue2dlite {

  struct BasicConcept {
    enum class Kind : std::uint8_t { atomic, exists };

    Kind        kind = Kind::atomic;
    std::string name;             // concept name, or role name for exists
    bool        inverse = false;  // exists R- (only for Kind::exists)

    static BasicConcept atomic(std::string name) {
      return {Kind::atomic, std::move(name), false};
    }
    static BasicConcept exists(std::string role, bool inverse = false) {
      return {Kind::exists, std::move(role), inverse};
    }

    auto operator<=>(BasicConcept const&) const = default;
  };

  struct ConceptAssertion {
    std::string concept_name;
    std::string constant;

    auto operator<=>(ConceptAssertion const&) const = default;
  };

  struct RoleAssertion {
    std::string role;
    std::string subject;
    std::string object;

    auto operator<=>(RoleAssertion const&) const = default;
  };

  struct Inclusion {
    BasicConcept lhs;
    BasicConcept rhs;

    auto operator<=>(Inclusion const&) const = default;
  };

  // lhs ⊑ ¬rhs
  struct DisjointInclusion {
    BasicConcept lhs;
    BasicConcept rhs;

    auto operator<=>(DisjointInclusion const&) const = default;
  };

  using Axiom = std::variant<ConceptAssertion, RoleAssertion, Inclusion, DisjointInclusion>;

  std::string format_concept(BasicConcept const& b);
  std::string format_axiom(Axiom const& a);

  struct Ontology {
    std::vector<std::string> constants;
    std::vector<Axiom>       axioms;

    // Sorts and deduplicates axioms; appends any constant used by an axiom
    // but missing from the list.
    void canonicalize();

    bool operator==(Ontology const&) const = default;
  };

  struct ModelCheckFlags {
    bool una  = false;
    bool pcwa = false;
  };

  ////////////////////////////////////////////////////////////////////////
  // Builders
  ////////////////////////////////////////////////////////////////////////

  Ontology           build_core_ontology(ThueInstance const& inst);
  std::vector<Axiom> build_Omega_n(std::size_t n, Signature const& sig);
  std::vector<Axiom> build_Omega_upto(std::size_t count, Signature const& sig);
  Ontology           build_O_neq(ThueInstance const& inst);
  Ontology           build_O_neg(ThueInstance const& inst);
  Ontology           build_O_variant(ThueInstance const& inst, Variant v);

  ////////////////////////////////////////////////////////////////////////
  // Model checking
  ////////////////////////////////////////////////////////////////////////

  enum class ViolationKind : std::uint8_t {
    assertion,    // an asserted fact does not hold
    una,          // two constants share a vertex
    inclusion,    // a vertex in lhs is not in rhs
    disjointness, // a vertex is in both sides of a negative inclusion
    pcwa,         // an unasserted fact among constant vertices
  };

  char const* to_string(ViolationKind k);

  struct ModelViolation {
    ViolationKind              kind;
    std::optional<std::size_t> axiom;   // index into Ontology::axioms
    std::optional<VertexId>    vertex;
    std::string                detail;
  };

  struct ModelReport {
    std::vector<ModelViolation> violations;

    bool ok() const noexcept {
      return violations.empty();
    }
  };

  // Throws MissingConstant when D does not interpret a constant of O.
  ModelReport check_model(Structure const& d, Ontology const& o, ModelCheckFlags flags);

  ////////////////////////////////////////////////////////////////////////
  // Chase
  ////////////////////////////////////////////////////////////////////////

  struct ChaseResult {
    Structure   structure;
    bool        fixpoint = false;  // every positive inclusion holds
    std::size_t rounds   = 0;      // rounds that added something
  };

  // Restricted breadth-first chase: one fresh vertex per violated
  // (vertex, right-hand side) per round, for at most `depth` rounds.
  ChaseResult chase(Ontology const& o, Signature const& sig, std::size_t depth);
  // Signature made of the role names the ontology mentions, T excluded.
  Signature   signature_of(Ontology const& o);

  ////////////////////////////////////////////////////////////////////////
  // .onto text format
  ////////////////////////////////////////////////////////////////////////

  std::string write_onto(Ontology const& o);
  Ontology    parse_onto(std::string_view text);  // throws ParseError

}  // namespace thue2dlite
