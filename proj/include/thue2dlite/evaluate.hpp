#pragma once

// Homomorphism search for conjunctive queries with inequalities and safe
// negation over finite structures.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "thue2dlite/query.hpp"
#include "thue2dlite/structure.hpp"

namespace thue2dlite {

  struct Assignment {
    std::vector<VertexId> image;  // indexed by VarId

    bool operator==(Assignment const&) const = default;
  };

  struct EvalOptions {
    // Variables forced to a given vertex.
    std::vector<std::pair<VarId, VertexId>> pinned;
  };

  // A symbol that the structure's signature does not contain denotes the
  // empty relation.
  bool literal_holds(Structure const& d, Literal const& l, Assignment const& a);

  // Total assignment satisfying every literal.
  bool satisfies(Structure const& d, ConjunctiveQuery const& q, Assignment const& a);

  // First satisfying assignment, deterministic. Throws UnsafeQuery.
  std::optional<Assignment> evaluate(Structure const&        d,
                                     ConjunctiveQuery const& q,
                                     EvalOptions const&      opts = {});

  struct UnionMatch {
    std::size_t disjunct = 0;
    Assignment  assignment;
  };

  // First satisfied disjunct in order.
  std::optional<UnionMatch> evaluate_union(Structure const& d, UnionQuery const& u);

}  // namespace thue2dlite
