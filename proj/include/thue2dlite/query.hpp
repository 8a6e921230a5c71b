#pragma once

// Boolean conjunctive queries with inequalities and safe negation, split
// into components that each carry at most one distinguished variable.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thue2dlite/thue.hpp"

namespace thue2dlite {

  using VarId = std::uint32_t;

  enum class LiteralKind : std::uint8_t {
    unary,       // S(x), S a concept name
    binary,      // S(x,y)
    inequality,  // x != y
    negated,     // !S(x,y)
  };

  // Marks literals that belong to no component (cross-component links).
  inline constexpr std::size_t kLinks = static_cast<std::size_t>(-1);

  struct Literal {
    LiteralKind kind = LiteralKind::binary;
    std::string symbol;  // empty for inequalities
    VarId       x = 0;
    VarId       y = 0;  // equals x for unary literals
    std::size_t component = kLinks;

    bool positive() const noexcept {
      return kind == LiteralKind::unary || kind == LiteralKind::binary;
    }
    bool operator==(Literal const&) const = default;
  };

  struct Component {
    std::string          id;
    std::optional<VarId> distinguished;

    bool operator==(Component const&) const = default;
  };

  class ConjunctiveQuery {
   public:
    std::vector<std::string> const& variables() const noexcept {
      return variables_;
    }
    std::vector<Literal> const& literals() const noexcept {
      return literals_;
    }
    std::vector<Component> const& components() const noexcept {
      return components_;
    }

    std::optional<VarId>       find_variable(std::string_view name) const;
    std::optional<std::size_t> find_component(std::string_view id) const;
    std::string const&         variable_name(VarId v) const {
      return variables_.at(v);
    }

    // Builder interface. Names must be unique; components must be declared
    // before their literals are added.
    VarId       add_variable(std::string name);
    VarId       variable(std::string const& name);  // find or add
    std::size_t add_component(std::string id);
    void        set_distinguished(std::size_t component, VarId v);
    void        add_unary(std::string symbol, VarId x, std::size_t component);
    void        add_binary(std::string symbol, VarId x, VarId y, std::size_t component);
    void        add_inequality(VarId x, VarId y, std::size_t component = kLinks);
    void add_negated(std::string symbol, VarId x, VarId y, std::size_t component = kLinks);

    // Literals of one component (or kLinks).
    std::vector<std::size_t> literals_of(std::size_t component) const;

    bool operator==(ConjunctiveQuery const&) const = default;

   private:
    std::vector<std::string> variables_;
    std::vector<Literal>     literals_;
    std::vector<Component>   components_;
  };

  struct UnionQuery {
    std::vector<ConjunctiveQuery> disjuncts;

    bool operator==(UnionQuery const&) const = default;
  };

  // Every variable of an inequality or negated literal occurs in a positive
  // literal.
  bool is_safe(ConjunctiveQuery const& q);

  // Component ids and labels used by the builders.
  std::string component_gamma_R(std::string_view letter);     // "R_<letter>"
  std::string component_beta_Rbar(std::string_view letter);   // "Rbar_<letter>"
  inline constexpr std::string_view kComponentDiamond = "diamond";
  std::string component_rule(std::size_t k);                  // "k<k>", 1-based
  std::string component_beta_l(std::size_t k);                // "l<k>"
  std::string component_beta_r(std::size_t k);                // "r<k>"

  // Human-readable index of a component: a letter, "◇", a rule number,
  // "bar(a)", "[l,k]" or "[r,k]".
  std::string component_label(std::string_view id);

  ////////////////////////////////////////////////////////////////////////
  // Query families. Rule indices k are 1-based; each builder returns a
  // one-component query whose variables are named <local>.<component>.
  ////////////////////////////////////////////////////////////////////////

  ConjunctiveQuery build_gamma_k(ThueInstance const& inst, std::size_t k);
  ConjunctiveQuery build_gamma_R(ThueInstance const& inst, std::string_view letter);
  ConjunctiveQuery build_gamma_diamond(ThueInstance const& inst);
  inline ConjunctiveQuery build_beta_diamond(ThueInstance const& inst) {
    return build_gamma_diamond(inst);
  }
  ConjunctiveQuery build_beta_lk(ThueInstance const& inst, std::size_t k);
  ConjunctiveQuery build_beta_rk(ThueInstance const& inst, std::size_t k);
  ConjunctiveQuery build_beta_R(ThueInstance const& inst, std::string_view letter);
  ConjunctiveQuery build_beta_Rbar(ThueInstance const& inst, std::string_view letter);

  UnionQuery build_Gamma_neq(ThueInstance const& inst);
  UnionQuery build_Gamma_neg(ThueInstance const& inst);
  UnionQuery build_Psi(ThueInstance const& inst);
  UnionQuery build_Phi(ThueInstance const& inst);

  struct PhiOptions {
    bool negate_T = false;
  };

  ConjunctiveQuery build_psi(ThueInstance const& inst);
  ConjunctiveQuery build_phi(ThueInstance const& inst, PhiOptions opts = {});

  // Conjunction of renamed-apart copies; distinguished variables of the
  // parts become the distinguished variables of the new components.
  ConjunctiveQuery conjoin(std::vector<ConjunctiveQuery> const& parts);

  // The literals of one component as a standalone one-component query.
  ConjunctiveQuery extract_component(ConjunctiveQuery const& q, std::size_t component);

  ////////////////////////////////////////////////////////////////////////
  // .cq text format
  ////////////////////////////////////////////////////////////////////////

  std::string      write_cq(ConjunctiveQuery const& q);
  std::string      write_ucq(UnionQuery const& u);
  ConjunctiveQuery parse_cq(std::string_view text);  // throws ParseError
  UnionQuery       parse_ucq(std::string_view text);

}  // namespace thue2dlite
