#include "thue2dlite/query.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "thue2dlite/error.hpp"
#include "thue2dlite/structure.hpp"

namespace thue2dlite {

  ////////////////////////////////////////////////////////////////////////
  // ConjunctiveQuery
  ////////////////////////////////////////////////////////////////////////

  std::optional<VarId> ConjunctiveQuery::find_variable(std::string_view name) const {
    for (VarId v = 0; v < variables_.size(); ++v) {
      if (variables_[v] == name) {
        return v;
      }
    }
    return std::nullopt;
  }

  std::optional<std::size_t> ConjunctiveQuery::find_component(std::string_view id) const {
    for (std::size_t c = 0; c < components_.size(); ++c) {
      if (components_[c].id == id) {
        return c;
      }
    }
    return std::nullopt;
  }

  VarId ConjunctiveQuery::add_variable(std::string name) {
    if (find_variable(name)) {
      throw std::invalid_argument("duplicate variable '" + name + "'");
    }
    variables_.push_back(std::move(name));
    return static_cast<VarId>(variables_.size() - 1);
  }

  VarId ConjunctiveQuery::variable(std::string const& name) {
    if (auto v = find_variable(name)) {
      return *v;
    }
    return add_variable(name);
  }

  std::size_t ConjunctiveQuery::add_component(std::string id) {
    if (find_component(id)) {
      throw std::invalid_argument("duplicate component '" + id + "'");
    }
    components_.push_back({std::move(id), std::nullopt});
    return components_.size() - 1;
  }

  void ConjunctiveQuery::set_distinguished(std::size_t component, VarId v) {
    components_.at(component).distinguished = v;
  }

  namespace {
    void check_component(std::size_t c, std::size_t count) {
      if (c != kLinks && c >= count) {
        throw std::out_of_range("literal refers to an undeclared component");
      }
    }
  }  // namespace

  void ConjunctiveQuery::add_unary(std::string symbol, VarId x, std::size_t component) {
    check_component(component, components_.size());
    literals_.push_back({LiteralKind::unary, std::move(symbol), x, x, component});
  }

  void ConjunctiveQuery::add_binary(std::string symbol, VarId x, VarId y, std::size_t component) {
    check_component(component, components_.size());
    literals_.push_back({LiteralKind::binary, std::move(symbol), x, y, component});
  }

  void ConjunctiveQuery::add_inequality(VarId x, VarId y, std::size_t component) {
    check_component(component, components_.size());
    literals_.push_back({LiteralKind::inequality, {}, x, y, component});
  }

  void ConjunctiveQuery::add_negated(std::string symbol, VarId x, VarId y, std::size_t component) {
    check_component(component, components_.size());
    literals_.push_back({LiteralKind::negated, std::move(symbol), x, y, component});
  }

  std::vector<std::size_t> ConjunctiveQuery::literals_of(std::size_t component) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < literals_.size(); ++i) {
      if (literals_[i].component == component) {
        out.push_back(i);
      }
    }
    return out;
  }

  bool is_safe(ConjunctiveQuery const& q) {
    std::vector<bool> pos(q.variables().size(), false);
    for (auto const& l : q.literals()) {
      if (l.positive()) {
        pos[l.x] = pos[l.y] = true;
      }
    }
    return std::all_of(q.literals().begin(), q.literals().end(), [&](Literal const& l) {
      return l.positive() || (pos[l.x] && pos[l.y]);
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Component naming
  ////////////////////////////////////////////////////////////////////////

  std::string component_gamma_R(std::string_view letter) {
    return "R_" + std::string(letter);
  }
  std::string component_beta_Rbar(std::string_view letter) {
    return "Rbar_" + std::string(letter);
  }
  std::string component_rule(std::size_t k) {
    return "k" + std::to_string(k);
  }
  std::string component_beta_l(std::size_t k) {
    return "l" + std::to_string(k);
  }
  std::string component_beta_r(std::size_t k) {
    return "r" + std::to_string(k);
  }

  std::string component_label(std::string_view id) {
    auto rest = [&](std::size_t n) { return std::string(id.substr(n)); };
    auto all_digits = [](std::string_view s) {
      return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      });
    };
    if (id == kComponentDiamond) {
      return "◇";
    }
    if (id.starts_with("Rbar_")) {
      return "bar(" + rest(5) + ")";
    }
    if (id.starts_with("R_")) {
      return rest(2);
    }
    if (id.size() > 1 && all_digits(id.substr(1))) {
      switch (id.front()) {
        case 'k':
          return rest(1);
        case 'l':
          return "[l," + rest(1) + "]";
        case 'r':
          return "[r," + rest(1) + "]";
        default:
          break;
      }
    }
    return std::string(id);
  }

  ////////////////////////////////////////////////////////////////////////
  // Builders
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Rebuilds q so that variables are numbered by first appearance in the
    // written form and literals are grouped by component.
    ConjunctiveQuery normalize(ConjunctiveQuery const& q) {
      ConjunctiveQuery out;
      std::vector<std::optional<VarId>> map(q.variables().size());
      auto v = [&](VarId old) {
        if (!map[old]) {
          map[old] = out.add_variable(q.variable_name(old));
        }
        return *map[old];
      };
      auto copy = [&](Literal const& l, std::size_t c) {
        switch (l.kind) {
          case LiteralKind::unary:
            out.add_unary(l.symbol, v(l.x), c);
            break;
          case LiteralKind::binary: {
            auto x = v(l.x);
            out.add_binary(l.symbol, x, v(l.y), c);
            break;
          }
          case LiteralKind::inequality: {
            auto x = v(l.x);
            out.add_inequality(x, v(l.y), c);
            break;
          }
          case LiteralKind::negated: {
            auto x = v(l.x);
            out.add_negated(l.symbol, x, v(l.y), c);
            break;
          }
        }
      };
      for (std::size_t c = 0; c < q.components().size(); ++c) {
        auto const& comp = q.components()[c];
        out.add_component(comp.id);
        if (comp.distinguished) {
          out.set_distinguished(c, v(*comp.distinguished));
        }
        for (auto i : q.literals_of(c)) {
          copy(q.literals()[i], c);
        }
      }
      for (auto i : q.literals_of(kLinks)) {
        copy(q.literals()[i], kLinks);
      }
      return out;
    }

    class ComponentBuilder {
     public:
      ComponentBuilder(ThueInstance const& inst, std::string id)
          : inst_(inst), suffix_("." + id) {
        comp_ = q_.add_component(std::move(id));
        x_    = var("x");
        q_.set_distinguished(comp_, x_);
      }

      VarId x() const {
        return x_;
      }
      VarId var(std::string const& local) {
        return q_.variable(local + suffix_);
      }
      VarId fresh() {
        return var("u" + std::to_string(++aux_));
      }

      // Path from `from` spelling w; returns its endpoint, a new variable
      // named end_local, or `from` itself when w is empty.
      VarId path(VarId from, Word const& w, std::string const& end_local) {
        if (w.empty()) {
          return from;
        }
        auto end = var(end_local);
        path_to(from, w, end);
        return end;
      }

      void path_to(VarId from, Word const& w, VarId end) {
        if (w.empty()) {
          throw std::logic_error("path_to needs a non-empty word");
        }
        auto cur = from;
        for (std::size_t i = 0; i < w.size(); ++i) {
          auto next = i + 1 == w.size() ? end : fresh();
          binary(w[i], cur, next);
          cur = next;
        }
      }

      void binary(Letter r, VarId s, VarId t) {
        q_.add_binary(inst_.alphabet.name(r), s, t, comp_);
      }
      void binary(std::string_view sym, VarId s, VarId t) {
        q_.add_binary(std::string(sym), s, t, comp_);
      }
      void unary(std::string_view sym, VarId s) {
        q_.add_unary(std::string(sym), s, comp_);
      }
      void inequality(VarId s, VarId t) {
        q_.add_inequality(s, t, comp_);
      }
      void negated(std::string_view sym, VarId s, VarId t) {
        q_.add_negated(std::string(sym), s, t, comp_);
      }

      ConjunctiveQuery finish() const {
        return normalize(q_);
      }

     private:
      ThueInstance const& inst_;
      std::string         suffix_;
      ConjunctiveQuery    q_;
      std::size_t         comp_ = 0;
      VarId               x_    = 0;
      std::size_t         aux_  = 0;
    };

    RewritePair const& rule_at(ThueInstance const& inst, std::size_t k) {
      if (k == 0 || k > inst.rule_count()) {
        throw IndexOutOfRange("rule index " + std::to_string(k) + " is not in 1.."
                              + std::to_string(inst.rule_count()));
      }
      return inst.rules[k - 1];
    }

    std::string checked_letter(ThueInstance const& inst, std::string_view letter) {
      if (!inst.alphabet.find(letter)) {
        throw UnknownSymbol(std::string(letter));
      }
      return std::string(letter);
    }

    Word prefix(Word const& w) {
      return Word(w.begin(), w.end() - 1);
    }
  }  // namespace

  ConjunctiveQuery build_gamma_k(ThueInstance const& inst, std::size_t k) {
    auto const&      rule = rule_at(inst, k);
    ComponentBuilder b(inst, component_rule(k));
    auto             y  = b.path(b.x(), rule.left, "y");
    auto             yp = b.path(b.x(), rule.right, "yp");
    b.inequality(y, yp);
    return b.finish();
  }

  ConjunctiveQuery build_gamma_R(ThueInstance const& inst, std::string_view letter) {
    auto             r = checked_letter(inst, letter);
    ComponentBuilder b(inst, component_gamma_R(r));
    auto             y = b.var("y");
    b.binary(r, b.x(), y);
    b.unary(kConceptA, y);
    return b.finish();
  }

  ConjunctiveQuery build_gamma_diamond(ThueInstance const& inst) {
    ComponentBuilder b(inst, std::string(kComponentDiamond));
    b.unary(kConceptA, b.x());
    auto y = b.path(b.x(), inst.goal_left, "y");
    if (y == b.x()) {
      throw std::invalid_argument("goal words must be non-empty");
    }
    b.path_to(b.x(), inst.goal_right, y);
    return b.finish();
  }

  ConjunctiveQuery build_beta_rk(ThueInstance const& inst, std::size_t k) {
    auto const&      rule = rule_at(inst, k);
    ComponentBuilder b(inst, component_beta_r(k));
    auto             y  = b.path(b.x(), rule.left, "y");
    auto             yp = b.path(b.x(), prefix(rule.right), "yp");
    b.negated(inst.alphabet.name(rule.right.back()), yp, y);
    return b.finish();
  }

  ConjunctiveQuery build_beta_lk(ThueInstance const& inst, std::size_t k) {
    auto const&      rule = rule_at(inst, k);
    ComponentBuilder b(inst, component_beta_l(k));
    auto             y  = b.path(b.x(), prefix(rule.left), "y");
    auto             yp = b.path(b.x(), rule.right, "yp");
    b.negated(inst.alphabet.name(rule.left.back()), y, yp);
    return b.finish();
  }

  ConjunctiveQuery build_beta_R(ThueInstance const& inst, std::string_view letter) {
    auto             r = checked_letter(inst, letter);
    ComponentBuilder b(inst, component_gamma_R(r));
    auto             y = b.var("y");
    auto             z = b.var("z");
    b.binary(kRoleT, b.x(), y);
    b.binary(r, y, z);
    b.negated(kRoleT, b.x(), z);
    return b.finish();
  }

  ConjunctiveQuery build_beta_Rbar(ThueInstance const& inst, std::string_view letter) {
    auto             r = checked_letter(inst, letter);
    ComponentBuilder b(inst, component_beta_Rbar(r));
    auto             y = b.var("y");
    auto             z = b.var("z");
    b.binary(kRoleT, b.x(), y);
    b.binary(r, z, y);
    b.negated(kRoleT, b.x(), z);
    return b.finish();
  }

  UnionQuery build_Gamma_neq(ThueInstance const& inst) {
    UnionQuery u;
    for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
      u.disjuncts.push_back(build_gamma_k(inst, k));
    }
    return u;
  }

  UnionQuery build_Gamma_neg(ThueInstance const& inst) {
    UnionQuery u;
    for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
      u.disjuncts.push_back(build_beta_lk(inst, k));
      u.disjuncts.push_back(build_beta_rk(inst, k));
    }
    return u;
  }

  UnionQuery build_Psi(ThueInstance const& inst) {
    auto u = build_Gamma_neq(inst);
    u.disjuncts.push_back(build_gamma_diamond(inst));
    return u;
  }

  UnionQuery build_Phi(ThueInstance const& inst) {
    auto u = build_Gamma_neg(inst);
    u.disjuncts.push_back(build_beta_diamond(inst));
    return u;
  }

  ConjunctiveQuery conjoin(std::vector<ConjunctiveQuery> const& parts) {
    ConjunctiveQuery out;
    for (auto const& part : parts) {
      std::vector<VarId> map;
      for (auto const& name : part.variables()) {
        auto fresh = name;
        while (out.find_variable(fresh)) {
          fresh += '\'';
        }
        map.push_back(out.add_variable(fresh));
      }
      std::vector<std::size_t> comp_map;
      for (auto const& c : part.components()) {
        auto id = c.id;
        while (out.find_component(id)) {
          id += '_';
        }
        comp_map.push_back(out.add_component(id));
        if (c.distinguished) {
          out.set_distinguished(comp_map.back(), map[*c.distinguished]);
        }
      }
      for (auto const& l : part.literals()) {
        auto c = l.component == kLinks ? kLinks : comp_map[l.component];
        switch (l.kind) {
          case LiteralKind::unary:
            out.add_unary(l.symbol, map[l.x], c);
            break;
          case LiteralKind::binary:
            out.add_binary(l.symbol, map[l.x], map[l.y], c);
            break;
          case LiteralKind::inequality:
            out.add_inequality(map[l.x], map[l.y], c);
            break;
          case LiteralKind::negated:
            out.add_negated(l.symbol, map[l.x], map[l.y], c);
            break;
        }
      }
    }
    return out;
  }

  ConjunctiveQuery extract_component(ConjunctiveQuery const& q, std::size_t component) {
    auto const&      comp = q.components().at(component);
    ConjunctiveQuery out;
    out.add_component(comp.id);
    auto v = [&](VarId old) { return out.variable(q.variable_name(old)); };
    if (comp.distinguished) {
      out.set_distinguished(0, v(*comp.distinguished));
    }
    for (auto i : q.literals_of(component)) {
      auto const& l = q.literals()[i];
      auto        x = v(l.x);
      auto        y = v(l.y);
      switch (l.kind) {
        case LiteralKind::unary:
          out.add_unary(l.symbol, x, 0);
          break;
        case LiteralKind::binary:
          out.add_binary(l.symbol, x, y, 0);
          break;
        case LiteralKind::inequality:
          out.add_inequality(x, y, 0);
          break;
        case LiteralKind::negated:
          out.add_negated(l.symbol, x, y, 0);
          break;
      }
    }
    return normalize(out);
  }

  namespace {
    std::vector<VarId> distinguished_vars(ConjunctiveQuery const& q) {
      std::vector<VarId> xs;
      for (auto const& c : q.components()) {
        xs.push_back(c.distinguished.value());
      }
      return xs;
    }
  }  // namespace

  ConjunctiveQuery build_psi(ThueInstance const& inst) {
    std::vector<ConjunctiveQuery> parts;
    for (auto const& r : inst.alphabet.names()) {
      parts.push_back(build_gamma_R(inst, r));
    }
    parts.push_back(build_gamma_diamond(inst));
    for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
      parts.push_back(build_gamma_k(inst, k));
    }
    auto q  = conjoin(parts);
    auto xs = distinguished_vars(q);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        q.add_inequality(xs[i], xs[j]);
      }
    }
    return normalize(q);
  }

  ConjunctiveQuery build_phi(ThueInstance const& inst, PhiOptions opts) {
    std::vector<ConjunctiveQuery> parts;
    for (auto const& r : inst.alphabet.names()) {
      parts.push_back(build_beta_R(inst, r));
    }
    for (auto const& r : inst.alphabet.names()) {
      parts.push_back(build_beta_Rbar(inst, r));
    }
    parts.push_back(build_beta_diamond(inst));
    for (std::size_t k = 1; k <= inst.rule_count(); ++k) {
      parts.push_back(build_beta_lk(inst, k));
      parts.push_back(build_beta_rk(inst, k));
    }
    auto q  = conjoin(parts);
    auto xs = distinguished_vars(q);
    std::vector<std::string> symbols = inst.alphabet.names();
    if (opts.negate_T) {
      symbols.emplace_back(kRoleT);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i == j) {
          continue;
        }
        for (auto const& s : symbols) {
          q.add_negated(s, xs[i], xs[j]);
        }
      }
    }
    return normalize(q);
  }

  ////////////////////////////////////////////////////////////////////////
  // .cq format
  ////////////////////////////////////////////////////////////////////////

  namespace {
    void write_literal(std::ostream& out, ConjunctiveQuery const& q, Literal const& l) {
      auto const& x = q.variable_name(l.x);
      auto const& y = q.variable_name(l.y);
      switch (l.kind) {
        case LiteralKind::unary:
          out << l.symbol << '(' << x << ")\n";
          break;
        case LiteralKind::binary:
          out << l.symbol << '(' << x << ',' << y << ")\n";
          break;
        case LiteralKind::inequality:
          out << x << " != " << y << '\n';
          break;
        case LiteralKind::negated:
          out << '!' << l.symbol << '(' << x << ',' << y << ")\n";
          break;
      }
    }

    constexpr std::string_view kDisjunctSeparator = "--- disjunct";
  }  // namespace

  std::string write_cq(ConjunctiveQuery const& q) {
    std::ostringstream out;
    for (std::size_t c = 0; c < q.components().size(); ++c) {
      auto const& comp = q.components()[c];
      out << "component " << comp.id;
      if (comp.distinguished) {
        out << " distinguished " << q.variable_name(*comp.distinguished);
      }
      out << '\n';
      for (auto i : q.literals_of(c)) {
        write_literal(out, q, q.literals()[i]);
      }
    }
    auto links = q.literals_of(kLinks);
    if (!links.empty()) {
      out << "links\n";
      for (auto i : links) {
        write_literal(out, q, q.literals()[i]);
      }
    }
    return out.str();
  }

  std::string write_ucq(UnionQuery const& u) {
    std::string out;
    for (auto const& q : u.disjuncts) {
      out += kDisjunctSeparator;
      out += '\n';
      out += write_cq(q);
    }
    return out;
  }

  namespace {
    bool is_var_char(char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
    }
    bool is_sym_char(char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    class LineParser {
     public:
      LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

      [[noreturn]] void fail(std::string const& what) const {
        throw ParseError(ParseErrorKind::syntax, {line_, pos_ + 1}, what);
      }
      void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
          ++pos_;
        }
      }
      bool at_end() {
        skip_ws();
        return pos_ == text_.size();
      }
      bool eat(std::string_view s) {
        skip_ws();
        if (text_.substr(pos_).starts_with(s)) {
          pos_ += s.size();
          return true;
        }
        return false;
      }
      void expect(std::string_view s) {
        if (!eat(s)) {
          fail("expected '" + std::string(s) + "'");
        }
      }
      std::string token(bool (*ok)(char), char const* what) {
        skip_ws();
        auto b = pos_;
        while (pos_ < text_.size() && ok(text_[pos_])) {
          ++pos_;
        }
        if (b == pos_) {
          fail(std::string("expected ") + what);
        }
        return std::string(text_.substr(b, pos_ - b));
      }
      std::string variable() {
        return token(is_var_char, "a variable");
      }
      std::string symbol() {
        return token(is_sym_char, "a symbol");
      }
      void end() {
        if (!at_end()) {
          fail("unexpected trailing text");
        }
      }
      std::size_t line() const {
        return line_;
      }

     private:
      std::string_view text_;
      std::size_t      line_;
      std::size_t      pos_ = 0;
    };

    ConjunctiveQuery parse_cq_lines(std::string_view text, std::size_t first_line) {
      ConjunctiveQuery q;
      std::size_t      current = kLinks;
      bool             in_links = false;
      bool             any      = false;
      std::vector<std::pair<std::size_t, std::size_t>> header_lines;  // comp, line

      auto ensure_component = [&]() {
        if (current == kLinks && !in_links) {
          current = q.add_component("main");
          header_lines.emplace_back(current, 0);
        }
      };

      std::size_t line = first_line, start = 0;
      while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
          end = text.size();
        }
        auto raw = text.substr(start, end - start);
        start    = end + 1;
        if (auto h = raw.find('#'); h != std::string_view::npos) {
          raw = raw.substr(0, h);
        }
        LineParser p(raw, line++);
        if (p.at_end()) {
          if (end == text.size()) {
            break;
          }
          continue;
        }
        any = true;
        if (p.eat("component ")) {
          if (in_links) {
            p.fail("components must precede the links block");
          }
          auto id = p.symbol();
          if (q.find_component(id)) {
            p.fail("duplicate component '" + id + "'");
          }
          current = q.add_component(id);
          header_lines.emplace_back(current, p.line());
          if (p.eat("distinguished ")) {
            q.set_distinguished(current, q.variable(p.variable()));
          }
          p.end();
        } else if (p.eat("links")) {
          p.end();
          in_links = true;
          current  = kLinks;
        } else if (p.eat("!")) {
          ensure_component();
          auto s = p.symbol();
          p.expect("(");
          auto x = q.variable(p.variable());
          p.expect(",");
          auto y = q.variable(p.variable());
          p.expect(")");
          p.end();
          q.add_negated(s, x, y, current);
        } else {
          ensure_component();
          // Either S(x[,y]) or x != y: both start with a token.
          auto first = p.variable();
          if (p.eat("!=")) {
            auto x = q.variable(first);
            auto y = q.variable(p.variable());
            p.end();
            q.add_inequality(x, y, current);
          } else {
            if (!std::all_of(first.begin(), first.end(), is_sym_char)) {
              p.fail("malformed symbol '" + first + "'");
            }
            p.expect("(");
            auto x = q.variable(p.variable());
            if (p.eat(",")) {
              auto y = q.variable(p.variable());
              p.expect(")");
              p.end();
              q.add_binary(first, x, y, current);
            } else {
              p.expect(")");
              p.end();
              q.add_unary(first, x, current);
            }
          }
        }
        if (end == text.size()) {
          break;
        }
      }
      (void)any;
      // A distinguished variable must occur in its component.
      for (auto [c, hl] : header_lines) {
        auto d = q.components()[c].distinguished;
        if (!d) {
          continue;
        }
        bool found = false;
        for (auto i : q.literals_of(c)) {
          auto const& l = q.literals()[i];
          found = found || l.x == *d || l.y == *d;
        }
        if (!found) {
          throw ParseError(ParseErrorKind::syntax,
                           {hl, 1},
                           "distinguished variable '" + q.variable_name(*d)
                               + "' does not occur in component '" + q.components()[c].id + "'");
        }
      }
      return normalize(q);
    }
  }  // namespace

  ConjunctiveQuery parse_cq(std::string_view text) {
    return parse_cq_lines(text, 1);
  }

  UnionQuery parse_ucq(std::string_view text) {
    UnionQuery  u;
    // Split on separator lines.
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // offset, line
    std::size_t line = 1, start = 0;
    std::size_t preamble_end = std::string_view::npos;
    std::vector<std::size_t> ends;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      auto raw     = text.substr(start, end - start);
      auto trimmed = raw;
      while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) {
        trimmed.remove_suffix(1);
      }
      if (trimmed == kDisjunctSeparator) {
        if (blocks.empty()) {
          preamble_end = start;
        } else {
          ends.push_back(start);
        }
        blocks.emplace_back(end + 1 > text.size() ? text.size() : end + 1, line + 1);
      }
      start = end + 1;
      ++line;
    }
    if (blocks.empty()) {
      bool blank = true;
      for (std::size_t ln = 1, s = 0; s < text.size(); ++ln) {
        auto e = text.find('\n', s);
        if (e == std::string_view::npos) {
          e = text.size();
        }
        auto raw = text.substr(s, e - s);
        if (auto h = raw.find('#'); h != std::string_view::npos) {
          raw = raw.substr(0, h);
        }
        if (raw.find_first_not_of(" \t\r") != std::string_view::npos) {
          blank = false;
        }
        s = e + 1;
      }
      if (!blank) {
        u.disjuncts.push_back(parse_cq(text));
      }
      return u;
    }
    auto preamble = parse_cq(text.substr(0, preamble_end));
    if (!preamble.literals().empty() || !preamble.components().empty()) {
      throw ParseError(ParseErrorKind::syntax, {1, 1}, "text before the first disjunct separator");
    }
    ends.push_back(text.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      auto [off, ln] = blocks[i];
      auto stop      = std::max(off, ends[i]);
      u.disjuncts.push_back(parse_cq_lines(text.substr(off, stop - off), ln));
    }
    return u;
  }

}  // namespace thue2dlite
