#include "thue2dlite/structure.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "thue2dlite/error.hpp"

namespace thue2dlite {

  std::optional<RoleId> Signature::role(std::string_view name) const {
    if (name == kRoleT) {
      return t_role();
    }
    if (auto x = letters.find(name)) {
      return static_cast<RoleId>(*x);
    }
    return std::nullopt;
  }

  std::string Signature::role_name(RoleId r) const {
    return r == t_role() ? std::string(kRoleT) : letters.name(r);
  }

  Signature signature_of(ThueInstance const& inst) {
    return Signature{inst.alphabet};
  }

  std::string slot_b(std::size_t n) {
    return "b" + std::to_string(n);
  }

  std::string slot_c(std::size_t n) {
    return "c" + std::to_string(n);
  }

  ////////////////////////////////////////////////////////////////////////
  // Structure
  ////////////////////////////////////////////////////////////////////////

  Structure::Structure(Signature sig, std::size_t vertices)
      : sig_(std::move(sig)),
        n_(vertices),
        a_(vertices, 0),
        adj_(sig_.role_count(), std::vector<std::uint8_t>(vertices * vertices, 0)) {}

  void Structure::add_vertices(std::size_t count) {
    if (count == 0) {
      return;
    }
    auto m = n_ + count;
    for (auto& rel : adj_) {
      std::vector<std::uint8_t> grown(m * m, 0);
      for (std::size_t s = 0; s < n_; ++s) {
        std::copy_n(rel.begin() + s * n_, n_, grown.begin() + s * m);
      }
      rel = std::move(grown);
    }
    a_.resize(m, 0);
    n_ = m;
  }

  VertexId Structure::add_vertex() {
    add_vertices(1);
    return static_cast<VertexId>(n_ - 1);
  }

  void Structure::check_vertex(VertexId v) const {
    if (v >= n_) {
      throw std::out_of_range("vertex " + std::to_string(v) + " does not exist");
    }
  }

  void Structure::set_A(VertexId v, bool value) {
    check_vertex(v);
    a_[v] = value ? 1 : 0;
  }

  void Structure::set_edge(RoleId r, VertexId s, VertexId t, bool value) {
    check_vertex(s);
    check_vertex(t);
    adj_.at(r)[s * n_ + t] = value ? 1 : 0;
  }

  std::vector<VertexId> Structure::successors(RoleId r, VertexId s) const {
    std::vector<VertexId> out;
    for (VertexId t = 0; t < n_; ++t) {
      if (has_edge(r, s, t)) {
        out.push_back(t);
      }
    }
    return out;
  }

  std::vector<VertexId> Structure::predecessors(RoleId r, VertexId t) const {
    std::vector<VertexId> out;
    for (VertexId s = 0; s < n_; ++s) {
      if (has_edge(r, s, t)) {
        out.push_back(s);
      }
    }
    return out;
  }

  std::vector<std::pair<VertexId, VertexId>> Structure::edges(RoleId r) const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId s = 0; s < n_; ++s) {
      for (VertexId t = 0; t < n_; ++t) {
        if (has_edge(r, s, t)) {
          out.emplace_back(s, t);
        }
      }
    }
    return out;
  }

  std::vector<VertexId> Structure::A_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < n_; ++v) {
      if (has_A(v)) {
        out.push_back(v);
      }
    }
    return out;
  }

  std::size_t Structure::fact_count() const {
    std::size_t c = static_cast<std::size_t>(std::count(a_.begin(), a_.end(), 1));
    for (auto const& rel : adj_) {
      c += static_cast<std::size_t>(std::count(rel.begin(), rel.end(), 1));
    }
    return c;
  }

  void Structure::set_constant(std::string name, VertexId v) {
    check_vertex(v);
    constants_[std::move(name)] = v;
  }

  std::optional<VertexId> Structure::constant(std::string_view name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  ////////////////////////////////////////////////////////////////////////
  // Candidate structures
  ////////////////////////////////////////////////////////////////////////

  CandidateReport is_candidate(Structure const& d) {
    auto a = d.constant(kConstantA);
    if (!a) {
      throw MissingConstant(std::string(kConstantA));
    }
    auto const&     sig = d.signature();
    auto const      m   = static_cast<RoleId>(sig.letter_count());
    CandidateReport report;
    if (!d.has_A(*a)) {
      report.violations.push_back({CandidateCondition::p1, *a, std::string(kConceptA)});
    }
    if (!d.has_edge(sig.t_role(), *a, *a)) {
      report.violations.push_back({CandidateCondition::p1, *a, std::string(kRoleT)});
    }
    auto has_out = [&](VertexId s, RoleId r) {
      for (VertexId t = 0; t < d.size(); ++t) {
        if (d.has_edge(r, s, t)) {
          return true;
        }
      }
      return false;
    };
    auto has_letter_in = [&](VertexId t) {
      for (RoleId r = 0; r < m; ++r) {
        for (VertexId s = 0; s < d.size(); ++s) {
          if (d.has_edge(r, s, t)) {
            return true;
          }
        }
      }
      return false;
    };
    for (VertexId s = 0; s < d.size(); ++s) {
      bool p2 = d.has_A(s);
      bool p3 = has_letter_in(s);
      if (!p2 && !p3) {
        continue;
      }
      for (RoleId r = 0; r < m; ++r) {
        if (has_out(s, r)) {
          continue;
        }
        if (p2) {
          report.violations.push_back({CandidateCondition::p2, s, sig.role_name(r)});
        }
        if (p3) {
          report.violations.push_back({CandidateCondition::p3, s, sig.role_name(r)});
        }
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Builders
  ////////////////////////////////////////////////////////////////////////

  Structure slot(std::size_t n, Signature const& sig) {
    if (n == 0) {
      throw std::invalid_argument("slots are numbered from 1");
    }
    Structure s(sig, 2);
    VertexId  b = 0, c = 1;
    s.set_constant(slot_b(n), b);
    s.set_constant(slot_c(n), c);
    s.set_A(b);
    s.set_edge(sig.t_role(), b, b);
    s.set_edge(sig.t_role(), c, c);
    for (RoleId r = 0; r < sig.letter_count(); ++r) {
      s.set_edge(r, b, b);
      s.set_edge(r, b, c);
      s.set_edge(r, c, c);
    }
    return s;
  }

  Structure disjoint_union(std::span<Structure const> parts) {
    if (parts.empty()) {
      return Structure(Signature{});
    }
    auto const& sig   = parts.front().signature();
    std::size_t total = 0;
    for (auto const& p : parts) {
      if (!(p.signature() == sig)) {
        throw SignatureMismatch("disjoint_union: parts use different signatures");
      }
      total += p.size();
    }
    Structure   out(sig, total);
    std::size_t offset = 0;
    for (auto const& p : parts) {
      auto shift = [&](VertexId v) { return static_cast<VertexId>(v + offset); };
      for (VertexId v = 0; v < p.size(); ++v) {
        if (p.has_A(v)) {
          out.set_A(shift(v));
        }
      }
      for (RoleId r = 0; r < sig.role_count(); ++r) {
        for (auto [s, t] : p.edges(r)) {
          out.set_edge(r, shift(s), shift(t));
        }
      }
      for (auto const& [name, v] : p.constants()) {
        if (out.constant(name)) {
          throw DuplicateConstant(name);
        }
        out.set_constant(name, shift(v));
      }
      offset += p.size();
    }
    return out;
  }

  Structure well_of_positivity(Signature const& sig, std::span<std::string const> constants) {
    Structure d(sig, 1);
    d.set_A(0);
    for (RoleId r = 0; r < sig.role_count(); ++r) {
      d.set_edge(r, 0, 0);
    }
    d.set_constant(std::string(kConstantA), 0);
    for (auto const& c : constants) {
      d.set_constant(c, 0);
    }
    return d;
  }

  Structure canonical_from_quotient(ThueInstance const& inst, FiniteQuotient const& q) {
    auto      sig = signature_of(inst);
    Structure d(sig, q.size());
    d.set_constant(std::string(kConstantA), 0);
    d.set_A(0);
    for (VertexId c = 0; c < q.size(); ++c) {
      d.set_edge(sig.t_role(), 0, c);
      for (Letter x = 0; x < inst.letter_count(); ++x) {
        d.set_edge(x, c, static_cast<VertexId>(q.successor[c][x]));
      }
    }
    return d;
  }

  Structure canonical_from_semigroup(ThueInstance const& inst, SemigroupWitness const& s) {
    if (auto why = check_witness(inst, s); !why.empty()) {
      throw std::invalid_argument("invalid semigroup witness: " + why);
    }
    // Vertex 0 is the adjoined identity, vertex 1 + e is element e.
    auto      sig = signature_of(inst);
    Structure d(sig, s.order + 1);
    d.set_constant(std::string(kConstantA), 0);
    d.set_A(0);
    for (VertexId v = 0; v <= s.order; ++v) {
      d.set_edge(sig.t_role(), 0, v);
      for (Letter x = 0; x < inst.letter_count(); ++x) {
        auto g    = s.generator_map[x];
        auto next = v == 0 ? g : s.product(v - 1, g);
        d.set_edge(x, v, static_cast<VertexId>(next + 1));
      }
    }
    return d;
  }

  Structure build_canonical_finite(ThueInstance const& inst, CanonicalSource const& src) {
    if (auto const* qb = std::get_if<QuotientBounded>(&src)) {
      return canonical_from_quotient(inst, certify_quotient(inst, qb->max_len));
    }
    return canonical_from_semigroup(inst, std::get<SemigroupWitness>(src));
  }

  ////////////////////////////////////////////////////////////////////////
  // Walks and perfection
  ////////////////////////////////////////////////////////////////////////

  std::vector<VertexId> walk(Structure const& d, VertexId start, Word const& w) {
    if (start >= d.size()) {
      throw std::out_of_range("walk: start vertex does not exist");
    }
    std::vector<std::uint8_t> cur(d.size(), 0), next(d.size(), 0);
    cur[start] = 1;
    for (auto x : w) {
      std::fill(next.begin(), next.end(), 0);
      for (VertexId s = 0; s < d.size(); ++s) {
        if (!cur[s]) {
          continue;
        }
        for (VertexId t = 0; t < d.size(); ++t) {
          if (d.has_edge(x, s, t)) {
            next[t] = 1;
          }
        }
      }
      cur.swap(next);
    }
    std::vector<VertexId> out;
    for (VertexId v = 0; v < d.size(); ++v) {
      if (cur[v]) {
        out.push_back(v);
      }
    }
    return out;
  }

  std::vector<VertexId> reachable(Structure const& d, VertexId start) {
    std::vector<std::uint8_t> seen(d.size(), 0);
    std::deque<VertexId>      todo{start};
    seen.at(start) = 1;
    while (!todo.empty()) {
      auto s = todo.front();
      todo.pop_front();
      for (RoleId r = 0; r < d.signature().letter_count(); ++r) {
        for (VertexId t = 0; t < d.size(); ++t) {
          if (d.has_edge(r, s, t) && !seen[t]) {
            seen[t] = 1;
            todo.push_back(t);
          }
        }
      }
    }
    std::vector<VertexId> out;
    for (VertexId v = 0; v < d.size(); ++v) {
      if (seen[v]) {
        out.push_back(v);
      }
    }
    return out;
  }

  PerfectionReport is_perfect(Structure const& d, std::span<RewritePair const> rules) {
    auto a = d.constant(kConstantA);
    if (!a) {
      throw MissingConstant(std::string(kConstantA));
    }
    PerfectionReport report;
    auto             from = reachable(d, *a);
    report.reachable_count = from.size();
    for (auto s : from) {
      for (std::size_t k = 0; k < rules.size(); ++k) {
        auto left  = walk(d, s, rules[k].left);
        auto right = walk(d, s, rules[k].right);
        if (left == right) {
          continue;
        }
        bool left_extra = !std::includes(
            right.begin(), right.end(), left.begin(), left.end());
        report.imperfection = Imperfection{
            s, k, left_extra ? Direction::left_to_right : Direction::right_to_left};
        return report;
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Enumeration
  ////////////////////////////////////////////////////////////////////////

  namespace {
    constexpr std::size_t kMaxEnumerationBits = 40;

    void check_ceiling(std::size_t max_vertices, std::size_t ceiling) {
      if (max_vertices > ceiling) {
        throw CeilingExceeded("enumeration limited to "
                              + std::to_string(ceiling) + " vertices, asked for "
                              + std::to_string(max_vertices));
      }
    }

    // Sets the facts of d (n vertices) from the bits of mask. Bit layout: A
    // for each vertex, then each role's n*n matrix row-major.
    void apply_mask(Structure& d, std::uint64_t mask) {
      auto const   n   = d.size();
      std::size_t  bit = 0;
      for (VertexId v = 0; v < n; ++v) {
        d.set_A(v, (mask >> bit++) & 1U);
      }
      for (RoleId r = 0; r < d.signature().role_count(); ++r) {
        for (VertexId s = 0; s < n; ++s) {
          for (VertexId t = 0; t < n; ++t) {
            d.set_edge(r, s, t, (mask >> bit++) & 1U);
          }
        }
      }
    }
  }  // namespace

  std::size_t for_each_structure(Signature const&        sig,
                                 std::size_t             max_vertices,
                                 StructureVisitor const& visit,
                                 std::size_t             ceiling) {
    check_ceiling(max_vertices, ceiling);
    if (auto top = max_vertices + sig.role_count() * max_vertices * max_vertices;
        top > kMaxEnumerationBits) {
      throw CeilingExceeded("too many facts to enumerate: 2^" + std::to_string(top));
    }
    std::size_t count = 0;
    for (std::size_t n = 1; n <= max_vertices; ++n) {
      auto bits = n + sig.role_count() * n * n;
      Structure d(sig, n);
      d.set_constant(std::string(kConstantA), 0);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        apply_mask(d, mask);
        visit(d);
        ++count;
      }
    }
    return count;
  }

  std::size_t enumerate_candidate_structures(Signature const&        sig,
                                             std::size_t             max_vertices,
                                             StructureVisitor const& visit,
                                             std::size_t             ceiling) {
    check_ceiling(max_vertices, ceiling);
    auto const m = sig.letter_count();
    if (max_vertices > 0
        && (m + 1) * max_vertices * max_vertices - 1 + max_vertices > kMaxEnumerationBits) {
      throw CeilingExceeded("too many facts to enumerate");
    }
    std::size_t count = 0;
    for (std::size_t n = 1; n <= max_vertices; ++n) {
      auto letter_bits = m * n * n;
      auto t_bits      = n * n - 1;  // T(a,a) is forced
      Structure d(sig, n);
      d.set_constant(std::string(kConstantA), 0);
      for (std::uint64_t lm = 0; lm < (std::uint64_t{1} << letter_bits); ++lm) {
        std::size_t bit = 0;
        for (RoleId r = 0; r < m; ++r) {
          for (VertexId s = 0; s < n; ++s) {
            for (VertexId t = 0; t < n; ++t) {
              d.set_edge(r, s, t, (lm >> bit++) & 1U);
            }
          }
        }
        // total[v]: v has an outgoing edge for every letter
        std::vector<bool> total(n, true), entered(n, false);
        for (VertexId s = 0; s < n; ++s) {
          for (RoleId r = 0; r < m; ++r) {
            bool out = false;
            for (VertexId t = 0; t < n; ++t) {
              if (d.has_edge(r, s, t)) {
                out        = true;
                entered[t] = true;
              }
            }
            if (!out) {
              total[s] = false;
            }
          }
        }
        bool p3 = true;
        for (VertexId v = 0; v < n; ++v) {
          if (entered[v] && !total[v]) {
            p3 = false;
          }
        }
        if (!p3 || !total[0]) {
          continue;
        }
        std::vector<VertexId> optional_a;
        for (VertexId v = 1; v < n; ++v) {
          if (total[v]) {
            optional_a.push_back(v);
          }
        }
        for (std::uint64_t am = 0; am < (std::uint64_t{1} << optional_a.size()); ++am) {
          d.set_A(0);
          for (VertexId v = 1; v < n; ++v) {
            d.set_A(v, false);
          }
          for (std::size_t i = 0; i < optional_a.size(); ++i) {
            if ((am >> i) & 1U) {
              d.set_A(optional_a[i]);
            }
          }
          for (std::uint64_t tm = 0; tm < (std::uint64_t{1} << t_bits); ++tm) {
            d.set_edge(sig.t_role(), 0, 0);
            std::size_t tb = 0;
            for (VertexId s = 0; s < n; ++s) {
              for (VertexId t = 0; t < n; ++t) {
                if (s == 0 && t == 0) {
                  continue;
                }
                d.set_edge(sig.t_role(), s, t, (tm >> tb++) & 1U);
              }
            }
            visit(d);
            ++count;
          }
        }
      }
    }
    return count;
  }

  ////////////////////////////////////////////////////////////////////////
  // .struct format
  ////////////////////////////////////////////////////////////////////////

  std::string write_struct(Structure const& d) {
    auto const&        sig = d.signature();
    std::ostringstream out;
    out << "signature";
    for (auto const& n : sig.letters.names()) {
      out << ' ' << n;
    }
    out << '\n';
    for (VertexId v = 0; v < d.size(); ++v) {
      out << "vertex " << v << '\n';
    }
    for (auto const& [name, v] : d.constants()) {
      out << "const " << name << " = " << v << '\n';
    }
    std::vector<std::tuple<std::string, VertexId, VertexId>> facts;
    for (RoleId r = 0; r < sig.role_count(); ++r) {
      for (auto [s, t] : d.edges(r)) {
        facts.emplace_back(sig.role_name(r), s, t);
      }
    }
    std::sort(facts.begin(), facts.end());
    for (auto v : d.A_vertices()) {
      out << kConceptA << '(' << v << ")\n";
    }
    for (auto const& [name, s, t] : facts) {
      out << name << '(' << s << ',' << t << ")\n";
    }
    return out.str();
  }

  namespace {
    struct Cursor {
      std::string_view text;
      std::size_t      line;
      std::size_t      pos = 0;

      [[noreturn]] void fail(std::string const& what) const {
        throw ParseError(ParseErrorKind::syntax, {line, pos + 1}, what);
      }
      void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
          ++pos;
        }
      }
      bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
          ++pos;
          return true;
        }
        return false;
      }
      void expect(char c) {
        if (!eat(c)) {
          fail(std::string("expected '") + c + "'");
        }
      }
      std::string ident() {
        skip_ws();
        auto b = pos;
        while (pos < text.size()
               && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
          ++pos;
        }
        if (b == pos) {
          fail("expected a name");
        }
        return std::string(text.substr(b, pos - b));
      }
      std::uint64_t number() {
        skip_ws();
        std::uint64_t v   = 0;
        auto          res = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (res.ec != std::errc{}) {
          fail("expected a vertex id");
        }
        pos = static_cast<std::size_t>(res.ptr - text.data());
        return v;
      }
      void end() {
        skip_ws();
        if (pos != text.size()) {
          fail("trailing characters");
        }
      }
    };
  }  // namespace

  Structure parse_struct(std::string_view text) {
    struct Fact {
      std::string                  rel;
      std::vector<std::uint64_t>   args;
      SourcePos                    pos;
    };
    std::optional<std::vector<std::string>>               letters;
    std::set<std::uint64_t>                               vertices;
    std::vector<std::pair<std::string, std::uint64_t>>    consts;
    std::vector<Fact>                                     facts;

    std::size_t number = 0, start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      auto raw = text.substr(start, end - start);
      start    = end + 1;
      ++number;
      if (auto h = raw.find('#'); h != std::string_view::npos) {
        raw = raw.substr(0, h);
      }
      Cursor c{raw, number};
      c.skip_ws();
      if (c.pos == raw.size()) {
        continue;
      }
      auto word = c.ident();
      if (word == "signature" && !c.eat('(')) {
        std::vector<std::string> names;
        c.skip_ws();
        while (c.pos < raw.size()) {
          names.push_back(c.ident());
          c.skip_ws();
        }
        letters = std::move(names);
      } else if (word == "vertex" && !c.eat('(')) {
        vertices.insert(c.number());
        c.end();
      } else if (word == "const" && !c.eat('(')) {
        auto name = c.ident();
        c.expect('=');
        consts.emplace_back(name, c.number());
        c.end();
      } else {
        // word was followed by '(' already consumed above for keywords
        if (c.text[c.pos - 1] != '(') {
          c.expect('(');
        }
        Fact f{word, {}, {number, 1}};
        f.args.push_back(c.number());
        if (c.eat(',')) {
          f.args.push_back(c.number());
        }
        c.expect(')');
        c.end();
        facts.push_back(std::move(f));
      }
    }

    if (!letters) {
      std::set<std::string> names;
      for (auto const& f : facts) {
        if (f.args.size() == 2 && f.rel != kRoleT) {
          names.insert(f.rel);
        }
      }
      letters.emplace(names.begin(), names.end());
    }
    Signature sig;
    try {
      sig.letters = Alphabet(*letters);
    } catch (std::invalid_argument const& e) {
      throw ParseError(ParseErrorKind::syntax, {0, 0}, e.what());
    }
    std::map<std::uint64_t, VertexId> dense;
    for (auto v : vertices) {
      dense.emplace(v, static_cast<VertexId>(dense.size()));
    }
    auto vertex = [&](std::uint64_t id, SourcePos pos) {
      auto it = dense.find(id);
      if (it == dense.end()) {
        throw ParseError(ParseErrorKind::syntax,
                         pos,
                         "vertex " + std::to_string(id) + " is not declared");
      }
      return it->second;
    };
    Structure d(sig, dense.size());
    for (auto const& [name, id] : consts) {
      d.set_constant(name, vertex(id, {0, 0}));
    }
    for (auto const& f : facts) {
      if (f.args.size() == 1) {
        if (f.rel != kConceptA) {
          throw ParseError(ParseErrorKind::unknown_symbol, f.pos, "unary symbol '" + f.rel + "'");
        }
        d.set_A(vertex(f.args[0], f.pos));
      } else {
        auto r = sig.role(f.rel);
        if (!r) {
          throw ParseError(ParseErrorKind::unknown_symbol, f.pos, "binary symbol '" + f.rel + "'");
        }
        d.set_edge(*r, vertex(f.args[0], f.pos), vertex(f.args[1], f.pos));
      }
    }
    return d;
  }

}  // namespace thue2dlite
