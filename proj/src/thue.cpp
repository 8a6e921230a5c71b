#include "thue2dlite/thue.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "thue2dlite/error.hpp"
#include "word_hash.hpp"

namespace thue2dlite {

  bool is_valid_symbol_name(std::string_view name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  }

  Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    for (auto const& n : names_) {
      if (!is_valid_symbol_name(n)) {
        throw std::invalid_argument("invalid symbol name '" + n + "'");
      }
    }
    std::sort(names_.begin(), names_.end());
    auto dup = std::adjacent_find(names_.begin(), names_.end());
    if (dup != names_.end()) {
      throw std::invalid_argument("duplicate symbol '" + *dup + "'");
    }
  }

  std::optional<Letter> Alphabet::find(std::string_view name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) {
      return std::nullopt;
    }
    return static_cast<Letter>(it - names_.begin());
  }

  std::string Alphabet::format(Word const& w) const {
    bool single = std::all_of(
        names_.begin(), names_.end(), [](auto const& n) { return n.size() == 1; });
    std::string out;
    for (auto x : w) {
      if (single) {
        out += names_.at(x);
      } else {
        out += "(" + names_.at(x) + ")";
      }
    }
    return out;
  }

  namespace {
    // Splits a whitespace-free word into symbol tokens. Returns the token and
    // its offset in text.
    std::vector<std::pair<std::string, std::size_t>>
    tokenize_word(std::string_view text) {
      std::vector<std::pair<std::string, std::size_t>> out;
      std::size_t                                      i = 0;
      while (i < text.size()) {
        if (text[i] == '(') {
          auto close = text.find(')', i + 1);
          if (close == std::string_view::npos) {
            throw ParseError(ParseErrorKind::syntax,
                             {0, i + 1},
                             "unterminated '(' in word");
          }
          out.emplace_back(std::string(text.substr(i + 1, close - i - 1)), i);
          i = close + 1;
        } else {
          out.emplace_back(std::string(1, text[i]), i);
          ++i;
        }
      }
      return out;
    }
  }  // namespace

  Word Alphabet::parse_word(std::string_view text) const {
    Word w;
    for (auto const& [tok, off] : tokenize_word(text)) {
      auto x = find(tok);
      if (!x) {
        throw UnknownSymbol(tok);
      }
      w.push_back(*x);
    }
    return w;
  }

  char const* to_string(Variant v) {
    return v == Variant::neq ? "neq" : "neg";
  }

  std::optional<Variant> parse_variant(std::string_view text) {
    if (text == "neq") {
      return Variant::neq;
    }
    if (text == "neg") {
      return Variant::neg;
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // .thue reader / writer
  ////////////////////////////////////////////////////////////////////////

  namespace {
    struct Line {
      std::size_t      number;
      std::string_view body;
      std::size_t      body_offset;  // 0-based column of body in the line
    };

    std::string_view trim(std::string_view s, std::size_t* lead = nullptr) {
      std::size_t b = 0;
      while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
      }
      std::size_t e = s.size();
      while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
      }
      if (lead != nullptr) {
        *lead = b;
      }
      return s.substr(b, e - b);
    }

    struct PendingEquation {
      std::size_t      line;
      bool             is_goal;
      std::string_view left;
      std::size_t      left_col;
      std::string_view right;
      std::size_t      right_col;
    };

    Word resolve_word(Alphabet const&  alphabet,
                      std::string_view text,
                      std::size_t      line,
                      std::size_t      col) {
      Word w;
      std::vector<std::pair<std::string, std::size_t>> toks;
      try {
        toks = tokenize_word(text);
      } catch (ParseError const& e) {
        throw ParseError(e.kind(), {line, col + e.pos().column - 1}, e.detail());
      }
      for (auto const& [tok, off] : toks) {
        auto x = alphabet.find(tok);
        if (!x) {
          throw ParseError(ParseErrorKind::unknown_symbol,
                           {line, col + off},
                           "symbol '" + tok + "' is not in the alphabet");
        }
        w.push_back(*x);
      }
      return w;
    }
  }  // namespace

  ThueInstance parse_thue(std::string_view text) {
    std::optional<Alphabet>      alphabet;
    std::vector<PendingEquation> equations;
    std::size_t                  goals = 0;

    std::size_t number = 0;
    std::size_t start  = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      std::string_view raw = text.substr(start, end - start);
      start                = end + 1;
      ++number;
      if (auto hash = raw.find('#'); hash != std::string_view::npos) {
        raw = raw.substr(0, hash);
      }
      std::size_t lead = 0;
      auto        line = trim(raw, &lead);
      if (line.empty()) {
        if (end == text.size()) {
          break;
        }
        continue;
      }
      auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(ParseErrorKind::syntax,
                         {number, lead + 1},
                         "expected 'alphabet:', 'rule:' or 'goal:'");
      }
      auto keyword = trim(line.substr(0, colon));
      auto rest    = line.substr(colon + 1);
      auto rest_col = lead + colon + 2;  // 1-based column of rest[0]

      if (keyword == "alphabet") {
        if (alphabet) {
          throw ParseError(
              ParseErrorKind::syntax, {number, lead + 1}, "second alphabet line");
        }
        std::vector<std::string> names;
        std::size_t              i = 0;
        while (i < rest.size()) {
          while (i < rest.size()
                 && std::isspace(static_cast<unsigned char>(rest[i]))) {
            ++i;
          }
          if (i == rest.size()) {
            break;
          }
          auto j = i;
          while (j < rest.size()
                 && !std::isspace(static_cast<unsigned char>(rest[j]))) {
            ++j;
          }
          std::string name(rest.substr(i, j - i));
          SourcePos   pos{number, rest_col + i};
          if (!is_valid_symbol_name(name)) {
            throw ParseError(
                ParseErrorKind::syntax, pos, "invalid symbol name '" + name + "'");
          }
          if (name == "A" || name == "T") {
            throw ParseError(ParseErrorKind::reserved_symbol,
                             pos,
                             "'" + name + "' is reserved for the signature");
          }
          if (std::find(names.begin(), names.end(), name) != names.end()) {
            throw ParseError(ParseErrorKind::duplicate_alphabet_symbol,
                             pos,
                             "symbol '" + name + "' listed twice");
          }
          names.push_back(std::move(name));
          i = j;
        }
        if (names.empty()) {
          throw ParseError(
              ParseErrorKind::syntax, {number, lead + 1}, "empty alphabet");
        }
        alphabet.emplace(std::move(names));
      } else if (keyword == "rule" || keyword == "goal") {
        bool is_goal = keyword == "goal";
        auto eq      = rest.find('=');
        if (eq == std::string_view::npos) {
          throw ParseError(ParseErrorKind::syntax,
                           {number, rest_col},
                           "expected 'word = word'");
        }
        std::size_t ll = 0, rl = 0;
        auto        left  = trim(rest.substr(0, eq), &ll);
        auto        right = trim(rest.substr(eq + 1), &rl);
        auto        lcol  = rest_col + ll;
        auto        rcol  = rest_col + eq + 1 + rl;
        for (auto [w, c] : {std::pair{left, lcol}, std::pair{right, rcol}}) {
          if (w.empty()) {
            throw ParseError(is_goal ? ParseErrorKind::empty_goal_side
                                     : ParseErrorKind::empty_rule_side,
                             {number, c},
                             "empty word");
          }
          auto ws = std::find_if(w.begin(), w.end(), [](char ch) {
            return std::isspace(static_cast<unsigned char>(ch));
          });
          if (ws != w.end()) {
            throw ParseError(ParseErrorKind::syntax,
                             {number, c + static_cast<std::size_t>(ws - w.begin())},
                             "whitespace inside a word");
          }
        }
        if (is_goal && ++goals > 1) {
          throw ParseError(
              ParseErrorKind::duplicate_goal, {number, lead + 1}, "second goal");
        }
        equations.push_back({number, is_goal, left, lcol, right, rcol});
      } else {
        throw ParseError(ParseErrorKind::syntax,
                         {number, lead + 1},
                         "unknown keyword '" + std::string(keyword) + "'");
      }
      if (end == text.size()) {
        break;
      }
    }

    if (!alphabet) {
      throw ParseError(
          ParseErrorKind::missing_alphabet, {number, 1}, "no 'alphabet:' line");
    }
    ThueInstance inst;
    inst.alphabet = *alphabet;
    for (auto const& e : equations) {
      auto l = resolve_word(inst.alphabet, e.left, e.line, e.left_col);
      auto r = resolve_word(inst.alphabet, e.right, e.line, e.right_col);
      if (e.is_goal) {
        inst.goal_left  = std::move(l);
        inst.goal_right = std::move(r);
      } else {
        inst.rules.push_back({std::move(l), std::move(r)});
      }
    }
    if (goals == 0) {
      throw ParseError(ParseErrorKind::missing_goal, {number, 1}, "no 'goal:' line");
    }
    return inst;
  }

  std::string write_thue(ThueInstance const& inst) {
    std::ostringstream out;
    out << "alphabet:";
    for (auto const& n : inst.alphabet.names()) {
      out << ' ' << n;
    }
    out << '\n';
    for (auto const& r : inst.rules) {
      out << "rule: " << inst.alphabet.format(r.left) << " = "
          << inst.alphabet.format(r.right) << '\n';
    }
    out << "goal: " << inst.alphabet.format(inst.goal_left) << " = "
        << inst.alphabet.format(inst.goal_right) << '\n';
    return out.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Rewriting
  ////////////////////////////////////////////////////////////////////////

  char const* to_string(Direction d) {
    return d == Direction::left_to_right ? "L->R" : "R->L";
  }

  namespace {
    bool occurs_at(Word const& w, Word const& factor, std::size_t pos) {
      return pos + factor.size() <= w.size()
             && std::equal(factor.begin(), factor.end(), w.begin() + pos);
    }

    Word replace_at(Word const& w, std::size_t pos, std::size_t len, Word const& by) {
      Word out;
      out.reserve(w.size() - len + by.size());
      out.insert(out.end(), w.begin(), w.begin() + pos);
      out.insert(out.end(), by.begin(), by.end());
      out.insert(out.end(), w.begin() + pos + len, w.end());
      return out;
    }
  }  // namespace

  std::vector<Neighbor> rewrite_neighbors(Word const&                  w,
                                          std::span<RewritePair const> rules) {
    std::vector<Neighbor> out;
    for (std::size_t k = 0; k < rules.size(); ++k) {
      auto const& rule = rules[k];
      for (std::size_t pos = 0; pos <= w.size(); ++pos) {
        if (occurs_at(w, rule.left, pos)) {
          out.push_back({replace_at(w, pos, rule.left.size(), rule.right),
                         {k, pos, Direction::left_to_right}});
        }
        if (occurs_at(w, rule.right, pos)) {
          out.push_back({replace_at(w, pos, rule.right.size(), rule.left),
                         {k, pos, Direction::right_to_left}});
        }
      }
    }
    return out;
  }

  std::optional<Word> apply_step(Word const&                  w,
                                 std::span<RewritePair const> rules,
                                 RewriteStep                  step) {
    if (step.rule_index >= rules.size()) {
      return std::nullopt;
    }
    auto const& rule = rules[step.rule_index];
    auto const& from
        = step.direction == Direction::left_to_right ? rule.left : rule.right;
    auto const& to
        = step.direction == Direction::left_to_right ? rule.right : rule.left;
    if (!occurs_at(w, from, step.position)) {
      return std::nullopt;
    }
    return replace_at(w, step.position, from.size(), to);
  }

  bool validate_path(RewritePath const&           path,
                     Word const&                  u,
                     Word const&                  v,
                     std::span<RewritePair const> rules) {
    if (path.words.empty() || path.words.front() != u || path.words.back() != v
        || path.steps.size() + 1 != path.words.size()) {
      return false;
    }
    for (std::size_t i = 0; i < path.steps.size(); ++i) {
      auto next = apply_step(path.words[i], rules, path.steps[i]);
      if (!next || *next != path.words[i + 1]) {
        return false;
      }
    }
    return true;
  }

  SearchBounds default_bounds(ThueInstance const& inst) {
    return {inst.goal_left.size() + inst.goal_right.size() + 8, 1'000'000};
  }

  char const* to_string(Exhausted e) {
    switch (e) {
      case Exhausted::class_closed:
        return "class_closed";
      case Exhausted::word_length:
        return "max_word_len";
      case Exhausted::expansions:
        return "max_expansions";
    }
    return "?";
  }

  namespace {
    struct Parent {
      Word        prev;
      RewriteStep step;
    };

    using ParentMap = std::unordered_map<Word, std::optional<Parent>, WordHash>;

    // Chain from the root of `parents` to w, as (words, steps) where steps
    // rewrite towards w.
    RewritePath chain_to(ParentMap const& parents, Word const& w) {
      RewritePath p;
      Word        cur = w;
      p.words.push_back(cur);
      while (auto const& par = parents.at(cur)) {
        p.steps.push_back(par->step);
        cur = par->prev;
        p.words.push_back(cur);
      }
      std::reverse(p.words.begin(), p.words.end());
      std::reverse(p.steps.begin(), p.steps.end());
      return p;
    }

    RewritePath join(ParentMap const& fwd, ParentMap const& bwd, Word const& meet) {
      auto path = chain_to(fwd, meet);  // u .. meet
      auto back = chain_to(bwd, meet);  // v .. meet
      // Walk back from meet towards v; every backward step is undone in
      // place, at the same position.
      for (std::size_t i = back.steps.size(); i-- > 0;) {
        auto s      = back.steps[i];
        s.direction = reversed(s.direction);
        path.steps.push_back(s);
        path.words.push_back(back.words[i]);
      }
      return path;
    }
  }  // namespace

  Verdict decide_equiv_bounded(Word const&                  u,
                               Word const&                  v,
                               std::span<RewritePair const> rules,
                               SearchBounds                 bounds) {
    if (bounds.max_word_len < std::max(u.size(), v.size())) {
      throw std::invalid_argument("max_word_len is shorter than an input word");
    }
    if (u == v) {
      return Equivalent{{{u}, {}}};
    }
    struct Side {
      ParentMap        parents;
      std::deque<Word> queue;
      bool             pruned = false;
    };
    Side fwd, bwd;
    fwd.parents.emplace(u, std::nullopt);
    fwd.queue.push_back(u);
    bwd.parents.emplace(v, std::nullopt);
    bwd.queue.push_back(v);

    std::size_t expansions = 0;
    while (true) {
      for (Side* side : {&fwd, &bwd}) {
        if (side->queue.empty()) {
          return Unknown{{side->pruned ? Exhausted::word_length
                                       : Exhausted::class_closed,
                          expansions,
                          fwd.parents.size() + bwd.parents.size()}};
        }
      }
      if (expansions >= bounds.max_expansions) {
        return Unknown{{Exhausted::expansions,
                        expansions,
                        fwd.parents.size() + bwd.parents.size()}};
      }
      bool  forward = fwd.queue.size() <= bwd.queue.size();
      Side& self    = forward ? fwd : bwd;
      Side& other   = forward ? bwd : fwd;
      Word  w       = std::move(self.queue.front());
      self.queue.pop_front();
      ++expansions;
      for (auto& n : rewrite_neighbors(w, rules)) {
        if (n.word.size() > bounds.max_word_len) {
          self.pruned = true;
          continue;
        }
        if (self.parents.contains(n.word)) {
          continue;
        }
        self.parents.emplace(n.word, Parent{w, n.step});
        if (other.parents.contains(n.word)) {
          return Equivalent{join(fwd.parents, bwd.parents, n.word)};
        }
        self.queue.push_back(std::move(n.word));
      }
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Semigroups
  ////////////////////////////////////////////////////////////////////////

  Element eval_in_semigroup(Word const& w, SemigroupWitness const& witness) {
    if (w.empty()) {
      throw std::invalid_argument(
          "the empty word has no value in a semigroup; use the monoid S^1");
    }
    Element e = witness.generator_map.at(w.front());
    for (std::size_t i = 1; i < w.size(); ++i) {
      e = witness.product(e, witness.generator_map.at(w[i]));
    }
    return e;
  }

  bool is_associative(SemigroupWitness const& s) {
    auto n = static_cast<Element>(s.order);
    for (Element x = 0; x < n; ++x) {
      for (Element y = 0; y < n; ++y) {
        for (Element z = 0; z < n; ++z) {
          if (s.product(s.product(x, y), z) != s.product(x, s.product(y, z))) {
            return false;
          }
        }
      }
    }
    return true;
  }

  std::string check_witness(ThueInstance const& inst, SemigroupWitness const& w) {
    if (w.order == 0) {
      return "order must be positive";
    }
    if (w.table.size() != w.order * w.order) {
      return "table has the wrong size";
    }
    if (std::any_of(w.table.begin(), w.table.end(), [&](Element e) {
          return e >= w.order;
        })) {
      return "table entry out of range";
    }
    if (w.generator_map.size() != inst.letter_count()) {
      return "generator map does not cover the alphabet";
    }
    if (std::any_of(w.generator_map.begin(),
                    w.generator_map.end(),
                    [&](Element e) { return e >= w.order; })) {
      return "generator image out of range";
    }
    if (!is_associative(w)) {
      return "table is not associative";
    }
    for (std::size_t k = 0; k < inst.rules.size(); ++k) {
      if (eval_in_semigroup(inst.rules[k].left, w)
          != eval_in_semigroup(inst.rules[k].right, w)) {
        return "rule " + std::to_string(k + 1) + " does not hold";
      }
    }
    if (eval_in_semigroup(inst.goal_left, w)
        == eval_in_semigroup(inst.goal_right, w)) {
      return "goal words are equal";
    }
    return {};
  }

  namespace {
    constexpr Element kUnset = static_cast<Element>(-1);

    // True when no fully determined triple violates associativity.
    bool partial_associative(std::vector<Element> const& t, std::size_t n) {
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          auto xy = t[x * n + y];
          if (xy == kUnset) {
            continue;
          }
          for (std::size_t z = 0; z < n; ++z) {
            auto yz = t[y * n + z];
            if (yz == kUnset) {
              continue;
            }
            auto lhs = t[xy * n + z];
            auto rhs = t[x * n + yz];
            if (lhs != kUnset && rhs != kUnset && lhs != rhs) {
              return false;
            }
          }
        }
      }
      return true;
    }

    bool fill(std::vector<Element>&                               t,
              std::size_t                                         n,
              std::size_t                                         cell,
              std::function<bool(SemigroupWitness const&)> const& f) {
      if (cell == t.size()) {
        SemigroupWitness s{n, t, {}};
        return f(s);
      }
      for (Element v = 0; v < n; ++v) {
        t[cell] = v;
        if (partial_associative(t, n) && !fill(t, n, cell + 1, f)) {
          return false;
        }
      }
      t[cell] = kUnset;
      return true;
    }
  }  // namespace

  void for_each_semigroup(std::size_t                                         order,
                          std::function<bool(SemigroupWitness const&)> const& f) {
    if (order == 0) {
      return;
    }
    std::vector<Element> t(order * order, kUnset);
    fill(t, order, 0, f);
  }

  std::optional<SemigroupWitness>
  find_separating_semigroup(ThueInstance const& inst, std::size_t max_order) {
    std::optional<SemigroupWitness> found;
    auto const                      m = inst.letter_count();
    for (std::size_t order = 1; order <= max_order && !found; ++order) {
      for_each_semigroup(order, [&](SemigroupWitness const& table) {
        SemigroupWitness s = table;
        s.generator_map.assign(m, 0);
        while (true) {
          bool ok = true;
          for (auto const& rule : inst.rules) {
            if (eval_in_semigroup(rule.left, s) != eval_in_semigroup(rule.right, s)) {
              ok = false;
              break;
            }
          }
          if (ok
              && eval_in_semigroup(inst.goal_left, s)
                     != eval_in_semigroup(inst.goal_right, s)) {
            found = std::move(s);
            return false;
          }
          // next generator map, last letter fastest
          std::size_t i = m;
          while (i > 0 && s.generator_map[i - 1] + 1 == order) {
            s.generator_map[--i] = 0;
          }
          if (i == 0) {
            return true;
          }
          ++s.generator_map[i - 1];
        }
      });
    }
    return found;
  }

  ////////////////////////////////////////////////////////////////////////
  // Finite quotient
  ////////////////////////////////////////////////////////////////////////

  std::size_t FiniteQuotient::class_of(Word const& w) const {
    std::size_t c = 0;
    for (auto x : w) {
      c = successor[c][x];
    }
    return c;
  }

  namespace {
    constexpr std::size_t kMaxQuotientWords = 2'000'000;

    struct UnionFind {
      std::vector<std::size_t> parent;
      explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
      }
      std::size_t find(std::size_t x) {
        while (parent[x] != x) {
          parent[x] = parent[parent[x]];
          x         = parent[x];
        }
        return x;
      }
      void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
          // keep the smaller (shortlex earlier) index as root
          parent[std::max(a, b)] = std::min(a, b);
        }
      }
    };
  }  // namespace

  FiniteQuotient certify_quotient(ThueInstance const& inst, std::size_t max_len) {
    auto const m = inst.letter_count();
    if (max_len == 0) {
      throw NotClosedAtBound(max_len, "bound must be at least 1");
    }
    // Words of length <= max_len in shortlex order.
    std::vector<Word> words{Word{}};
    std::size_t       level_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
      auto level_end = words.size();
      if ((level_end - level_begin) * m + words.size() > kMaxQuotientWords) {
        throw NotClosedAtBound(max_len, "too many words to enumerate");
      }
      for (auto i = level_begin; i < level_end; ++i) {
        for (Letter x = 0; x < m; ++x) {
          Word w = words[i];
          w.push_back(x);
          words.push_back(std::move(w));
        }
      }
      level_begin = level_end;
    }
    std::unordered_map<Word, std::size_t, WordHash> index;
    index.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      index.emplace(words[i], i);
    }

    UnionFind uf(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (auto const& n : rewrite_neighbors(words[i], inst.rules)) {
        if (n.word.size() <= max_len) {
          uf.unite(i, index.at(n.word));
        }
      }
    }

    FiniteQuotient           q;
    std::vector<std::size_t> class_id(words.size());
    std::vector<std::size_t> root_class(words.size(), SIZE_MAX);
    for (std::size_t i = 0; i < words.size(); ++i) {
      auto r = uf.find(i);
      if (root_class[r] == SIZE_MAX) {
        root_class[r] = q.representatives.size();
        q.representatives.push_back(words[i]);
      }
      class_id[i] = root_class[r];
    }
    for (std::size_t c = 0; c < q.size(); ++c) {
      if (q.representatives[c].size() >= max_len) {
        throw NotClosedAtBound(max_len,
                               "class of " + inst.alphabet.format(q.representatives[c])
                                   + " has no representative shorter than the bound");
      }
    }
    q.successor.assign(q.size(), std::vector<std::size_t>(m));
    for (std::size_t c = 0; c < q.size(); ++c) {
      for (Letter x = 0; x < m; ++x) {
        Word w = q.representatives[c];
        w.push_back(x);
        q.successor[c][x] = class_id[index.at(w)];
      }
    }
    // The successor map must be independent of the representative.
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i].size() >= max_len) {
        continue;
      }
      for (Letter x = 0; x < m; ++x) {
        Word w = words[i];
        w.push_back(x);
        if (class_id[index.at(w)] != q.successor[class_id[i]][x]) {
          throw NotClosedAtBound(max_len,
                                 "extension of " + inst.alphabet.format(words[i])
                                     + " leaves its class's successor");
        }
      }
    }
    // Every class must identify both sides of every rule.
    auto walk = [&](std::size_t c, Word const& w) {
      for (auto x : w) {
        c = q.successor[c][x];
      }
      return c;
    };
    for (std::size_t c = 0; c < q.size(); ++c) {
      for (std::size_t k = 0; k < inst.rules.size(); ++k) {
        if (walk(c, inst.rules[k].left) != walk(c, inst.rules[k].right)) {
          throw NotClosedAtBound(max_len,
                                 "rule " + std::to_string(k + 1)
                                     + " separates successors of class "
                                     + inst.alphabet.format(q.representatives[c]));
        }
      }
    }
    return q;
  }

}  // namespace thue2dlite
