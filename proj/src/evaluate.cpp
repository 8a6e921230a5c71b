#include "thue2dlite/evaluate.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "thue2dlite/error.hpp"

namespace thue2dlite {

  namespace {
    constexpr int kUnknownSymbol = -1;
    constexpr int kConcept       = -2;

    struct Resolved {
      LiteralKind kind;
      int         rel;  // role id, kConcept or kUnknownSymbol
      VarId       x, y;
    };

    Resolved resolve(Structure const& d, Literal const& l) {
      int rel = kUnknownSymbol;
      if (l.kind == LiteralKind::unary) {
        rel = l.symbol == kConceptA ? kConcept : kUnknownSymbol;
      } else if (l.kind != LiteralKind::inequality) {
        if (auto r = d.signature().role(l.symbol)) {
          rel = static_cast<int>(*r);
        }
      }
      return {l.kind, rel, l.x, l.y};
    }

    bool holds(Structure const& d, Resolved const& r, VertexId vx, VertexId vy) {
      switch (r.kind) {
        case LiteralKind::unary:
          return r.rel == kConcept && d.has_A(vx);
        case LiteralKind::binary:
          return r.rel >= 0 && d.has_edge(static_cast<RoleId>(r.rel), vx, vy);
        case LiteralKind::inequality:
          return vx != vy;
        case LiteralKind::negated:
          return !(r.rel >= 0 && d.has_edge(static_cast<RoleId>(r.rel), vx, vy));
      }
      return false;
    }

    constexpr std::int64_t kFree = -1;

    // Backtracking over the variables of one block; the literals passed in
    // mention only variables of that block.
    class BlockSearch {
     public:
      BlockSearch(Structure const&                         d,
                  std::vector<Resolved> const&              lits,
                  std::vector<std::size_t> const&           block_lits,
                  std::vector<std::optional<VertexId>> const& pin,
                  std::vector<std::int64_t>&                val)
          : d_(d), lits_(lits), pin_(pin), val_(val), var_lits_(val.size()) {
        for (auto i : block_lits) {
          var_lits_[lits[i].x].push_back(i);
          if (lits[i].y != lits[i].x) {
            var_lits_[lits[i].y].push_back(i);
          }
        }
      }

      using Done = std::function<bool()>;

      // Depth-first over `vars`; calls done() on every total assignment and
      // stops (leaving the assignment in place) once it returns true.
      bool solve(std::vector<VarId> const& vars, Done const& done) {
        std::optional<VarId>  best;
        std::vector<VertexId> best_cands;
        for (auto v : vars) {
          if (val_[v] != kFree) {
            continue;
          }
          auto c = candidates(v);
          if (!best || c.size() < best_cands.size()) {
            best       = v;
            best_cands = std::move(c);
            if (best_cands.empty()) {
              break;
            }
          }
        }
        if (!best) {
          return done();
        }
        for (auto c : best_cands) {
          val_[*best] = c;
          if (consistent(*best) && solve(vars, done)) {
            return true;
          }
        }
        val_[*best] = kFree;
        return false;
      }

     private:
      std::vector<VertexId> candidates(VarId v) const {
        auto n = static_cast<VertexId>(d_.size());
        if (pin_[v]) {
          if (*pin_[v] < n) {
            return {*pin_[v]};
          }
          return {};
        }
        std::optional<std::vector<VertexId>> best;
        for (auto i : var_lits_[v]) {
          auto const& l = lits_[i];
          if (l.kind != LiteralKind::binary || l.x == l.y) {
            continue;
          }
          std::vector<VertexId> c;
          if (l.rel >= 0) {
            auto r = static_cast<RoleId>(l.rel);
            if (l.x == v && val_[l.y] != kFree) {
              c = d_.predecessors(r, static_cast<VertexId>(val_[l.y]));
            } else if (l.y == v && val_[l.x] != kFree) {
              c = d_.successors(r, static_cast<VertexId>(val_[l.x]));
            } else {
              continue;
            }
          }
          if (!best || c.size() < best->size()) {
            best = std::move(c);
          }
        }
        if (best) {
          return *best;
        }
        std::vector<VertexId> all(n);
        std::iota(all.begin(), all.end(), VertexId{0});
        return all;
      }

      bool consistent(VarId v) const {
        for (auto i : var_lits_[v]) {
          auto const& l = lits_[i];
          if (val_[l.x] == kFree || val_[l.y] == kFree) {
            continue;
          }
          if (!holds(d_, l, static_cast<VertexId>(val_[l.x]), static_cast<VertexId>(val_[l.y]))) {
            return false;
          }
        }
        return true;
      }

      Structure const&                            d_;
      std::vector<Resolved> const&                lits_;
      std::vector<std::optional<VertexId>> const& pin_;
      std::vector<std::int64_t>&                  val_;
      std::vector<std::vector<std::size_t>>       var_lits_;
    };

    struct BlockSolution {
      std::vector<std::pair<VarId, VertexId>> interface;
      std::vector<std::pair<VarId, VertexId>> full;
    };

    struct Block {
      std::vector<VarId>         vars;
      std::vector<VarId>         interface;
      std::vector<VarId>         rest;
      std::vector<std::size_t>   literals;
      std::vector<BlockSolution> solutions;
    };

    std::vector<VarId> find_roots(std::vector<VarId>& parent) {
      std::function<VarId(VarId)> root = [&](VarId v) {
        return parent[v] == v ? v : parent[v] = root(parent[v]);
      };
      std::vector<VarId> roots(parent.size());
      for (VarId v = 0; v < parent.size(); ++v) {
        roots[v] = root(v);
      }
      return roots;
    }
  }  // namespace

  bool literal_holds(Structure const& d, Literal const& l, Assignment const& a) {
    auto vx = a.image.at(l.x);
    auto vy = a.image.at(l.y);
    if (vx >= d.size() || vy >= d.size()) {
      return false;
    }
    return holds(d, resolve(d, l), vx, vy);
  }

  bool satisfies(Structure const& d, ConjunctiveQuery const& q, Assignment const& a) {
    if (a.image.size() != q.variables().size()) {
      return false;
    }
    return std::all_of(q.literals().begin(), q.literals().end(), [&](Literal const& l) {
      return literal_holds(d, l, a);
    });
  }

  std::optional<Assignment> evaluate(Structure const&        d,
                                     ConjunctiveQuery const& q,
                                     EvalOptions const&      opts) {
    if (!is_safe(q)) {
      throw UnsafeQuery("query is not safe: a variable of a negated or inequality literal "
                        "occurs in no positive literal");
    }
    auto const nv = q.variables().size();
    std::vector<Resolved> lits;
    for (auto const& l : q.literals()) {
      lits.push_back(resolve(d, l));
    }
    std::vector<std::optional<VertexId>> pin(nv);
    for (auto [v, x] : opts.pinned) {
      if (v >= nv) {
        throw std::out_of_range("pinned variable does not exist");
      }
      if (pin[v] && *pin[v] != x) {
        return std::nullopt;
      }
      pin[v] = x;
    }

    // Blocks: connected through positive binary literals.
    std::vector<VarId> parent(nv);
    std::iota(parent.begin(), parent.end(), VarId{0});
    auto roots = find_roots(parent);
    for (auto const& l : lits) {
      if (l.kind == LiteralKind::binary) {
        auto a = roots[l.x], b = roots[l.y];
        if (a != b) {
          parent[std::max(a, b)] = std::min(a, b);
          roots                  = find_roots(parent);
        }
      }
    }
    std::vector<Block>       blocks;
    std::vector<std::size_t> block_of(nv);
    {
      std::vector<std::optional<std::size_t>> index(nv);
      for (VarId v = 0; v < nv; ++v) {
        auto r = roots[v];
        if (!index[r]) {
          index[r] = blocks.size();
          blocks.emplace_back();
        }
        block_of[v] = *index[r];
        blocks[*index[r]].vars.push_back(v);
      }
    }
    std::vector<std::size_t> cross;
    std::vector<bool>        is_interface(nv, false);
    for (std::size_t i = 0; i < lits.size(); ++i) {
      auto bx = block_of[lits[i].x], by = block_of[lits[i].y];
      if (bx == by) {
        blocks[bx].literals.push_back(i);
      } else {
        cross.push_back(i);
        is_interface[lits[i].x] = is_interface[lits[i].y] = true;
      }
    }

    std::vector<std::int64_t> val(nv, kFree);
    for (auto& b : blocks) {
      for (auto v : b.vars) {
        (is_interface[v] ? b.interface : b.rest).push_back(v);
      }
      BlockSearch search(d, lits, b.literals, pin, val);
      auto        record = [&]() {
        BlockSolution s;
        for (auto v : b.interface) {
          s.interface.emplace_back(v, static_cast<VertexId>(val[v]));
        }
        for (auto v : b.vars) {
          s.full.emplace_back(v, static_cast<VertexId>(val[v]));
        }
        b.solutions.push_back(std::move(s));
      };
      if (b.interface.empty()) {
        search.solve(b.vars, [&] {
          record();
          return true;
        });
      } else {
        search.solve(b.interface, [&] {
          if (search.solve(b.rest, [&] {
                record();
                return true;
              })) {
            for (auto v : b.rest) {
              val[v] = kFree;
            }
          }
          return false;
        });
      }
      for (auto v : b.vars) {
        val[v] = kFree;
      }
      if (b.solutions.empty()) {
        return std::nullopt;
      }
    }

    // Cross-block search, always extending the block with the fewest
    // compatible solutions.
    std::vector<std::vector<std::size_t>> cross_of(blocks.size());
    for (auto i : cross) {
      cross_of[block_of[lits[i].x]].push_back(i);
      cross_of[block_of[lits[i].y]].push_back(i);
    }
    std::vector<std::optional<std::size_t>> chosen(blocks.size());
    auto compatible = [&](std::size_t bi, BlockSolution const& s) {
      for (auto [v, x] : s.interface) {
        val[v] = x;
      }
      bool ok = true;
      for (auto i : cross_of[bi]) {
        auto const& l = lits[i];
        if (val[l.x] != kFree && val[l.y] != kFree
            && !holds(d, l, static_cast<VertexId>(val[l.x]), static_cast<VertexId>(val[l.y]))) {
          ok = false;
          break;
        }
      }
      for (auto [v, x] : s.interface) {
        val[v] = kFree;
      }
      return ok;
    };
    std::function<bool()> extend = [&]() -> bool {
      std::optional<std::size_t> best;
      std::vector<std::size_t>   best_ok;
      for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        if (chosen[bi]) {
          continue;
        }
        std::vector<std::size_t> ok;
        for (std::size_t s = 0; s < blocks[bi].solutions.size(); ++s) {
          if (compatible(bi, blocks[bi].solutions[s])) {
            ok.push_back(s);
          }
        }
        if (!best || ok.size() < best_ok.size()) {
          best    = bi;
          best_ok = std::move(ok);
          if (best_ok.empty()) {
            return false;
          }
        }
      }
      if (!best) {
        return true;
      }
      for (auto s : best_ok) {
        chosen[*best] = s;
        for (auto [v, x] : blocks[*best].solutions[s].interface) {
          val[v] = x;
        }
        if (extend()) {
          return true;
        }
        for (auto [v, x] : blocks[*best].solutions[s].interface) {
          val[v] = kFree;
        }
      }
      chosen[*best].reset();
      return false;
    };
    if (!extend()) {
      return std::nullopt;
    }
    Assignment a;
    a.image.assign(nv, 0);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      for (auto [v, x] : blocks[bi].solutions[*chosen[bi]].full) {
        a.image[v] = x;
      }
    }
    return a;
  }

  std::optional<UnionMatch> evaluate_union(Structure const& d, UnionQuery const& u) {
    for (std::size_t i = 0; i < u.disjuncts.size(); ++i) {
      if (auto a = evaluate(d, u.disjuncts[i])) {
        return UnionMatch{i, std::move(*a)};
      }
    }
    return std::nullopt;
  }

}  // namespace thue2dlite
