#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "fusion/convert.hpp"
#include "fusion/traverse.hpp"
#include "overloaded.hpp"
#include "rewrite_util.hpp"

namespace fusion {

namespace {

using detail::bump;
using detail::Counts;
using detail::has;
using detail::LabelList;
using Step = std::pair<LabelId, LabelId>;

// Atoms whose vertices all end up in one fuse become single vertices.
Expression collapse_merged_atoms(const Expression& e) {
  const std::vector<LabelList> pending = detail::pending_fuses(e);
  return fold<Expression>(e, [&](const Node& node, std::size_t at, std::span<Expression> kids) {
    if (const auto* x = std::get_if<Verts>(&node))
      return has(pending[at], x->label) ? verts(x->label.value, 1) : verts(x->label.value, x->count);
    return with_children(node, kids.data(), kids.size());
  });
}

// Decides which atom copies and joins can go without changing the graph.
// A final vertex needs one surviving creation; a final edge needs one
// join witness whose two endpoint items both survive.
class Pruner {
 public:
  explicit Pruner(const Expression& e) : trace_(evaluate_traced(e, true)) {
    const std::size_t n_items = trace_.items.size();
    alive_.assign(n_items, 0);
    for (std::uint32_t i = 0; i < n_items; ++i) {
      if (!trace_.items[i].parts.empty()) continue;
      for (std::uint32_t x = i; x != EvaluationTrace::kNone; x = trace_.items[x].merged_into) ++alive_[x];
    }
    incident_.resize(n_items);
    std::map<std::pair<VertexId, VertexId>, std::uint32_t> edge_index;
    witness_edge_.resize(trace_.witnesses.size(), EvaluationTrace::kNone);
    witness_alive_.assign(trace_.witnesses.size(), 1);
    for (std::uint32_t w = 0; w < trace_.witnesses.size(); ++w) {
      const auto& wit = trace_.witnesses[w];
      by_join_[wit.join_preorder].push_back(w);
      VertexId u = trace_.vertex_of(wit.a);
      VertexId v = trace_.vertex_of(wit.b);
      if (u == v) continue;
      auto key = std::minmax(u, v);
      auto [it, fresh] = edge_index.try_emplace({key.first, key.second}, static_cast<std::uint32_t>(edge_alive_.size()));
      if (fresh) edge_alive_.push_back(0);
      witness_edge_[w] = it->second;
      ++edge_alive_[it->second];
      incident_[wit.a].push_back(w);
      incident_[wit.b].push_back(w);
    }
  }

  // Surviving copies per atom, in atom order.
  std::vector<std::uint64_t> prune_atoms(const std::vector<std::uint64_t>& counts) {
    std::vector<std::uint64_t> kept;
    const auto& first = trace_.atom_first_item;
    for (std::size_t a = 0; a < first.size(); ++a) {
      std::uint64_t copies = counts[a];
      // Copies of one atom are interchangeable, so removal from the top
      // stops at the first copy that is needed.
      while (copies > 0 && try_remove(static_cast<std::uint32_t>(first[a] + copies - 1))) --copies;
      kept.push_back(copies);
    }
    return kept;
  }

  // Joins (by preorder) that can go as well.
  std::set<std::size_t> prune_joins(const std::vector<std::size_t>& join_preorders) {
    std::set<std::size_t> removed;
    for (std::size_t j : join_preorders) {
      auto it = by_join_.find(j);
      std::map<std::uint32_t, std::uint32_t> lost;
      if (it != by_join_.end())
        for (std::uint32_t w : it->second)
          if (witness_alive_[w] && witness_edge_[w] != EvaluationTrace::kNone) ++lost[witness_edge_[w]];
      bool ok = true;
      for (auto [edge, c] : lost) ok = ok && edge_alive_[edge] > c;
      if (!ok) continue;
      removed.insert(j);
      if (it == by_join_.end()) continue;
      for (std::uint32_t w : it->second) kill_witness(w);
    }
    return removed;
  }

 private:
  void kill_witness(std::uint32_t w) {
    if (!witness_alive_[w]) return;
    witness_alive_[w] = 0;
    if (witness_edge_[w] != EvaluationTrace::kNone) --edge_alive_[witness_edge_[w]];
  }

  bool try_remove(std::uint32_t leaf) {
    std::vector<std::uint32_t> path;
    for (std::uint32_t x = leaf; x != EvaluationTrace::kNone; x = trace_.items[x].merged_into) path.push_back(x);
    if (alive_[path.back()] <= 1) return false;  // the final vertex would vanish
    std::vector<std::uint32_t> killed;
    bool ok = true;
    for (std::uint32_t x : path) {
      if (--alive_[x] > 0) continue;
      for (std::uint32_t w : incident_[x]) {
        if (!witness_alive_[w]) continue;
        kill_witness(w);
        killed.push_back(w);
        if (edge_alive_[witness_edge_[w]] == 0) ok = false;
      }
    }
    if (ok) return true;
    for (std::uint32_t x : path) ++alive_[x];
    for (std::uint32_t w : killed) {
      witness_alive_[w] = 1;
      ++edge_alive_[witness_edge_[w]];
    }
    return false;
  }

  EvaluationTrace trace_;
  std::vector<std::uint64_t> alive_;  // surviving creations below each item
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<std::uint32_t> witness_edge_;
  std::vector<char> witness_alive_;
  std::vector<std::uint32_t> edge_alive_;
  std::unordered_map<std::size_t, std::vector<std::uint32_t>> by_join_;
};

// A short relabel sequence with the same effect on the labels in `present`,
// using no label outside `present` and the labels the original run mentions.
std::optional<std::vector<Step>> synthesize_relabels(const Counts& present, const std::vector<Step>& run) {
  std::map<LabelId, LabelId> target;  // current label -> final label
  std::set<LabelId> spare;
  for (auto [a, b] : run) spare.insert({a, b});
  for (auto [l, c] : present) {
    if (c == 0) continue;
    LabelId y = l;
    for (auto [a, b] : run)
      if (y == a) y = b;
    target[l] = y;
  }
  std::vector<Step> out;
  while (true) {
    bool unsettled = false;
    bool moved = false;
    for (auto it = target.begin(); it != target.end(); ++it) {
      auto [c, t] = *it;
      if (c == t) continue;
      unsettled = true;
      auto occupant = target.find(t);
      if (occupant != target.end() && occupant->second != t) continue;
      out.push_back({c, t});
      target.erase(it);
      target[t] = t;
      moved = true;
      break;
    }
    if (!unsettled) return out;
    if (moved) continue;
    // Only cycles remain: park one label on a free one.
    auto cyc = std::find_if(target.begin(), target.end(), [](const auto& kv) { return kv.first != kv.second; });
    auto free_label = std::find_if(spare.begin(), spare.end(), [&](LabelId l) { return !target.count(l); });
    if (free_label == spare.end()) return std::nullopt;
    LabelId c = cyc->first;
    LabelId t = cyc->second;
    out.push_back({c, *free_label});
    target.erase(cyc);
    target[*free_label] = t;
  }
}

// A rebuilt subtree: a base expression (empty when every vertex below was
// pruned) with a run of relabels still to be placed on top.
struct Piece {
  std::optional<Expression> base;
  Counts base_counts;
  std::vector<Step> run;
  Counts counts;  // after the run
};

std::optional<Expression> materialize(Piece& p) {
  if (!p.base) return std::nullopt;
  std::vector<Step> steps = p.run;
  if (steps.size() > 1) {
    auto shorter = synthesize_relabels(p.base_counts, steps);
    if (shorter && shorter->size() < steps.size()) steps = std::move(*shorter);
  }
  Expression e = *p.base;
  for (auto [a, b] : steps) e = relabel(a.value, b.value, std::move(e));
  return e;
}

Piece settled(Expression e, Counts counts) {
  Piece p;
  p.base = std::move(e);
  p.base_counts = counts;
  p.counts = std::move(counts);
  return p;
}

unsigned count_in(const Counts& c, LabelId l) {
  auto it = c.find(l);
  return it == c.end() ? 0 : it->second;
}

}  // namespace

Rewrite prune_useless_vertices(const Expression& e) {
  Expression collapsed = collapse_merged_atoms(e);
  Pruner pruner(collapsed);
  std::vector<std::uint64_t> counts;
  for (const Verts* v : atoms_in_preorder(collapsed)) counts.push_back(v->count);
  std::vector<std::uint64_t> kept = pruner.prune_atoms(counts);
  std::vector<std::size_t> joins;
  for_each_preorder(collapsed, [&](const Expression& sub, std::size_t at, std::size_t) {
    if (sub.as<Join>()) joins.push_back(at);
  });
  std::set<std::size_t> dropped_joins = pruner.prune_joins(joins);

  std::uint32_t atom = 0;
  std::vector<AtomOrigin> origins;
  Piece root = fold<Piece>(collapsed, [&](const Node& node, std::size_t at, std::span<Piece> kids) -> Piece {
    return detail::match(
        node,
        [&](const Verts& x) {
          std::uint32_t id = atom++;
          if (kept[id] == 0) return Piece{};
          origins.push_back({id, 0});
          Counts c;
          bump(c, x.label, kept[id]);
          return settled(verts(x.label.value, kept[id]), std::move(c));
        },
        [&](const Join& x) {
          Piece p = std::move(kids[0]);
          if (dropped_joins.count(at) || count_in(p.counts, x.first) == 0 || count_in(p.counts, x.second) == 0)
            return p;
          auto inner = materialize(p);
          return settled(join(x.first.value, x.second.value, std::move(*inner)), p.counts);
        },
        [&](const Relabel& x) {
          Piece p = std::move(kids[0]);
          unsigned from = count_in(p.counts, x.from);
          if (x.from == x.to || from == 0) return p;
          p.run.push_back({x.from, x.to});
          p.counts.erase(x.from);
          bump(p.counts, x.to, from);
          return p;
        },
        [&](const Fuse& x) {
          Piece p = std::move(kids[0]);
          if (count_in(p.counts, x.label) <= 1) return p;
          auto inner = materialize(p);
          Counts c = p.counts;
          c[x.label] = 1;
          return settled(fuse(x.label.value, std::move(*inner)), std::move(c));
        },
        [&](const Union&) {
          if (!kids[0].base) return std::move(kids[1]);
          if (!kids[1].base) return std::move(kids[0]);
          Counts c = kids[0].counts;
          for (auto [l, n] : kids[1].counts) bump(c, l, n);
          auto left = materialize(kids[0]);
          auto right = materialize(kids[1]);
          return settled(union_of(std::move(*left), std::move(*right)), std::move(c));
        });
  });
  auto out = materialize(root);
  if (!out) throw std::logic_error("pruning removed every vertex");
  return {std::move(*out), std::move(origins)};
}

}  // namespace fusion
