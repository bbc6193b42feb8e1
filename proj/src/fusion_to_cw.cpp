#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>

#include "fusion/analysis.hpp"
#include "fusion/convert.hpp"
#include "fusion/traverse.hpp"
#include "overloaded.hpp"
#include "rewrite_util.hpp"

namespace fusion {

namespace {

using detail::LabelList;
using CompId = std::uint32_t;

// A label class whose vertices all end up in one merged vertex that is not
// complete yet. It has no vertices in the output; `pending` lists the
// labels of merged vertices it must be joined to once it exists.
struct Subject {
  VertexId vertex;
  std::size_t last_merge;
  LabelList pending;
};

struct Part {
  std::optional<Expression> expr;
  std::set<CompId> present;
  std::map<LabelId, Subject> subjects;
};

LabelList renamed(const LabelList& s, LabelId from, LabelId to) {
  LabelList out;
  for (LabelId l : s) detail::insert(out, l == from ? to : l);
  return out;
}

class Converter {
 public:
  explicit Converter(const Expression& e) : input_(e), trace_(evaluate_traced(e, false)) {}

  CliqueWidthConversion run() {
    Part root = fold<Part>(input_, [&](const Node& node, std::size_t at, std::span<Part> kids) {
      return visit(node, at, kids);
    });
    if (!root.subjects.empty() || !root.expr) throw std::logic_error("conversion left a merge unfinished");
    std::vector<CompositeLabel> labels;
    Expression flat = flatten(*root.expr, labels);
    CliqueWidthConversion out{flat, {}, std::move(labels), std::move(plan_), {}};
    out.origins = collect_origins(out.expression, origin_by_node_);
    out.certificate = certificate_from_origins(trace_.graph, evaluate(out.expression), out.origins);
    return out;
  }

 private:
  Part visit(const Node& node, std::size_t at, std::span<Part> kids) {
    return detail::match(
        node, [&](const Verts& x) { return atom(x); },
        [&](const Join& x) { return apply_join(std::move(kids[0]), x.first, x.second); },
        [&](const Relabel& x) { return apply_relabel(std::move(kids[0]), x.from, x.to); },
        [&](const Fuse& x) { return apply_fuse(std::move(kids[0]), x.label, at); },
        [&](const Union&) { return combine(std::move(kids[0]), std::move(kids[1])); });
  }

  CompId comp(LabelId own, LabelList pending) {
    CompositeLabel c{own, std::move(pending)};
    auto it = std::find(table_.begin(), table_.end(), c);
    if (it != table_.end()) return static_cast<CompId>(it - table_.begin());
    table_.push_back(std::move(c));
    return static_cast<CompId>(table_.size() - 1);
  }

  Expression new_atom(CompId c, AtomOrigin origin) {
    Expression e = vert(c + 1);
    origin_by_node_[e.get()] = origin;
    return e;
  }

  static void add(Part& p, Expression e) {
    p.expr = p.expr ? union_of(std::move(*p.expr), std::move(e)) : std::move(e);
  }

  Part atom(const Verts& x) {
    const std::uint32_t index = atom_count_++;
    const std::uint32_t leaf = trace_.atom_first_item[index];
    const std::uint32_t root = trace_.root_of(leaf);
    Part p;
    if (!trace_.items[root].parts.empty()) {
      p.subjects[x.label] = Subject{trace_.root_vertex[root], trace_.items[root].fuse_preorder, {}};
      return p;
    }
    CompId c = comp(x.label, {});
    for (std::uint64_t t = 0; t < x.count; ++t) add(p, new_atom(c, AtomOrigin{index, t}));
    p.present.insert(c);
    return p;
  }

  Part combine(Part a, Part b) {
    if (b.expr) add(a, std::move(*b.expr));
    a.present.insert(b.present.begin(), b.present.end());
    for (auto& [l, s] : b.subjects) {
      auto [it, fresh] = a.subjects.try_emplace(l, s);
      if (fresh) continue;
      if (it->second.vertex != s.vertex) throw std::logic_error("one label feeds two merged vertices");
      for (LabelId q : s.pending) detail::insert(it->second.pending, q);
    }
    return a;
  }

  // Renames composites by `f`; targets of f are fixed points, so the
  // relabels can be emitted in any order.
  template <class F>
  void remap(Part& p, F f) {
    std::set<CompId> next;
    for (CompId c : p.present) {
      CompositeLabel target = f(table_[c]);
      CompId d = comp(target.own, std::move(target.pending));
      if (d != c) p.expr = relabel(c + 1, d + 1, std::move(*p.expr));
      next.insert(d);
    }
    p.present = std::move(next);
  }

  std::vector<CompId> with_own(const Part& p, LabelId own) const {
    std::vector<CompId> out;
    for (CompId c : p.present)
      if (table_[c].own == own) out.push_back(c);
    return out;
  }

  Part apply_join(Part p, LabelId a, LabelId b) {
    auto sa = p.subjects.find(a);
    auto sb = p.subjects.find(b);
    if (sa == p.subjects.end() && sb == p.subjects.end()) {
      for (CompId x : with_own(p, a))
        for (CompId y : with_own(p, b)) p.expr = join(x + 1, y + 1, std::move(*p.expr));
      return p;
    }
    if (sa != p.subjects.end() && sb != p.subjects.end()) {
      if (sa->second.vertex == sb->second.vertex) return p;  // the edge disappears in the merge
      // The vertex completed first remembers the other one.
      if (sa->second.last_merge > sb->second.last_merge) {
        detail::insert(sa->second.pending, b);
      } else {
        detail::insert(sb->second.pending, a);
      }
      return p;
    }
    LabelId subject = sa != p.subjects.end() ? a : b;
    LabelId regular = sa != p.subjects.end() ? b : a;
    remap(p, [&](const CompositeLabel& c) {
      CompositeLabel d = c;
      if (c.own == regular) detail::insert(d.pending, subject);
      return d;
    });
    return p;
  }

  Part apply_relabel(Part p, LabelId from, LabelId to) {
    if (from == to) return p;
    remap(p, [&](const CompositeLabel& c) {
      return CompositeLabel{c.own == from ? to : c.own, renamed(c.pending, from, to)};
    });
    std::map<LabelId, Subject> subjects;
    for (auto& [l, s] : p.subjects) {
      LabelId target = l == from ? to : l;
      Subject moved{s.vertex, s.last_merge, renamed(s.pending, from, to)};
      auto [it, fresh] = subjects.try_emplace(target, moved);
      if (fresh) continue;
      if (it->second.vertex != moved.vertex) throw std::logic_error("one label feeds two merged vertices");
      for (LabelId q : moved.pending) detail::insert(it->second.pending, q);
    }
    p.subjects = std::move(subjects);
    return p;
  }

  Part apply_fuse(Part p, LabelId l, std::size_t at) {
    auto it = p.subjects.find(l);
    if (it == p.subjects.end() || it->second.last_merge != at) return p;
    Subject s = std::move(it->second);
    p.subjects.erase(it);

    std::uint32_t item = trace_.vertex_item[s.vertex];
    CreationId first = trace_.items[item].first_creation;
    plan_.push_back({l, at, s.vertex});

    CompId self = comp(l, s.pending);
    std::vector<CompId> partners;
    for (CompId c : p.present)
      if (detail::has(table_[c].pending, l)) partners.push_back(c);
    std::sort(partners.begin(), partners.end(), [&](CompId x, CompId y) {
      return std::tie(table_[x].own, table_[x].pending) < std::tie(table_[y].own, table_[y].pending);
    });
    add(p, new_atom(self, AtomOrigin{first.atom, first.offset}));
    for (CompId c : partners) p.expr = join(self + 1, c + 1, std::move(*p.expr));
    p.present.insert(self);
    remap(p, [&](const CompositeLabel& c) {
      CompositeLabel d = c;
      d.pending.erase(std::remove(d.pending.begin(), d.pending.end(), l), d.pending.end());
      return d;
    });
    return p;
  }

  // Renumbers composite ids by first use in preorder.
  Expression flatten(const Expression& e, std::vector<CompositeLabel>& table_out) {
    std::unordered_map<std::uint32_t, std::uint32_t> number;
    auto id = [&](LabelId l) {
      auto [it, fresh] = number.try_emplace(l.value, static_cast<std::uint32_t>(number.size() + 1));
      if (fresh) table_out.push_back(table_[l.value - 1]);
      return it->second;
    };
    for_each_preorder(e, [&](const Expression& sub, std::size_t, std::size_t) {
      detail::match(
          sub.node(), [&](const Verts& x) { id(x.label); },
          [&](const Join& x) {
            id(x.first);
            id(x.second);
          },
          [&](const Relabel& x) {
            id(x.from);
            id(x.to);
          },
          [](const Fuse&) {}, [](const Union&) {});
    });
    std::unordered_map<const Node*, AtomOrigin> renamed_origins;
    Expression out = fold<Expression>(e, [&](const Node& node, std::size_t, std::span<Expression> kids) {
      return detail::match(
          node,
          [&](const Verts& x) {
            Expression a = verts(number.at(x.label.value), x.count);
            renamed_origins[a.get()] = origin_by_node_.at(&node);
            return a;
          },
          [&](const Join& x) {
            return join(number.at(x.first.value), number.at(x.second.value), std::move(kids[0]));
          },
          [&](const Relabel& x) {
            return relabel(number.at(x.from.value), number.at(x.to.value), std::move(kids[0]));
          },
          [&](const Fuse&) -> Expression { throw std::logic_error("fuse in clique-width output"); },
          [&](const Union&) { return union_of(std::move(kids[0]), std::move(kids[1])); });
    });
    origin_by_node_ = std::move(renamed_origins);
    return out;
  }

  const Expression& input_;
  EvaluationTrace trace_;
  std::vector<CompositeLabel> table_;
  std::unordered_map<const Node*, AtomOrigin> origin_by_node_;
  std::vector<MergePlanEntry> plan_;
  std::uint32_t atom_count_ = 0;
};

bool is_clique_width_form(const Expression& e) { return validate_expression(e, true).ok(); }

}  // namespace

CliqueWidthConversion fusion_to_cw(const Expression& e) {
  if (is_clique_width_form(e)) {
    CliqueWidthConversion out{e, {}, {}, {}, identity_origins(e)};
    LabeledGraph g = evaluate(e);
    out.certificate = certificate_from_origins(g, g, out.origins);
    std::uint32_t max_label = expression_stats(e).max_label;
    for (std::uint32_t l = 1; l <= max_label; ++l) out.label_table.push_back({LabelId{l}, {}});
    return out;
  }
  return Converter(e).run();
}

CliqueWidthConversion to_clique_width(const Expression& e) {
  if (is_clique_width_form(e)) return fusion_to_cw(e);
  Rewrite local = localize_merges(e);
  Rewrite pruned = prune_useless_vertices(local.expression);
  CliqueWidthConversion out = fusion_to_cw(pruned.expression);
  out.origins = compose_origins(compose_origins(local.origins, pruned.origins), out.origins);
  out.certificate = certificate_from_origins(evaluate(e), evaluate(out.expression), out.origins);
  return out;
}

}  // namespace fusion
