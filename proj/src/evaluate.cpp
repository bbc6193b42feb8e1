#include "fusion/evaluate.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "fusion/traverse.hpp"
#include "overloaded.hpp"

namespace fusion {

namespace {

using Buckets = std::map<LabelId, std::vector<std::uint32_t>>;

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

class Evaluator {
 public:
  explicit Evaluator(bool record_witnesses) : record_(record_witnesses) {}

  EvaluationTrace run(const Expression& e) {
    Buckets root = fold<Buckets>(e, [&](const Node& node, std::size_t preorder, std::span<Buckets> kids) {
      return visit(node, preorder, kids);
    });
    finish(root);
    return std::move(trace_);
  }

 private:
  Buckets visit(const Node& node, std::size_t preorder, std::span<Buckets> kids) {
    return detail::match(
        node,
        [&](const Verts& x) {
          Buckets b;
          auto atom = static_cast<std::uint32_t>(trace_.atom_first_item.size());
          trace_.atom_first_item.push_back(static_cast<std::uint32_t>(trace_.items.size()));
          trace_.atom_preorder.push_back(preorder);
          auto& bucket = b[x.label];
          bucket.reserve(x.count);
          for (std::uint64_t t = 0; t < x.count; ++t) {
            bucket.push_back(new_item(CreationId{atom, t}));
          }
          return b;
        },
        [&](const Join& x) {
          Buckets b = std::move(kids[0]);
          auto i = b.find(x.first);
          auto j = b.find(x.second);
          if (i == b.end() || j == b.end()) return b;
          for (std::uint32_t u : i->second)
            for (std::uint32_t v : j->second) {
              add_edge(u, v);
              if (record_) trace_.witnesses.push_back({preorder, u, v});
            }
          return b;
        },
        [&](const Relabel& x) {
          Buckets b = std::move(kids[0]);
          if (x.from == x.to) return b;
          auto i = b.find(x.from);
          if (i == b.end()) return b;
          std::vector<std::uint32_t> moved = std::move(i->second);
          b.erase(i);
          append(b[x.to], std::move(moved));
          return b;
        },
        [&](const Fuse& x) {
          Buckets b = std::move(kids[0]);
          auto i = b.find(x.label);
          if (i == b.end() || i->second.size() < 2) return b;
          i->second = {merge(i->second, preorder)};
          return b;
        },
        [&](const Union&) {
          Buckets left = std::move(kids[0]);
          for (auto& [label, items] : kids[1]) append(left[label], std::move(items));
          return left;
        });
  }

  static void append(std::vector<std::uint32_t>& into, std::vector<std::uint32_t>&& from) {
    if (into.size() < from.size()) std::swap(into, from);
    into.insert(into.end(), from.begin(), from.end());
  }

  std::uint32_t new_item(CreationId creation) {
    auto id = static_cast<std::uint32_t>(trace_.items.size());
    EvaluationTrace::Item item;
    item.first_creation = creation;
    trace_.items.push_back(std::move(item));
    adjacency_.emplace_back();
    return id;
  }

  void add_edge(std::uint32_t u, std::uint32_t v) {
    if (edges_.insert(edge_key(u, v)).second) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
  }

  std::uint32_t merge(const std::vector<std::uint32_t>& parts, std::size_t preorder) {
    CreationId first = trace_.items[parts.front()].first_creation;
    for (std::uint32_t p : parts) first = std::min(first, trace_.items[p].first_creation);
    std::uint32_t merged = new_item(first);
    trace_.items[merged].parts = parts;
    trace_.items[merged].fuse_preorder = preorder;
    std::unordered_set<std::uint32_t> part_set(parts.begin(), parts.end());
    std::vector<std::uint32_t> outside;
    for (std::uint32_t p : parts) {
      trace_.items[p].merged_into = merged;
      for (std::uint32_t x : adjacency_[p]) {
        // Adjacency lists are lazy; the edge set is authoritative.
        if (edges_.erase(edge_key(p, x)) == 0) continue;
        if (!part_set.count(x)) outside.push_back(x);
      }
      adjacency_[p].clear();
      adjacency_[p].shrink_to_fit();
    }
    for (std::uint32_t x : outside) add_edge(merged, x);
    return merged;
  }

  void finish(const Buckets& root) {
    std::vector<std::uint32_t> alive;
    for (const auto& [label, items] : root) alive.insert(alive.end(), items.begin(), items.end());
    std::sort(alive.begin(), alive.end(), [&](std::uint32_t a, std::uint32_t b) {
      return trace_.items[a].first_creation < trace_.items[b].first_creation;
    });
    std::map<std::uint32_t, LabelId> label_of;
    for (const auto& [label, items] : root)
      for (std::uint32_t it : items) label_of[it] = label;

    trace_.vertex_item = alive;
    trace_.root_vertex.assign(trace_.items.size(), EvaluationTrace::kNone);
    for (VertexId v = 0; v < alive.size(); ++v) trace_.root_vertex[alive[v]] = v;

    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(edges_.size());
    for (std::uint64_t key : edges_) {
      auto a = static_cast<std::uint32_t>(key >> 32);
      auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
      edges.emplace_back(trace_.root_vertex[a], trace_.root_vertex[b]);
    }
    std::vector<LabelId> labels(alive.size());
    std::vector<std::vector<CreationId>> provenance(alive.size());
    for (VertexId v = 0; v < alive.size(); ++v) {
      labels[v] = label_of.at(alive[v]);
      provenance[v] = leaves_below(alive[v]);
    }
    trace_.graph = LabeledGraph(SimpleGraph::from_edges(alive.size(), std::move(edges)), std::move(labels),
                                std::move(provenance));
  }

  std::vector<CreationId> leaves_below(std::uint32_t item) const {
    std::vector<CreationId> out;
    std::vector<std::uint32_t> stack{item};
    while (!stack.empty()) {
      std::uint32_t cur = stack.back();
      stack.pop_back();
      const auto& it = trace_.items[cur];
      if (it.parts.empty()) {
        out.push_back(it.first_creation);
      } else {
        stack.insert(stack.end(), it.parts.begin(), it.parts.end());
      }
    }
    return out;
  }

  bool record_;
  EvaluationTrace trace_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::unordered_set<std::uint64_t> edges_;
};

}  // namespace

std::uint32_t EvaluationTrace::root_of(std::uint32_t item) const {
  while (items[item].merged_into != kNone) item = items[item].merged_into;
  return item;
}

VertexId EvaluationTrace::vertex_of(std::uint32_t item) const { return root_vertex[root_of(item)]; }

LabeledGraph evaluate(const Expression& e) { return Evaluator(false).run(e).graph; }

EvaluationTrace evaluate_traced(const Expression& e, bool record_witnesses) {
  return Evaluator(record_witnesses).run(e);
}

std::vector<const Verts*> atoms_in_preorder(const Expression& e) {
  std::vector<const Verts*> atoms;
  for_each_preorder(e, [&](const Expression& sub, std::size_t, std::size_t) {
    if (const Verts* v = sub.as<Verts>()) atoms.push_back(v);
  });
  return atoms;
}

ConversionCertificate certificate_from_origins(const LabeledGraph& input, const LabeledGraph& output,
                                               const std::vector<AtomOrigin>& origins) {
  std::vector<std::pair<CreationId, VertexId>> owner;
  for (VertexId v = 0; v < input.vertex_count(); ++v)
    for (const CreationId& c : input.provenance(v)) owner.emplace_back(c, v);
  std::sort(owner.begin(), owner.end());
  auto find_owner = [&](CreationId c) -> VertexId {
    auto it = std::lower_bound(owner.begin(), owner.end(), std::make_pair(c, VertexId{0}));
    if (it == owner.end() || it->first != c)
      throw CertificateError("output creation has no counterpart in the input graph");
    return it->second;
  };

  ConversionCertificate cert;
  cert.to_input.resize(output.vertex_count());
  for (VertexId v = 0; v < output.vertex_count(); ++v) {
    bool first = true;
    for (const CreationId& c : output.provenance(v)) {
      if (c.atom >= origins.size()) throw CertificateError("atom origin table too short");
      const AtomOrigin& o = origins[c.atom];
      VertexId image = find_owner(CreationId{o.atom, o.offset_base + c.offset});
      if (first) {
        cert.to_input[v] = image;
        first = false;
      } else if (cert.to_input[v] != image) {
        throw CertificateError("output vertex " + std::to_string(v) + " combines several input vertices");
      }
    }
  }
  return cert;
}

std::vector<AtomOrigin> collect_origins(const Expression& output,
                                        const std::unordered_map<const Node*, AtomOrigin>& by_node) {
  std::vector<AtomOrigin> origins;
  for_each_preorder(output, [&](const Expression& sub, std::size_t, std::size_t) {
    if (!sub.as<Verts>()) return;
    auto it = by_node.find(sub.get());
    if (it == by_node.end()) throw CertificateError("rewrite produced an atom without origin");
    origins.push_back(it->second);
  });
  return origins;
}

std::vector<AtomOrigin> compose_origins(const std::vector<AtomOrigin>& middle_from_input,
                                        const std::vector<AtomOrigin>& output_from_middle) {
  std::vector<AtomOrigin> out;
  out.reserve(output_from_middle.size());
  for (const AtomOrigin& o : output_from_middle) {
    const AtomOrigin& m = middle_from_input.at(o.atom);
    out.push_back({m.atom, m.offset_base + o.offset_base});
  }
  return out;
}

std::vector<AtomOrigin> identity_origins(const Expression& e) {
  std::vector<AtomOrigin> out;
  auto n = static_cast<std::uint32_t>(atoms_in_preorder(e).size());
  for (std::uint32_t i = 0; i < n; ++i) out.push_back({i, 0});
  return out;
}

}  // namespace fusion
