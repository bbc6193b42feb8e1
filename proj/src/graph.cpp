#include "fusion/graph.hpp"

#include <algorithm>
#include <numeric>

namespace fusion {

SimpleGraph SimpleGraph::from_edges(std::size_t n, std::vector<std::pair<VertexId, VertexId>> edges) {
  SimpleGraph g(n);
  for (auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (auto [u, v] : edges) {
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& list : g.adjacency_) std::sort(list.begin(), list.end());
  g.edge_count_ = edges.size();
  return g;
}

bool SimpleGraph::add_edge(VertexId u, VertexId v) {
  if (u >= vertex_count() || v >= vertex_count()) throw std::out_of_range("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
  auto& au = adjacency_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v) return false;
  au.insert(it, v);
  auto& av = adjacency_[v];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
  ++edge_count_;
  return true;
}

bool SimpleGraph::has_edge(VertexId u, VertexId v) const {
  if (u >= vertex_count() || v >= vertex_count()) return false;
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u] : adjacency_[v];
  VertexId other = &a == &adjacency_[u] ? v : u;
  return std::binary_search(a.begin(), a.end(), other);
}

std::vector<std::pair<VertexId, VertexId>> SimpleGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edge_count_);
  for (VertexId u = 0; u < vertex_count(); ++u)
    for (VertexId v : adjacency_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

LabeledGraph::LabeledGraph(SimpleGraph structure, std::vector<LabelId> labels,
                           std::vector<std::vector<CreationId>> provenance)
    : structure_(std::move(structure)), labels_(std::move(labels)), provenance_(std::move(provenance)) {
  if (labels_.size() != structure_.vertex_count() || provenance_.size() != labels_.size())
    throw std::invalid_argument("labeled graph: labels and provenance must cover every vertex");
  std::vector<CreationId> all;
  for (auto& p : provenance_) {
    if (p.empty()) throw std::invalid_argument("labeled graph: empty provenance");
    std::sort(p.begin(), p.end());
    all.insert(all.end(), p.begin(), p.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw std::invalid_argument("labeled graph: provenance sets overlap");
}

LabeledGraph LabeledGraph::with_fresh_provenance(SimpleGraph structure, std::vector<LabelId> labels) {
  std::vector<std::vector<CreationId>> provenance(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) provenance[v] = {CreationId{static_cast<std::uint32_t>(v), 0}};
  return LabeledGraph(std::move(structure), std::move(labels), std::move(provenance));
}

LabeledGraph fuse_label(const LabeledGraph& g, LabelId label) {
  const std::size_t n = g.vertex_count();
  std::vector<VertexId> merged;
  for (VertexId v = 0; v < n; ++v)
    if (g.label(v) == label) merged.push_back(v);
  if (merged.size() < 2) return g;

  // Old vertices in the order of their smallest creation, with the merged
  // class represented by its first member.
  std::vector<char> in_class(n, 0);
  for (VertexId v : merged) in_class[v] = 1;
  std::vector<CreationId> class_provenance;
  for (VertexId v : merged)
    class_provenance.insert(class_provenance.end(), g.provenance(v).begin(), g.provenance(v).end());
  std::sort(class_provenance.begin(), class_provenance.end());

  std::vector<VertexId> keep;
  for (VertexId v = 0; v < n; ++v)
    if (!in_class[v]) keep.push_back(v);
  keep.push_back(merged.front());
  auto first_creation = [&](VertexId v) { return in_class[v] ? class_provenance.front() : g.provenance(v).front(); };
  std::sort(keep.begin(), keep.end(), [&](VertexId a, VertexId b) { return first_creation(a) < first_creation(b); });

  std::vector<VertexId> new_id(n);
  for (VertexId i = 0; i < keep.size(); ++i) new_id[keep[i]] = i;
  for (VertexId v : merged) new_id[v] = new_id[merged.front()];

  std::vector<std::pair<VertexId, VertexId>> edges;
  for (auto [u, v] : g.structure().edges()) {
    if (in_class[u] && in_class[v]) continue;
    edges.emplace_back(new_id[u], new_id[v]);
  }
  std::vector<LabelId> labels(keep.size());
  std::vector<std::vector<CreationId>> provenance(keep.size());
  for (VertexId i = 0; i < keep.size(); ++i) {
    VertexId old = keep[i];
    labels[i] = g.label(old);
    provenance[i] = in_class[old] ? class_provenance : g.provenance(old);
  }
  return LabeledGraph(SimpleGraph::from_edges(keep.size(), std::move(edges)), std::move(labels),
                      std::move(provenance));
}

bool check_correspondence(const SimpleGraph& input, const SimpleGraph& output, const ConversionCertificate& cert) {
  if (cert.to_input.size() != output.vertex_count())
    throw CertificateError("certificate covers " + std::to_string(cert.to_input.size()) + " of " +
                           std::to_string(output.vertex_count()) + " output vertices");
  std::vector<char> hit(input.vertex_count(), 0);
  for (VertexId image : cert.to_input) {
    if (image >= input.vertex_count()) throw CertificateError("certificate maps outside the input graph");
    if (hit[image]) throw CertificateError("certificate is not injective at input vertex " + std::to_string(image));
    hit[image] = 1;
  }
  if (input.vertex_count() != output.vertex_count()) return false;
  if (input.edge_count() != output.edge_count()) return false;
  for (auto [u, v] : output.edges())
    if (!input.has_edge(cert.to_input[u], cert.to_input[v])) return false;
  return true;
}

namespace {

class SmallIsomorphism {
 public:
  SmallIsomorphism(const SimpleGraph& a, const SimpleGraph& b) : a_(a), b_(b), map_(a.vertex_count()), used_(a.vertex_count(), 0) {
    order_.resize(a.vertex_count());
    std::iota(order_.begin(), order_.end(), 0);
    // Highest degree first prunes early.
    std::sort(order_.begin(), order_.end(),
              [&](VertexId x, VertexId y) { return a.neighbors(x).size() > a.neighbors(y).size(); });
  }

  bool run() { return extend(0); }

 private:
  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    VertexId v = order_[depth];
    for (VertexId w = 0; w < b_.vertex_count(); ++w) {
      if (used_[w] || b_.neighbors(w).size() != a_.neighbors(v).size()) continue;
      bool consistent = true;
      for (std::size_t d = 0; d < depth && consistent; ++d) {
        VertexId u = order_[d];
        consistent = a_.has_edge(u, v) == b_.has_edge(map_[u], w);
      }
      if (!consistent) continue;
      map_[v] = w;
      used_[w] = 1;
      if (extend(depth + 1)) return true;
      used_[w] = 0;
    }
    return false;
  }

  const SimpleGraph& a_;
  const SimpleGraph& b_;
  std::vector<VertexId> order_;
  std::vector<VertexId> map_;
  std::vector<char> used_;
};

std::vector<std::size_t> degree_sequence(const SimpleGraph& g) {
  std::vector<std::size_t> d;
  for (VertexId v = 0; v < g.vertex_count(); ++v) d.push_back(g.neighbors(v).size());
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

bool isomorphic_small(const SimpleGraph& a, const SimpleGraph& b, std::size_t limit) {
  if (a.vertex_count() > limit || b.vertex_count() > limit)
    throw SizeLimitExceeded("isomorphism check limited to " + std::to_string(limit) + " vertices");
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  if (degree_sequence(a) != degree_sequence(b)) return false;
  return SmallIsomorphism(a, b).run();
}

std::string dump_labeled_graph(const LabeledGraph& g) {
  std::string out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out += "v " + std::to_string(v + 1) + " label " + std::to_string(g.label(v).value) + " prov";
    for (const CreationId& c : g.provenance(v)) out += " " + std::to_string(c.atom) + ":" + std::to_string(c.offset);
    out += " adj";
    for (VertexId w : g.structure().neighbors(v)) out += " " + std::to_string(w + 1);
    out += '\n';
  }
  return out;
}

}  // namespace fusion
