#include "fusion/treedec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "fusion/evaluate.hpp"

namespace fusion {

FormatError::FormatError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> words;
};

// Non-empty, non-comment lines split on whitespace.
std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    std::size_t end = text.find('\n');
    std::string_view raw = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      if (i > start) line.words.push_back(raw.substr(start, i - start));
    }
    if (line.words.empty() || line.words[0] == "c") continue;
    lines.push_back(std::move(line));
  }
  return lines;
}

std::uint32_t number_at(const Line& line, std::size_t index) {
  if (index >= line.words.size()) throw FormatError(line.number, "missing number");
  std::string_view w = line.words[index];
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
  if (ec != std::errc() || ptr != w.data() + w.size())
    throw FormatError(line.number, "expected a number, got '" + std::string(w) + "'");
  return value;
}

void expect_words(const Line& line, std::size_t count) {
  if (line.words.size() != count)
    throw FormatError(line.number, "expected " + std::to_string(count) + " fields");
}

}  // namespace

SimpleGraph HostGraph::to_simple() const {
  std::vector<std::pair<VertexId, VertexId>> zero_based;
  for (auto [u, v] : edges) zero_based.emplace_back(u - 1, v - 1);
  return SimpleGraph::from_edges(n, std::move(zero_based));
}

std::int64_t TreeDecomposition::width() const {
  std::int64_t w = -1;
  for (const auto& b : bags) w = std::max<std::int64_t>(w, static_cast<std::int64_t>(b.size()) - 1);
  return w;
}

HostGraph parse_gr(std::string_view text) {
  std::vector<Line> lines = split_lines(text);
  if (lines.empty()) throw FormatError(0, "missing header");
  const Line& header = lines[0];
  if (header.words.size() != 4 || header.words[0] != "p" || header.words[1] != "tw")
    throw FormatError(header.number, "expected 'p tw <n> <m>'");
  HostGraph g;
  g.n = number_at(header, 2);
  std::uint32_t m = number_at(header, 3);
  if (lines.size() - 1 != m)
    throw FormatError(header.number, "header announces " + std::to_string(m) + " edges, found " +
                                         std::to_string(lines.size() - 1));
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    expect_words(lines[i], 2);
    std::uint32_t u = number_at(lines[i], 0);
    std::uint32_t v = number_at(lines[i], 1);
    if (u < 1 || v < 1 || u > g.n || v > g.n) throw FormatError(lines[i].number, "endpoint out of range");
    if (u == v) throw FormatError(lines[i].number, "self-loop on vertex " + std::to_string(u));
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

std::string write_gr(const HostGraph& g) {
  std::string out = "p tw " + std::to_string(g.n) + " " + std::to_string(g.edges.size()) + "\n";
  for (auto [u, v] : g.edges) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

std::string write_gr(const SimpleGraph& g) {
  HostGraph h;
  h.n = static_cast<std::uint32_t>(g.vertex_count());
  for (auto [u, v] : g.edges()) h.edges.emplace_back(u + 1, v + 1);
  return write_gr(h);
}

TreeDecomposition parse_td(std::string_view text) {
  std::vector<Line> lines = split_lines(text);
  if (lines.empty()) throw FormatError(0, "missing header");
  const Line& header = lines[0];
  if (header.words.size() != 5 || header.words[0] != "s" || header.words[1] != "td")
    throw FormatError(header.number, "expected 's td <bags> <width+1> <n>'");
  TreeDecomposition td;
  std::uint32_t bag_count = number_at(header, 2);
  std::uint32_t claimed = number_at(header, 3);
  td.vertex_count = number_at(header, 4);
  td.bags.resize(bag_count);
  std::vector<char> seen(bag_count, 0);

  std::size_t i = 1;
  for (; i < lines.size() && lines[i].words[0] == "b"; ++i) {
    const Line& line = lines[i];
    std::uint32_t id = number_at(line, 1);
    if (id < 1 || id > bag_count) throw FormatError(line.number, "bag id out of range");
    if (seen[id - 1]) throw FormatError(line.number, "bag " + std::to_string(id) + " listed twice");
    seen[id - 1] = 1;
    auto& bag = td.bags[id - 1];
    for (std::size_t w = 2; w < line.words.size(); ++w) {
      std::uint32_t v = number_at(line, w);
      if (v < 1 || v > td.vertex_count) throw FormatError(line.number, "vertex out of range");
      bag.push_back(v);
    }
    std::sort(bag.begin(), bag.end());
    if (std::adjacent_find(bag.begin(), bag.end()) != bag.end())
      throw FormatError(line.number, "vertex repeated in bag");
  }
  for (std::uint32_t b = 0; b < bag_count; ++b)
    if (!seen[b]) throw FormatError(header.number, "bag " + std::to_string(b + 1) + " is missing");

  for (; i < lines.size(); ++i) {
    const Line& line = lines[i];
    expect_words(line, 2);
    std::uint32_t a = number_at(line, 0);
    std::uint32_t b = number_at(line, 1);
    if (a < 1 || b < 1 || a > bag_count || b > bag_count) throw FormatError(line.number, "tree edge out of range");
    td.tree_edges.push_back({a, b});
  }

  std::size_t largest = 0;
  for (const auto& bag : td.bags) largest = std::max(largest, bag.size());
  if (largest != claimed)
    throw FormatError(header.number, "header width+1 is " + std::to_string(claimed) + " but the largest bag has " +
                                         std::to_string(largest) + " vertices");

  // n - 1 edges without a cycle make a tree.
  if (bag_count > 0 && td.tree_edges.size() != bag_count - 1)
    throw FormatError(header.number, "tree edges do not form a tree: " + std::to_string(td.tree_edges.size()) +
                                         " edges for " + std::to_string(bag_count) + " bags");
  std::vector<std::uint32_t> parent(bag_count);
  for (std::uint32_t b = 0; b < bag_count; ++b) parent[b] = b;
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : td.tree_edges) {
    std::uint32_t ra = find(a - 1);
    std::uint32_t rb = find(b - 1);
    if (ra == rb) throw FormatError(header.number, "tree edges do not form a tree: cycle through bag " + std::to_string(a));
    parent[ra] = rb;
  }
  return td;
}

std::string write_td(const TreeDecomposition& td) {
  std::string out = "s td " + std::to_string(td.bags.size()) + " " + std::to_string(td.width() + 1) + " " +
                    std::to_string(td.vertex_count) + "\n";
  for (std::size_t b = 0; b < td.bags.size(); ++b) {
    out += "b " + std::to_string(b + 1);
    for (std::uint32_t v : td.bags[b]) out += " " + std::to_string(v);
    out += "\n";
  }
  for (auto [a, b] : td.tree_edges) out += std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

namespace {

std::vector<std::vector<std::uint32_t>> tree_adjacency(const TreeDecomposition& td) {
  std::vector<std::vector<std::uint32_t>> adj(td.bags.size());
  for (auto [a, b] : td.tree_edges) {
    if (a < 1 || b < 1 || a > td.bags.size() || b > td.bags.size()) continue;
    adj[a - 1].push_back(b - 1);
    adj[b - 1].push_back(a - 1);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

}  // namespace

ValidationReport validate_td(const HostGraph& g, const TreeDecomposition& td) {
  ValidationReport report;
  auto add = [&](std::size_t witness, std::string message) { report.violations.push_back({witness, std::move(message)}); };
  if (td.vertex_count != g.n)
    add(td.vertex_count, "decomposition is for " + std::to_string(td.vertex_count) + " vertices, graph has " +
                             std::to_string(g.n));

  std::vector<std::vector<std::uint32_t>> bags_of(g.n + 1);
  for (std::uint32_t b = 0; b < td.bags.size(); ++b)
    for (std::uint32_t v : td.bags[b])
      if (v >= 1 && v <= g.n) bags_of[v].push_back(b);

  for (std::uint32_t v = 1; v <= g.n; ++v)
    if (bags_of[v].empty()) add(v, "vertex " + std::to_string(v) + " is in no bag");

  for (auto [u, v] : g.edges) {
    bool covered = false;
    for (std::uint32_t b : bags_of[u])
      if (std::binary_search(td.bags[b].begin(), td.bags[b].end(), v)) covered = true;
    if (!covered) add(u, "edge " + std::to_string(u) + " " + std::to_string(v) + " is in no bag");
  }

  auto adj = tree_adjacency(td);
  {
    // Tree shape: |bags| - 1 edges reaching every bag from bag 1.
    std::vector<char> reached(td.bags.size(), 0);
    std::vector<std::uint32_t> stack;
    if (!td.bags.empty()) {
      stack.push_back(0);
      reached[0] = 1;
    }
    while (!stack.empty()) {
      std::uint32_t b = stack.back();
      stack.pop_back();
      for (std::uint32_t c : adj[b])
        if (!reached[c]) {
          reached[c] = 1;
          stack.push_back(c);
        }
    }
    bool connected = std::all_of(reached.begin(), reached.end(), [](char r) { return r; });
    if (td.bags.empty() || td.tree_edges.size() != td.bags.size() - 1 || !connected)
      add(td.bags.size(), "tree edges do not form a tree on the bags");
  }
  std::vector<char> in_set(td.bags.size(), 0);
  for (std::uint32_t v = 1; v <= g.n; ++v) {
    const auto& nodes = bags_of[v];
    if (nodes.size() < 2) continue;
    for (std::uint32_t b : nodes) in_set[b] = 1;
    std::vector<std::uint32_t> stack{nodes.front()};
    std::vector<char> reached(td.bags.size(), 0);
    reached[nodes.front()] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      std::uint32_t b = stack.back();
      stack.pop_back();
      for (std::uint32_t c : adj[b])
        if (in_set[c] && !reached[c]) {
          reached[c] = 1;
          ++count;
          stack.push_back(c);
        }
    }
    if (count != nodes.size())
      add(v, "bags containing vertex " + std::to_string(v) + " are not connected in the tree");
    for (std::uint32_t b : nodes) in_set[b] = 0;
  }
  return report;
}

namespace {

class TdBuilder {
 public:
  TdBuilder(const HostGraph& g, const TreeDecomposition& td)
      : g_(g), td_(td), k_(static_cast<std::uint32_t>(std::max<std::int64_t>(td.width(), 0))), reserved_(k_ + 2) {}

  TreeDecompositionConversion run() {
    root_tree();
    assign_labels();
    assign_edges();
    mark_touched();
    std::vector<std::optional<Expression>> built(td_.bags.size());
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) built[*it] = build(*it, built);
    if (!built[order_.front()]) throw std::invalid_argument("decomposition covers no vertex");

    TreeDecompositionConversion out{*built[order_.front()], {}, join_sites_};
    std::vector<VertexId> atom_vertex;
    for (const Verts* a : atoms_in_preorder(out.expression)) atom_vertex.push_back(host_of_atom_.at(a));
    LabeledGraph graph = evaluate(out.expression);
    out.certificate.to_input.resize(graph.vertex_count());
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
      const auto& prov = graph.provenance(v);
      VertexId host = atom_vertex.at(prov.front().atom);
      for (const CreationId& c : prov)
        if (atom_vertex.at(c.atom) != host) throw std::logic_error("fused vertices of different host vertices");
      out.certificate.to_input[v] = host;
    }
    return out;
  }

 private:
  void root_tree() {
    auto adj = tree_adjacency(td_);
    const std::size_t n = td_.bags.size();
    parent_.assign(n, kNoBag);
    children_.assign(n, {});
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      std::uint32_t b = stack.back();
      stack.pop_back();
      order_.push_back(b);
      for (std::uint32_t c : adj[b])
        if (!seen[c]) {
          seen[c] = 1;
          parent_[c] = b;
          children_[b].push_back(c);
        }
      for (auto it = children_[b].rbegin(); it != children_[b].rend(); ++it) stack.push_back(*it);
    }
  }

  std::uint32_t label(std::uint32_t bag, std::uint32_t v) const { return labels_[bag].at(v); }

  bool in_bag(std::uint32_t bag, std::uint32_t v) const {
    return std::binary_search(td_.bags[bag].begin(), td_.bags[bag].end(), v);
  }

  void assign_labels() {
    labels_.assign(td_.bags.size(), {});
    for (std::uint32_t b : order_) {
      auto& mine = labels_[b];
      std::set<std::uint32_t> used;
      if (parent_[b] != kNoBag)
        for (std::uint32_t v : td_.bags[b])
          if (in_bag(parent_[b], v)) {
            mine[v] = label(parent_[b], v);
            used.insert(mine[v]);
          }
      for (std::uint32_t v : td_.bags[b]) {
        if (mine.count(v)) continue;
        std::uint32_t l = 1;
        while (used.count(l)) ++l;
        mine[v] = l;
        used.insert(l);
      }
    }
  }

  // Every edge goes to the topmost bag holding both endpoints.
  void assign_edges() {
    std::unordered_set<std::uint64_t> edges;
    for (auto [u, v] : g_.edges) edges.insert(key(u, v));
    edges_at_.assign(td_.bags.size(), {});
    for (std::uint32_t b : order_) {
      const auto& bag = td_.bags[b];
      for (std::size_t i = 0; i < bag.size(); ++i)
        for (std::size_t j = i + 1; j < bag.size(); ++j)
          if (edges.erase(key(bag[i], bag[j]))) edges_at_[b].push_back({bag[i], bag[j]});
    }
  }

  // Labels joined or fused at some strict ancestor; only those need retiring.
  void mark_touched() {
    std::vector<std::set<std::uint32_t>> at(td_.bags.size());
    for (std::uint32_t b : order_) {
      for (auto [u, v] : edges_at_[b]) {
        at[b].insert(label(b, u));
        at[b].insert(label(b, v));
      }
      for (std::uint32_t v : td_.bags[b]) {
        unsigned holders = 0;
        for (std::uint32_t c : children_[b]) holders += in_bag(c, v);
        if (holders >= 2) at[b].insert(label(b, v));
      }
    }
    touched_above_.assign(td_.bags.size(), {});
    for (std::uint32_t b : order_) {
      if (parent_[b] == kNoBag) continue;
      touched_above_[b] = touched_above_[parent_[b]];
      touched_above_[b].insert(at[parent_[b]].begin(), at[parent_[b]].end());
    }
  }

  static std::uint64_t key(std::uint32_t u, std::uint32_t v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  std::optional<Expression> build(std::uint32_t b, std::vector<std::optional<Expression>>& built) {
    std::vector<Expression> operands;
    std::map<std::uint32_t, unsigned> occurrences;  // bag vertex -> operands holding it
    for (std::uint32_t c : children_[b]) {
      if (!built[c]) continue;
      Expression e = std::move(*built[c]);
      built[c].reset();
      for (std::uint32_t v : td_.bags[c]) {
        if (in_bag(b, v)) {
          ++occurrences[v];
        } else if (touched_above_[c].count(label(c, v))) {
          e = relabel(label(c, v), reserved_, std::move(e));
        }
      }
      operands.push_back(std::move(e));
    }
    for (std::uint32_t v : td_.bags[b]) {
      if (occurrences.count(v)) continue;
      Expression a = vert(label(b, v));
      host_of_atom_[a.as<Verts>()] = v - 1;
      operands.push_back(std::move(a));
      occurrences[v] = 1;
    }
    if (operands.empty()) return std::nullopt;
    Expression e = std::move(operands.front());
    for (std::size_t i = 1; i < operands.size(); ++i) e = union_of(std::move(e), std::move(operands[i]));
    for (auto [u, v] : edges_at_[b]) {
      e = join(label(b, u), label(b, v), std::move(e));
      ++join_sites_;
    }
    for (auto [v, count] : occurrences)
      if (count >= 2) e = fuse(label(b, v), std::move(e));
    return e;
  }

  static constexpr std::uint32_t kNoBag = 0xffffffffu;

  const HostGraph& g_;
  const TreeDecomposition& td_;
  std::uint32_t k_;
  std::uint32_t reserved_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::vector<std::uint32_t>> children_;
  std::vector<std::uint32_t> order_;  // preorder from the root
  std::vector<std::map<std::uint32_t, std::uint32_t>> labels_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges_at_;
  std::vector<std::set<std::uint32_t>> touched_above_;
  std::unordered_map<const Verts*, VertexId> host_of_atom_;
  std::size_t join_sites_ = 0;
};

}  // namespace

TreeDecompositionConversion td_to_fusion(const HostGraph& g, const TreeDecomposition& td) {
  if (g.n == 0) throw std::invalid_argument("graph has no vertices");
  ValidationReport report = validate_td(g, td);
  if (!report.ok()) throw std::invalid_argument("invalid tree decomposition: " + report.violations.front().message);
  if (td.bags.empty()) throw std::invalid_argument("decomposition has no bags");
  return TdBuilder(g, td).run();
}

std::uint64_t td_size_bound(const HostGraph& g, const TreeDecomposition& td) {
  std::uint64_t w = static_cast<std::uint64_t>(std::max<std::int64_t>(td.width(), 0));
  return g.edges.size() + (4 * w + 5) * td.bags.size();
}

}  // namespace fusion
