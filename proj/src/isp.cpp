#include "fusion/isp.hpp"

#include <algorithm>
#include <map>

#include "fusion/convert.hpp"
#include "fusion/traverse.hpp"
#include "overloaded.hpp"

namespace fusion {

namespace {

// Unions and relabels are kept unevaluated until it is known whether a fuse
// sits on top of them.
struct Value {
  enum class Kind { Ready, Union, Relabel } kind = Kind::Ready;
  LabeledPolynomial first;
  LabeledPolynomial second;
  LabelSet merged;
  LabelId from;
  LabelId to;
};

LabeledPolynomial materialize(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Union:
      return merge_after_union(v.first, v.second, v.merged);
    case Value::Kind::Relabel:
      return apply_relabel(v.first, v.from, v.to);
    default:
      return v.first;
  }
}

Value ready(LabeledPolynomial p) {
  Value v;
  v.first = std::move(p);
  return v;
}

// Number of vertices labeled l, read off the singleton sets.
Natural count_of(const LabeledPolynomial& p, LabelId l) { return p.coefficient(1, {l}); }

[[noreturn]] void not_normalized(LabelId l) {
  throw NotNormalized("fuse " + std::to_string(l.value) + " sees two or more vertices on one side");
}

Value apply_fuse(Value v, LabelId l) {
  switch (v.kind) {
    case Value::Kind::Ready:
      if (count_of(v.first, l) > 1) not_normalized(l);
      return v;
    case Value::Kind::Union: {
      if (std::binary_search(v.merged.begin(), v.merged.end(), l)) return v;
      Natural c1 = count_of(v.first, l);
      Natural c2 = count_of(v.second, l);
      if (c1 > 1 || c2 > 1) not_normalized(l);
      if (c1 == 1 && c2 == 1) v.merged.insert(std::lower_bound(v.merged.begin(), v.merged.end(), l), l);
      return v;
    }
    case Value::Kind::Relabel: {
      if (l != v.to) return apply_fuse(ready(materialize(v)), l);
      Natural ca = count_of(v.first, v.from);
      Natural cb = count_of(v.first, v.to);
      if (ca > 1 || cb > 1) not_normalized(l);
      if (ca == 0 || cb == 0) return ready(apply_relabel(v.first, v.from, v.to));
      LabelSet pair = {std::min(v.from, v.to), std::max(v.from, v.to)};
      if (v.first.coefficient(2, pair) == 0)
        throw AdjacentMergeUnsupported("fuse " + std::to_string(l.value) + " merges two adjacent vertices");
      return ready(merge_after_relabel(v.first, v.from, v.to));
    }
  }
  return v;
}

}  // namespace

LabeledPolynomial labeled_isp_localized(const Expression& e, const IspObserver& observer) {
  Value root = fold<Value>(e, [&](const Node& node, std::size_t at, std::span<Value> kids) {
    Value v = detail::match(
        node, [&](const Verts& x) { return ready(base_polynomial(x.label, x.count)); },
        [&](const Join& x) { return ready(apply_join(materialize(kids[0]), x.first, x.second)); },
        [&](const Relabel& x) {
          Value r;
          r.kind = Value::Kind::Relabel;
          r.first = materialize(kids[0]);
          r.from = x.from;
          r.to = x.to;
          return r;
        },
        [&](const Fuse& x) { return apply_fuse(std::move(kids[0]), x.label); },
        [&](const Union&) {
          Value u;
          u.kind = Value::Kind::Union;
          u.first = materialize(kids[0]);
          u.second = materialize(kids[1]);
          return u;
        });
    if (observer) observer(at, materialize(v));
    return v;
  });
  return materialize(root);
}

LabeledPolynomial labeled_isp(const Expression& e) { return labeled_isp_localized(localize_merges(e).expression); }

namespace {

class SubsetCounter {
 public:
  explicit SubsetCounter(const LabeledGraph& g) : g_(g), blocked_(g.vertex_count(), 0) {
    for (LabelId l : g.labels()) labels_.push_back(l);
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    label_index_.reserve(g.vertex_count());
    for (LabelId l : g.labels())
      label_index_.push_back(
          static_cast<unsigned>(std::lower_bound(labels_.begin(), labels_.end(), l) - labels_.begin()));
    per_label_.assign(labels_.size(), 0);
  }

  LabeledPolynomial run() {
    extend(0);
    LabeledPolynomial p;
    for (const auto& [key, c] : tally_) {
      LabelSet s;
      for (std::size_t b = 0; b < labels_.size(); ++b)
        if (key.second[b]) s.push_back(labels_[b]);
      p.add(key.first, std::move(s), Natural(c));
    }
    return p;
  }

 private:
  void extend(VertexId v) {
    if (v == g_.vertex_count()) {
      std::vector<bool> present(labels_.size());
      for (std::size_t b = 0; b < labels_.size(); ++b) present[b] = per_label_[b] > 0;
      ++tally_[{size_, std::move(present)}];
      return;
    }
    extend(v + 1);
    if (blocked_[v]) return;
    for (VertexId w : g_.structure().neighbors(v)) ++blocked_[w];
    ++per_label_[label_index_[v]];
    ++size_;
    extend(v + 1);
    --size_;
    --per_label_[label_index_[v]];
    for (VertexId w : g_.structure().neighbors(v)) --blocked_[w];
  }

  const LabeledGraph& g_;
  std::vector<unsigned> blocked_;
  std::vector<LabelId> labels_;
  std::vector<unsigned> label_index_;
  std::vector<unsigned> per_label_;
  std::uint64_t size_ = 0;
  std::map<std::pair<std::uint64_t, std::vector<bool>>, std::uint64_t> tally_;
};

}  // namespace

LabeledPolynomial brute_force_labeled_isp(const LabeledGraph& g, std::size_t limit) {
  if (g.vertex_count() > limit)
    throw SizeLimitExceeded("enumeration limited to " + std::to_string(limit) + " vertices");
  return SubsetCounter(g).run();
}

}  // namespace fusion
