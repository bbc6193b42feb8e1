#include "fusion/polynomial.hpp"

#include <algorithm>

namespace fusion {

void LabeledPolynomial::add(std::uint64_t degree, LabelSet labels, const Natural& c) {
  if (c == 0) return;
  for (std::size_t t = 1; t < labels.size(); ++t)
    if (!(labels[t - 1] < labels[t])) throw std::invalid_argument("label set must be sorted and duplicate-free");
  if (degree == 0 && !labels.empty()) throw std::invalid_argument("degree-0 term with labels");
  if (degree < labels.size()) throw std::invalid_argument("degree below label count");
  terms_[Monomial{degree, std::move(labels)}] += c;
}

Natural LabeledPolynomial::coefficient(std::uint64_t degree, const LabelSet& labels) const {
  auto it = terms_.find(Monomial{degree, labels});
  return it == terms_.end() ? Natural(0) : it->second;
}

std::size_t LabeledPolynomial::label_pattern_count() const {
  std::vector<const LabelSet*> sets;
  for (const auto& [m, c] : terms_) sets.push_back(&m.labels);
  std::sort(sets.begin(), sets.end(), [](const LabelSet* a, const LabelSet* b) { return *a < *b; });
  auto last = std::unique(sets.begin(), sets.end(), [](const LabelSet* a, const LabelSet* b) { return *a == *b; });
  return static_cast<std::size_t>(last - sets.begin());
}

std::uint64_t LabeledPolynomial::max_degree() const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree);
  return d;
}

Natural binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Natural r = 1;
  for (std::uint64_t t = 1; t <= k; ++t) {
    r *= n - k + t;
    r /= t;
  }
  return r;
}

LabeledPolynomial base_polynomial(LabelId i, std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("base polynomial needs at least one vertex");
  LabeledPolynomial p;
  p.add(0, {}, 1);
  Natural c = 1;
  for (std::uint64_t j = 1; j <= m; ++j) {
    c *= m - j + 1;
    c /= j;
    p.add(j, {i}, c);
  }
  return p;
}

namespace {

bool contains(const LabelSet& s, LabelId l) { return std::binary_search(s.begin(), s.end(), l); }

}  // namespace

LabeledPolynomial apply_join(const LabeledPolynomial& p, LabelId i, LabelId j) {
  if (i == j) throw std::invalid_argument("join labels must differ");
  LabeledPolynomial out;
  for (const auto& [m, c] : p.terms())
    if (!(contains(m.labels, i) && contains(m.labels, j))) out.add(m.degree, m.labels, c);
  return out;
}

LabeledPolynomial apply_relabel(const LabeledPolynomial& p, LabelId i, LabelId j) {
  if (i == j) return p;
  LabeledPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    if (!contains(m.labels, i)) {
      out.add(m.degree, m.labels, c);
      continue;
    }
    LabelSet s;
    for (LabelId l : m.labels)
      if (l != i) s.push_back(l);
    s.insert(std::lower_bound(s.begin(), s.end(), j), j);
    s.erase(std::unique(s.begin(), s.end()), s.end());
    out.add(m.degree, std::move(s), c);
  }
  return out;
}

LabeledPolynomial merge_after_union(const LabeledPolynomial& p1, const LabeledPolynomial& p2,
                                    const LabelSet& merged) {
  LabeledPolynomial out;
  LabelSet s;
  for (const auto& [m1, c1] : p1.terms()) {
    for (const auto& [m2, c2] : p2.terms()) {
      // Walk both sorted sets; labels on both sides have exponent 2.
      s.clear();
      std::uint64_t doubles = 0;
      bool dropped = false;
      auto a = m1.labels.begin();
      auto b = m2.labels.begin();
      while (a != m1.labels.end() || b != m2.labels.end()) {
        LabelId l;
        int exponent = 0;
        if (b == m2.labels.end() || (a != m1.labels.end() && *a < *b)) {
          l = *a++;
          exponent = 1;
        } else if (a == m1.labels.end() || *b < *a) {
          l = *b++;
          exponent = 1;
        } else {
          l = *a++;
          ++b;
          exponent = 2;
        }
        if (contains(merged, l)) {
          if (exponent == 1) {
            dropped = true;
            break;
          }
          ++doubles;
        }
        s.push_back(l);
      }
      if (dropped) continue;
      std::uint64_t degree = m1.degree + m2.degree;
      if (degree < doubles || degree - doubles < s.size())
        throw DegreeUnderflow("merge would leave fewer set members than labels");
      out.add(degree - doubles, s, c1 * c2);
    }
  }
  return out;
}

LabeledPolynomial merge_after_relabel(const LabeledPolynomial& p, LabelId i, LabelId j) {
  if (i == j) throw std::invalid_argument("merge after relabel needs distinct labels");
  LabeledPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    bool has_i = contains(m.labels, i);
    bool has_j = contains(m.labels, j);
    if (!has_i && !has_j) {
      out.add(m.degree, m.labels, c);
    } else if (has_i && has_j) {
      if (m.degree < 1 || m.degree - 1 < m.labels.size() - 1)
        throw DegreeUnderflow("merge would leave fewer set members than labels");
      LabelSet s;
      for (LabelId l : m.labels)
        if (l != i) s.push_back(l);
      out.add(m.degree - 1, std::move(s), c);
    }
  }
  return out;
}

UnivariatePolynomial extract_univariate(const LabeledPolynomial& p) {
  UnivariatePolynomial u;
  for (const auto& [m, c] : p.terms())
    if (m.degree > 0) u[m.degree] += c;
  return u;
}

std::string format_labeled(const LabeledPolynomial& p) {
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (m.degree == 0) {
      out += "1 : " + c.str() + "\n";
      continue;
    }
    out += "x^" + std::to_string(m.degree) + " * x{";
    for (std::size_t t = 0; t < m.labels.size(); ++t) {
      if (t) out += ',';
      out += std::to_string(m.labels[t].value);
    }
    out += "} : " + c.str() + "\n";
  }
  return out;
}

std::string format_univariate(const UnivariatePolynomial& p) {
  std::string out;
  for (const auto& [d, c] : p) out += std::to_string(d) + " : " + c.str() + "\n";
  return out;
}

}  // namespace fusion
