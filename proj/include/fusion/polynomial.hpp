#pragma once

// Labeled independent-set polynomials. A term x^d * x_S counts the
// independent sets of size d whose label set is exactly S; the empty set
// is the constant term (0, {}).

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fusion/expression.hpp"

namespace fusion {

using Natural = boost::multiprecision::cpp_int;

// Sorted, duplicate-free.
using LabelSet = std::vector<LabelId>;

struct Monomial {
  std::uint64_t degree = 0;
  LabelSet labels;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

class DegreeUnderflow : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class LabeledPolynomial {
 public:
  using Terms = std::map<Monomial, Natural>;

  LabeledPolynomial() = default;

  // Adds `c` to the coefficient of (degree, labels); zero is ignored.
  // Throws std::invalid_argument on an unsorted label set or a degree-0
  // term with labels.
  void add(std::uint64_t degree, LabelSet labels, const Natural& c);

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  Natural coefficient(std::uint64_t degree, const LabelSet& labels) const;

  // Distinct label sets among the terms.
  std::size_t label_pattern_count() const;
  std::uint64_t max_degree() const;

  friend bool operator==(const LabeledPolynomial&, const LabeledPolynomial&) = default;

 private:
  Terms terms_;
};

// Degree -> coefficient, degree >= 1.
using UnivariatePolynomial = std::map<std::uint64_t, Natural>;

Natural binomial(std::uint64_t n, std::uint64_t k);

// 1 + sum_j C(m, j) x^j x_i.
LabeledPolynomial base_polynomial(LabelId i, std::uint64_t m);

// Drops every term containing both i and j.
LabeledPolynomial apply_join(const LabeledPolynomial& p, LabelId i, LabelId j);

// Renames i to j in every label set, adding colliding coefficients.
LabeledPolynomial apply_relabel(const LabeledPolynomial& p, LabelId i, LabelId j);

// Product of the polynomials of two disjoint graphs followed by fusing, for
// every label in `merged`, the single vertex of that label on each side.
// With `merged` empty this is the plain disjoint-union product.
LabeledPolynomial merge_after_union(const LabeledPolynomial& p1, const LabeledPolynomial& p2,
                                    const LabelSet& merged);

// Renames i to j and fuses the (single, non-adjacent) i- and j-vertices.
LabeledPolynomial merge_after_relabel(const LabeledPolynomial& p, LabelId i, LabelId j);

// Sums over label sets and drops the constant term.
UnivariatePolynomial extract_univariate(const LabeledPolynomial& p);

// `1 : 1` for the constant, otherwise `x^d * x{a,b} : c`, one term per line.
std::string format_labeled(const LabeledPolynomial& p);
// `d : c` per line, ascending d.
std::string format_univariate(const UnivariatePolynomial& p);

}  // namespace fusion
