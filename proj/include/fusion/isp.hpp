#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>

#include "fusion/expression.hpp"
#include "fusion/graph.hpp"
#include "fusion/polynomial.hpp"

namespace fusion {

// A fuse joins two adjacent vertices; the polynomial alone cannot account
// for the merged vertex then.
class AdjacentMergeUnsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fuse sees more than one vertex of its label on one side.
class NotNormalized : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Receives the polynomial of every node of the localized expression, by
// preorder index, in post-order.
using IspObserver = std::function<void(std::size_t preorder, const LabeledPolynomial& p)>;

// Localizes the merges of `e`, then runs the bottom-up dynamic program.
LabeledPolynomial labeled_isp(const Expression& e);

// Same, without localizing; `e` must already be in localized form.
// With an observer, deferred unions and relabels are also materialized so
// that every node is reported.
LabeledPolynomial labeled_isp_localized(const Expression& e, const IspObserver& observer = {});

// Enumerates every independent set; throws SizeLimitExceeded above `limit`
// vertices.
LabeledPolynomial brute_force_labeled_isp(const LabeledGraph& g, std::size_t limit = 25);

}  // namespace fusion
