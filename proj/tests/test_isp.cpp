#include <doctest.h>

#include <tuple>

#include "fusion/analysis.hpp"
#include "fusion/convert.hpp"
#include "fusion/evaluate.hpp"
#include "fusion/isp.hpp"
#include "fusion/parse.hpp"
#include "fusion/traverse.hpp"
#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fusion;
using testing::kC5;
using testing::kK23;
using testing::kK3;
using testing::kP3;

namespace {

using Term = std::tuple<std::uint64_t, std::vector<std::uint32_t>, int>;

LabeledPolynomial poly(std::initializer_list<Term> terms) {
  LabeledPolynomial p;
  for (const auto& [d, ls, c] : terms) {
    LabelSet s;
    for (auto l : ls) s.push_back(LabelId{l});
    p.add(d, s, c);
  }
  return p;
}

LabelSet set(std::initializer_list<std::uint32_t> ls) {
  LabelSet s;
  for (auto l : ls) s.push_back(LabelId{l});
  return s;
}

const LabelId L1{1}, L2{2}, L3{3};

}  // namespace

TEST_CASE("binomials") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 4) == 0);
  CHECK(binomial(100, 50) == Natural("100891344545564193334812497256"));
}

TEST_CASE("base polynomials") {
  CHECK(base_polynomial(L1, 1) == poly({{0, {}, 1}, {1, {1}, 1}}));
  CHECK(base_polynomial(L1, 3) == poly({{0, {}, 1}, {1, {1}, 3}, {2, {1}, 3}, {3, {1}, 1}}));
  CHECK(base_polynomial(L2, 2) == poly({{0, {}, 1}, {1, {2}, 2}, {2, {2}, 1}}));
  CHECK(base_polynomial(L1, 3) == testing::enumerate_labeled(evaluate(verts(1, 3))));
}

TEST_CASE("polynomial input checks") {
  LabeledPolynomial p;
  CHECK_THROWS_AS(p.add(1, set({2, 1}), 1), std::invalid_argument);
  CHECK_THROWS_AS(p.add(0, set({1}), 1), std::invalid_argument);
  p.add(1, set({1}), 0);
  CHECK(p.size() == 0);
}

TEST_CASE("join drops mixed terms") {
  LabeledPolynomial two = poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}, {2, {1, 2}, 1}});
  CHECK(apply_join(two, L1, L2) == poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}}));
  CHECK(apply_join(two, L1, L3) == two);

  LabeledPolynomial sides = merge_after_union(base_polynomial(L1, 2), base_polynomial(L2, 3), {});
  CHECK(apply_join(sides, L1, L2) == testing::enumerate_labeled(evaluate(parse_expression(kK23))));
}

TEST_CASE("relabel merges label sets") {
  CHECK(apply_relabel(poly({{1, {1}, 2}, {1, {2}, 3}}), L1, L2) == poly({{1, {2}, 5}}));
  CHECK(apply_relabel(poly({{2, {1, 2}, 4}}), L1, L2) == poly({{2, {2}, 4}}));
  LabeledPolynomial p = poly({{0, {}, 1}, {1, {2}, 3}, {2, {2, 3}, 1}});
  CHECK(apply_relabel(p, L1, L3) == p);
}

TEST_CASE("union product") {
  CHECK(merge_after_union(base_polynomial(L1, 1), base_polynomial(L2, 1), {}) ==
        poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}, {2, {1, 2}, 1}}));
}

TEST_CASE("merge after union glues a path") {
  LabeledPolynomial left = poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}});
  LabeledPolynomial right = poly({{0, {}, 1}, {1, {3}, 1}, {1, {2}, 1}});
  LabeledPolynomial p3 = poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}, {1, {3}, 1}, {2, {1, 3}, 1}});
  CHECK(merge_after_union(left, right, set({2})) == p3);
}

TEST_CASE("merge after union with one side lacking the label") {
  // left: edge a(1) - b(2); right: one vertex labeled 3. Fusing 2 merges b with nothing.
  LabeledPolynomial left = poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}});
  LabeledPolynomial right = base_polynomial(L3, 1);
  LabeledPolynomial merged = merge_after_union(left, right, set({2}));
  for (const auto& [m, c] : merged.terms()) CHECK_FALSE(std::binary_search(m.labels.begin(), m.labels.end(), L2));
}

TEST_CASE("merge after relabel") {
  LabeledPolynomial two = poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}, {2, {1, 2}, 1}});
  CHECK(merge_after_relabel(two, L1, L2) == poly({{0, {}, 1}, {1, {2}, 1}}));

  LabeledPolynomial wedge = poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}, {1, {3}, 1}, {2, {1, 2}, 1}});
  LabeledPolynomial edge = poly({{0, {}, 1}, {1, {2}, 1}, {1, {3}, 1}});
  CHECK(merge_after_relabel(wedge, L1, L2) == edge);
  CHECK(edge == testing::enumerate_labeled(evaluate(parse_expression("(join 2 3 (union (vert 2) (vert 3)))"))));
}

TEST_CASE("merging adjacent vertices is rejected") {
  CHECK_THROWS_AS(labeled_isp(parse_expression("(fuse 2 (ren 1 2 (join 1 2 (union (vert 1) (vert 2)))))")),
                  AdjacentMergeUnsupported);
  CHECK_THROWS_AS(labeled_isp(parse_expression(
                      "(fuse 2 (ren 1 2 (union (vert 3) (join 1 2 (union (vert 1) (vert 2))))))")),
                  AdjacentMergeUnsupported);
}

TEST_CASE("vertices on both sides of a union are never adjacent") {
  Expression e = parse_expression("(fuse 2 (union (join 1 2 (union (vert 1) (vert 2))) (join 1 2 (union (vert 1) (vert 2)))))");
  CHECK(labeled_isp(e) == testing::enumerate_labeled(evaluate(e)));
}

TEST_CASE("unlocalized input to the localized program") {
  CHECK_THROWS_AS(labeled_isp_localized(parse_expression("(fuse 1 (union (verts 1 2) (vert 1)))")), NotNormalized);
}

TEST_CASE("labeled polynomial of P3") {
  LabeledPolynomial p = labeled_isp(parse_expression(kP3));
  CHECK(p == poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}, {1, {3}, 1}, {2, {1, 3}, 1}}));
  CHECK(format_labeled(p) == "1 : 1\nx^1 * x{1} : 1\nx^1 * x{2} : 1\nx^1 * x{3} : 1\nx^2 * x{1,3} : 1\n");
}

TEST_CASE("labeled polynomial of a triangle over two labels") {
  LabeledPolynomial p = labeled_isp(parse_expression(kK3));
  CHECK(p.max_degree() == 1);
  CHECK(p.coefficient(1, set({1})) + p.coefficient(1, set({2})) == 3);
  CHECK(p == poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 2}}));
}

TEST_CASE("atoms") { CHECK(labeled_isp(verts(1, 3)) == base_polynomial(L1, 3)); }

TEST_CASE("univariate extraction") {
  CHECK(testing::as_counts(extract_univariate(labeled_isp(parse_expression(kP3)))) ==
        std::map<std::uint64_t, std::uint64_t>{{1, 3}, {2, 1}});
  CHECK(testing::as_counts(extract_univariate(labeled_isp(parse_expression(kK23)))) ==
        std::map<std::uint64_t, std::uint64_t>{{1, 5}, {2, 4}, {3, 1}});
  CHECK(extract_univariate(poly({{0, {}, 1}})).empty());
  CHECK(format_univariate(extract_univariate(labeled_isp(parse_expression(kP3)))) == "1 : 3\n2 : 1\n");
}

TEST_CASE("library enumeration") {
  LabeledGraph one = LabeledGraph::with_fresh_provenance(SimpleGraph(1), {L1});
  CHECK(brute_force_labeled_isp(one) == poly({{0, {}, 1}, {1, {1}, 1}}));

  SimpleGraph k3 = SimpleGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  LabeledGraph tri = LabeledGraph::with_fresh_provenance(k3, {L1, L2, L3});
  CHECK(brute_force_labeled_isp(tri) == poly({{0, {}, 1}, {1, {1}, 1}, {1, {2}, 1}, {1, {3}, 1}}));

  LabeledGraph c5 = evaluate(parse_expression(kC5));
  REQUIRE(c5.vertex_count() == 5);
  CHECK(testing::as_counts(extract_univariate(brute_force_labeled_isp(c5))) ==
        std::map<std::uint64_t, std::uint64_t>{{1, 5}, {2, 5}});

  LabeledGraph big = LabeledGraph::with_fresh_provenance(SimpleGraph(26), std::vector<LabelId>(26, L1));
  CHECK_THROWS_AS(brute_force_labeled_isp(big), SizeLimitExceeded);
}

TEST_CASE("dynamic program agrees with enumeration at every node") {
  testing::Rng rng(202);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    Expression e = testing::random_fusion_expression(rng, 1 + t % 4, 10);
    Expression local = localize_merges(e).expression;
    std::vector<Expression> subs;
    for_each_preorder(local, [&](const Expression& s, std::size_t, std::size_t) { subs.push_back(s); });
    try {
      LabeledPolynomial p = labeled_isp_localized(local, [&](std::size_t at, const LabeledPolynomial& q) {
        CHECK(q == testing::enumerate_labeled(evaluate(subs[at])));
        CHECK(q.label_pattern_count() <= (std::size_t{1} << expression_width(local)));
      });
      CHECK(p == testing::enumerate_labeled(evaluate(e)));
      ++checked;
    } catch (const AdjacentMergeUnsupported&) {
    }
  }
  CHECK(checked > 250);
}

TEST_CASE("large counts stay exact") {
  // 200 isolated vertices: 2^200 independent sets
  LabeledPolynomial p = labeled_isp(verts(1, 200));
  Natural total = 0;
  for (const auto& [m, c] : p.terms()) total += c;
  CHECK(total == Natural(1) << 200);
}
