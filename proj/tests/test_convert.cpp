#include <doctest.h>

#include "fixtures.hpp"
#include "fusion/analysis.hpp"
#include "fusion/convert.hpp"
#include "fusion/evaluate.hpp"
#include "fusion/isp.hpp"
#include "fusion/parse.hpp"
#include "fusion/traverse.hpp"
#include "fusion/treedec.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace fusion;

namespace {

bool preserves(const Expression& input, const Expression& output, const ConversionCertificate& cert) {
  return check_correspondence(evaluate(input).structure(), evaluate(output).structure(), cert);
}

// Every fuse (or chain of fuses) sits right above a union or a relabel.
bool fuses_are_local(const Expression& e) {
  bool ok = true;
  for_each_preorder(e, [&](const Expression& sub, std::size_t, std::size_t) {
    const Fuse* f = sub.as<Fuse>();
    if (!f) return;
    const Expression* below = &f->child;
    while (below->as<Fuse>()) below = &below->as<Fuse>()->child;
    ok = ok && (below->as<Union>() || below->as<Relabel>());
  });
  return ok;
}

std::size_t count_fuses(const Expression& e) {
  std::size_t n = 0;
  for_each_preorder(e, [&](const Expression& sub, std::size_t, std::size_t) { n += sub.as<Fuse>() != nullptr; });
  return n;
}

}  // namespace

TEST_CASE("clique-width expressions are fusion expressions") {
  Expression e = parse_expression("(join 1 2 (union (vert 1) (ren 1 2 (join 1 2 (union (vert 1) (vert 2))))))");
  CHECK(cw_to_fusion(e) == e);
  CHECK_THROWS_AS(cw_to_fusion(fuse(1, verts(1, 2))), NotCliqueWidthForm);
  CHECK_THROWS_AS(cw_to_fusion(verts(1, 2)), NotCliqueWidthForm);

  testing::Rng rng(404);
  for (int t = 0; t < 100; ++t) {
    Expression c = testing::random_cw_expression(rng, 1 + t % 5, 1 + t % 15);
    Expression f = cw_to_fusion(c);
    CHECK(expression_width(f) == expression_width(c));
    CHECK(expression_stats(f).node_count == expression_stats(c).node_count);
  }
}

TEST_CASE("localizing a fuse over one atom") {
  Rewrite r = localize_merges(fuse(1, verts(1, 5)));
  CHECK(r.expression == verts(1, 1));
  CHECK(preserves(fuse(1, verts(1, 5)), r.expression, certify(fuse(1, verts(1, 5)), r.expression, r.origins)));
}

TEST_CASE("a fuse that is already local stays") {
  Expression e = parse_expression("(fuse 2 (union (join 1 2 (union (vert 1) (vert 2))) (vert 2)))");
  CHECK(localize_merges(e).expression == e);
  Expression p3 = parse_expression(testing::kP3);
  CHECK(localize_merges(p3).expression == p3);
}

TEST_CASE("a fuse over three parts splits in two") {
  Expression e = parse_expression(
      "(fuse 1 (union (union (join 1 2 (union (vert 1) (vert 2))) (join 1 3 (union (vert 1) (vert 3))))"
      " (join 1 4 (union (vert 1) (vert 4)))))");
  Rewrite r = localize_merges(e);
  CHECK(count_fuses(r.expression) == 2);
  CHECK(fuses_are_local(r.expression));
  CHECK(preserves(e, r.expression, certify(e, r.expression, r.origins)));
  CHECK(evaluate(r.expression).vertex_count() == 4);
}

TEST_CASE("localized form on random expressions") {
  testing::Rng rng(405);
  for (int t = 0; t < 500; ++t) {
    Expression e = testing::random_fusion_expression(rng, 1 + t % 4, 3 + t % 15);
    Rewrite r = localize_merges(e);
    CHECK(fuses_are_local(r.expression));
    CHECK(preserves(e, r.expression, certify(e, r.expression, r.origins)));
  }
}

TEST_CASE("pruning a huge merged atom") {
  Expression e = fuse(1, verts(1, 1000000));
  Rewrite r = prune_useless_vertices(e);
  CHECK(r.expression == verts(1, 1));
  CHECK(preserves(e, r.expression, certify(e, r.expression, r.origins)));
}

TEST_CASE("pruning a relabel that touches nothing") {
  CHECK(prune_useless_vertices(relabel(1, 2, verts(3, 1))).expression == verts(3, 1));
}

TEST_CASE("pruning a redundant twin") {
  // two label-1 vertices joined to the same three vertices and then fused:
  // a star K_{1,3}, and one of the twins is redundant
  Expression e = parse_expression("(fuse 1 (join 1 2 (union (union (vert 1) (vert 1)) (verts 2 3))))");
  Rewrite r = prune_useless_vertices(e);
  CHECK(expression_stats(r.expression).vertex_creations == 4);
  CHECK(expression_stats(r.expression).node_count < expression_stats(e).node_count);
  CHECK(preserves(e, r.expression, certify(e, r.expression, r.origins)));
  LabeledGraph star = evaluate(r.expression);
  CHECK(star.vertex_count() == 4);
  CHECK(star.edge_count() == 3);
}

TEST_CASE("pruning never grows and keeps the polynomial") {
  testing::Rng rng(406);
  int compared = 0;
  for (int t = 0; t < 500; ++t) {
    Expression e = testing::random_fusion_expression(rng, 1 + t % 4, 3 + t % 12);
    Rewrite r = prune_useless_vertices(e);
    CHECK(expression_stats(r.expression).node_count <= expression_stats(e).node_count);
    CHECK(preserves(e, r.expression, certify(e, r.expression, r.origins)));
    try {
      LabeledPolynomial before = labeled_isp(e);
      CHECK(labeled_isp(r.expression) == before);
      CHECK(labeled_isp(localize_merges(e).expression) == before);
      CHECK(before == testing::enumerate_labeled(evaluate(e)));
      ++compared;
    } catch (const AdjacentMergeUnsupported&) {
    }
  }
  CHECK(compared > 400);
}

TEST_CASE("fuse-free input is returned unchanged") {
  Expression e = parse_expression(testing::kK3);
  CliqueWidthConversion c = fusion_to_cw(e);
  CHECK(c.expression == e);
  CHECK(c.plan.empty());
  CHECK(expression_width(c.expression) == expression_width(e));
  CHECK(preserves(e, c.expression, c.certificate));
}

TEST_CASE("P3 to clique-width form") {
  Expression e = parse_expression(testing::kP3);
  CliqueWidthConversion c = fusion_to_cw(e);
  CHECK(validate_expression(c.expression, true).ok());
  CHECK(expression_width(c.expression) <= 24);
  CHECK(preserves(e, c.expression, c.certificate));
  REQUIRE(c.plan.size() == 1);
  CHECK(c.plan[0].label == LabelId{2});
  CHECK(c.plan[0].last_merge_preorder == 0);
  CHECK(c.label_table.size() == expression_stats(c.expression).max_label);
}

TEST_CASE("triangle through a decomposition and back to clique-width form") {
  HostGraph g = parse_gr("p tw 3 3\n1 2\n2 3\n1 3\n");
  TreeDecompositionConversion t = td_to_fusion(g, parse_td("s td 2 3 3\nb 1 1 2 3\nb 2 1 2\n1 2\n"));
  CliqueWidthConversion c = to_clique_width(t.expression);
  CHECK(validate_expression(c.expression, true).ok());
  CHECK(expression_width(c.expression) <= 4 * 16);
  CHECK(preserves(t.expression, c.expression, c.certificate));
  CHECK(isomorphic_small(evaluate(c.expression).structure(), g.to_simple()));
}

TEST_CASE("both merged endpoints of an edge") {
  // the edge between two merged vertices goes to the one finished last
  Expression e = parse_expression(
      "(fuse 2 (union (fuse 1 (union (join 1 2 (union (vert 1) (vert 2))) (join 1 3 (union (vert 1) (vert 3)))))"
      " (join 2 3 (union (vert 2) (vert 3)))))");
  CliqueWidthConversion c = fusion_to_cw(e);
  CHECK(validate_expression(c.expression, true).ok());
  CHECK(preserves(e, c.expression, c.certificate));
  CHECK(c.plan.size() == 2);
}

TEST_CASE("conversion on random expressions") {
  testing::Rng rng(407);
  for (int t = 0; t < 400; ++t) {
    Expression e = testing::random_fusion_expression(rng, 1 + t % 4, 3 + t % 15);
    std::uint64_t k = expression_width(e);
    for (const CliqueWidthConversion& c : {fusion_to_cw(e), to_clique_width(e)}) {
      CHECK(validate_expression(c.expression, true).ok());
      CHECK(expression_width(c.expression) <= k << k);
      CHECK(preserves(e, c.expression, c.certificate));
    }
  }
}
