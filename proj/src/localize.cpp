#include <algorithm>
#include <map>

#include "fusion/analysis.hpp"
#include "fusion/convert.hpp"
#include "fusion/traverse.hpp"
#include "overloaded.hpp"
#include "rewrite_util.hpp"

namespace fusion {

ConversionCertificate certify(const Expression& input, const Expression& output,
                              const std::vector<AtomOrigin>& origins) {
  return certificate_from_origins(evaluate(input), evaluate(output), origins);
}

Expression cw_to_fusion(const Expression& e) {
  ValidationReport report = validate_expression(e, true);
  if (!report.ok()) throw NotCliqueWidthForm(report.violations.front().message);
  return e;
}

namespace {

using detail::bump;
using detail::Counts;
using detail::has;
using detail::LabelList;

struct Built {
  Expression expr;
  Counts counts;
};

}  // namespace

Rewrite localize_merges(const Expression& e) {
  const std::vector<LabelList> pending = detail::pending_fuses(e);
  std::uint32_t atoms = 0;
  Built root = fold<Built>(e, [&](const Node& node, std::size_t at, std::span<Built> kids) -> Built {
    const LabelList& p = pending[at];
    return detail::match(
        node,
        [&](const Verts& x) {
          ++atoms;
          std::uint64_t m = has(p, x.label) ? 1 : x.count;
          Built b{verts(x.label.value, m), {}};
          bump(b.counts, x.label, m);
          return b;
        },
        [&](const Join& x) {
          Built b = std::move(kids[0]);
          b.expr = join(x.first.value, x.second.value, std::move(b.expr));
          return b;
        },
        [&](const Relabel& x) {
          Built b = std::move(kids[0]);
          if (x.from == x.to) {
            b.expr = relabel(x.from.value, x.to.value, std::move(b.expr));
            return b;
          }
          unsigned from = b.counts.count(x.from) ? b.counts[x.from] : 0;
          unsigned to = b.counts.count(x.to) ? b.counts[x.to] : 0;
          b.expr = relabel(x.from.value, x.to.value, std::move(b.expr));
          b.counts.erase(x.from);
          if (from > 0) bump(b.counts, x.to, from);
          if (has(p, x.to) && from == 1 && to == 1) {
            b.expr = fuse(x.to.value, std::move(b.expr));
            b.counts[x.to] = 1;
          }
          return b;
        },
        [&](const Fuse&) { return std::move(kids[0]); },
        [&](const Union&) {
          Built b{union_of(std::move(kids[0].expr), std::move(kids[1].expr)), kids[0].counts};
          LabelList both;
          for (auto [l, c] : kids[1].counts) {
            if (has(p, l) && b.counts.count(l)) both.push_back(l);
            bump(b.counts, l, c);
          }
          // Innermost fuse gets the largest label.
          for (auto it = both.rbegin(); it != both.rend(); ++it) {
            b.expr = fuse(it->value, std::move(b.expr));
            b.counts[*it] = 1;
          }
          return b;
        });
  });
  std::vector<AtomOrigin> origins;
  for (std::uint32_t t = 0; t < atoms; ++t) origins.push_back({t, 0});
  return {std::move(root.expr), std::move(origins)};
}

}  // namespace fusion
