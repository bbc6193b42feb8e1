#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fusion/analysis.hpp"
#include "fusion/convert.hpp"
#include "fusion/evaluate.hpp"
#include "fusion/isp.hpp"
#include "fusion/parse.hpp"
#include "fusion/treedec.hpp"

namespace fusion::cli {

namespace {

struct Config {
  std::string input;
  std::string output;
  std::string certificate;
  std::size_t oracle_limit = 25;
  std::size_t iso_limit = 10;
  bool fallback_oracle = false;

  bool dump = false;
  bool labeled = false;
  bool prune = false;
  bool clique_width_form = false;
  std::string td;
  std::string compare;
};

// Exit with a code; the message goes to the error stream.
struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{kParseError, "cannot read " + path};
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Failure{kInvalid, "cannot write " + path};
  f << text;
}

class Session {
 public:
  Session(const Config& config, std::istream& in, std::ostream& out) : config_(config), in_(in), out_(out) {}

  std::string input() {
    if (config_.input.empty() || config_.input == "-") {
      std::ostringstream s;
      s << in_.rdbuf();
      return s.str();
    }
    return read_file(config_.input);
  }

  Expression expression() { return parse_expression(input()); }

  void emit(const std::string& text) {
    if (config_.output.empty() || config_.output == "-") {
      out_ << text;
    } else {
      write_file(config_.output, text);
    }
  }

  void emit_certificate(const ConversionCertificate& cert) {
    if (config_.certificate.empty()) return;
    std::string text;
    for (std::size_t v = 0; v < cert.to_input.size(); ++v)
      text += std::to_string(v + 1) + " " + std::to_string(cert.to_input[v] + 1) + "\n";
    write_file(config_.certificate, text);
  }

 private:
  const Config& config_;
  std::istream& in_;
  std::ostream& out_;
};

std::string labeled_gr(const LabeledGraph& g) {
  std::string text = write_gr(g.structure());
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    text += "c label " + std::to_string(v + 1) + " " + std::to_string(g.label(v).value) + "\n";
  return text;
}

std::string report_text(const ValidationReport& report, const std::string& what) {
  if (report.ok()) return "ok\n";
  std::string text;
  for (const Violation& v : report.violations) text += what + " " + std::to_string(v.preorder) + ": " + v.message + "\n";
  return text;
}

int cmd_eval(const Config& c, Session& s) {
  LabeledGraph g = evaluate(s.expression());
  s.emit(c.dump ? dump_labeled_graph(g) : labeled_gr(g));
  return kOk;
}

int cmd_isp(const Config& c, Session& s, std::ostream& err) {
  Expression e = s.expression();
  LabeledPolynomial p;
  try {
    p = labeled_isp(e);
  } catch (const AdjacentMergeUnsupported& ex) {
    if (!c.fallback_oracle) throw Failure{kUnsupported, ex.what()};
    LabeledGraph g = evaluate(e);
    if (g.vertex_count() > c.oracle_limit)
      throw Failure{kTooLarge, std::string(ex.what()) + "; graph too large for enumeration"};
    err << "note: " << ex.what() << "; counted by enumeration\n";
    p = brute_force_labeled_isp(g, c.oracle_limit);
  }
  s.emit(c.labeled ? format_labeled(p) : format_univariate(extract_univariate(p)));
  return kOk;
}

int cmd_oracle(const Config& c, Session& s) {
  HostGraph h = parse_gr(s.input());
  LabeledGraph g = LabeledGraph::with_fresh_provenance(h.to_simple(), std::vector<LabelId>(h.n, LabelId{1}));
  s.emit(format_univariate(extract_univariate(brute_force_labeled_isp(g, c.oracle_limit))));
  return kOk;
}

int cmd_from_td(const Config& c, Session& s) {
  HostGraph g = parse_gr(s.input());
  TreeDecomposition td = parse_td(read_file(c.td));
  ValidationReport report = validate_td(g, td);
  if (!report.ok()) throw Failure{kInvalid, report_text(report, "witness")};
  if (g.n == 0) throw Failure{kInvalid, "graph has no vertices"};
  TreeDecompositionConversion r = td_to_fusion(g, td);
  s.emit(render_expression(r.expression) + "\n");
  s.emit_certificate(r.certificate);
  return kOk;
}

int cmd_to_cw(Session& s) {
  const std::string text = s.input();
  Expression e = parse_expression(text);
  CliqueWidthConversion r = to_clique_width(e);
  // clique-width input is echoed as given
  s.emit(validate_expression(e, true).ok() ? text : render_expression(r.expression) + "\n");
  s.emit_certificate(r.certificate);
  return kOk;
}

int cmd_normalize(const Config& c, Session& s) {
  Rewrite r = localize_merges(s.expression());
  if (c.prune) r = prune_useless_vertices(r.expression);
  s.emit(render_expression(r.expression) + "\n");
  return kOk;
}

int cmd_check(const Config& c, Session& s) {
  if (!c.td.empty()) {
    HostGraph g = parse_gr(s.input());
    TreeDecomposition td = parse_td(read_file(c.td));
    ValidationReport report = validate_td(g, td);
    s.emit(report_text(report, "witness"));
    return report.ok() ? kOk : kInvalid;
  }
  Expression e = s.expression();
  ValidationReport report = validate_expression(e, c.clique_width_form);
  if (!report.ok() || c.compare.empty()) {
    s.emit(report_text(report, "node"));
    return report.ok() ? kOk : kInvalid;
  }
  Expression other = parse_expression(read_file(c.compare));
  bool same = isomorphic_small(evaluate(e).structure(), evaluate(other).structure(), c.iso_limit);
  s.emit(same ? "ok\n" : "graphs differ\n");
  return same ? kOk : kInvalid;
}

int cmd_stats(Session& s) {
  ExpressionStats st = expression_stats(s.expression());
  std::string text;
  text += "node_count: " + std::to_string(st.node_count) + "\n";
  text += "distinct_labels: " + std::to_string(st.distinct_labels) + "\n";
  text += "max_label: " + std::to_string(st.max_label) + "\n";
  text += "vertex_creations: " + std::to_string(st.vertex_creations) + "\n";
  text += "has_fuse: " + std::string(st.has_fuse ? "true" : "false") + "\n";
  text += "has_multi_verts: " + std::string(st.has_multi_verts ? "true" : "false") + "\n";
  s.emit(text);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Fusion-width expression toolkit", "fwtool"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("-i,--input", c.input, "input file (default: standard input)");
  app.add_option("-o,--output", c.output, "output file (default: standard output)");
  app.add_option("--certificate", c.certificate, "write the vertex certificate to this file");
  app.add_option("--oracle-limit", c.oracle_limit, "largest graph counted by enumeration")->check(CLI::PositiveNumber);
  app.add_option("--iso-limit", c.iso_limit, "largest graph for the isomorphism check")->check(CLI::PositiveNumber);
  app.add_flag("--fallback-oracle", c.fallback_oracle, "count by enumeration when the dynamic program cannot");

  auto* eval = app.add_subcommand("eval", "evaluate an expression to a .gr graph with labels");
  eval->add_flag("--dump", c.dump, "print vertices with labels, provenance and neighbours instead");
  auto* isp = app.add_subcommand("isp", "independent-set polynomial of an expression");
  isp->add_flag("--labeled", c.labeled, "print the labeled polynomial");
  app.add_subcommand("oracle", "independent-set polynomial of a .gr graph by enumeration");
  auto* from_td = app.add_subcommand("from-td", "fusion expression from a .gr graph and a .td decomposition");
  from_td->add_option("--td", c.td, "tree decomposition file")->required();
  app.add_subcommand("to-cw", "clique-width expression from a fusion expression");
  auto* normalize = app.add_subcommand("normalize", "move every fuse next to its union or relabel");
  normalize->add_flag("--prune", c.prune, "also drop vertices and operations without effect");
  auto* check = app.add_subcommand("check", "validate an expression, or a decomposition with --td");
  check->add_flag("--cw", c.clique_width_form, "require clique-width form");
  check->add_option("--td", c.td, "validate this decomposition against the input graph");
  check->add_option("--compare", c.compare, "also compare the graph with that of another expression");
  app.add_subcommand("stats", "expression statistics");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "fwtool: " << e.what() << "\n";
    return kParseError;
  }

  Session session(c, in, out);
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "eval") return cmd_eval(c, session);
    if (name == "isp") return cmd_isp(c, session, err);
    if (name == "oracle") return cmd_oracle(c, session);
    if (name == "from-td") return cmd_from_td(c, session);
    if (name == "to-cw") return cmd_to_cw(session);
    if (name == "normalize") return cmd_normalize(c, session);
    if (name == "check") return cmd_check(c, session);
    return cmd_stats(session);
  } catch (const Failure& f) {
    err << "fwtool: " << f.message << (f.message.ends_with('\n') ? "" : "\n");
    return f.code;
  } catch (const ParseError& e) {
    err << "fwtool: parse error at " << e.what() << "\n";
    return kParseError;
  } catch (const FormatError& e) {
    err << "fwtool: " << e.what() << "\n";
    return kParseError;
  } catch (const AdjacentMergeUnsupported& e) {
    err << "fwtool: " << e.what() << "\n";
    return kUnsupported;
  } catch (const SizeLimitExceeded& e) {
    err << "fwtool: " << e.what() << "\n";
    return kTooLarge;
  } catch (const std::exception& e) {
    err << "fwtool: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace fusion::cli
