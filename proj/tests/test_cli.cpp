#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "fusion/evaluate.hpp"
#include "fusion/graph.hpp"
#include "fusion/parse.hpp"
#include "fusion/analysis.hpp"
#include "fusion/treedec.hpp"

using namespace fusion;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = cli::run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() {
    dir_ = fs::temp_directory_path() / ("fwtool_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const {
    std::ifstream f(dir_ / name);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  }

 private:
  fs::path dir_;
};

const char* kAdjacent = "(fuse 2 (ren 1 2 (join 1 2 (union (vert 1) (vert 2)))))";

}  // namespace

TEST_CASE("isp of P3") {
  Run r = run({"isp"}, testing::kP3);
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "1 : 3\n2 : 1\n");

  Scratch s;
  std::string file = s.write("p3.fx", testing::kP3);
  CHECK(run({"isp", "-i", file}).out == "1 : 3\n2 : 1\n");
  CHECK(run({"-i", file, "isp"}).out == "1 : 3\n2 : 1\n");
  CHECK(run({"isp", "--labeled", "--input", file}).out ==
        "1 : 1\nx^1 * x{1} : 1\nx^1 * x{2} : 1\nx^1 * x{3} : 1\nx^2 * x{1,3} : 1\n");

  CHECK(run({"isp", "-i", file, "-o", s.path("out.txt")}).out.empty());
  CHECK(s.read("out.txt") == "1 : 3\n2 : 1\n");
}

TEST_CASE("isp on an adjacent merge") {
  CHECK(run({"isp"}, kAdjacent).code == cli::kUnsupported);
  Run fallback = run({"isp", "--fallback-oracle"}, kAdjacent);
  CHECK(fallback.code == cli::kOk);
  CHECK(fallback.out == "1 : 1\n");
  CHECK(run({"isp", "--fallback-oracle", "--oracle-limit", "0"}, kAdjacent).code == cli::kParseError);
  Run big = run({"isp", "--fallback-oracle"},
                "(fuse 2 (ren 1 2 (join 1 2 (union (vert 1) (union (vert 2) (verts 3 30))))))");
  CHECK(big.code == cli::kTooLarge);
}

TEST_CASE("oracle on a graph file") {
  Run r = run({"oracle"}, "p tw 5 6\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n");
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "1 : 5\n2 : 4\n3 : 1\n");
  CHECK(run({"oracle", "--oracle-limit", "4"}, "p tw 5 0\n").code == cli::kTooLarge);
}

TEST_CASE("isp and oracle agree") {
  Expression c5 = parse_expression(testing::kC5);
  std::string gr = write_gr(evaluate(c5).structure());
  CHECK(run({"isp"}, testing::kC5).out == run({"oracle"}, gr).out);
  CHECK(run({"oracle"}, gr).out == "1 : 5\n2 : 5\n");
}

TEST_CASE("check a decomposition") {
  Scratch s;
  std::string gr = s.write("p3.gr", "p tw 3 2\n1 2\n2 3\n");
  std::string good = s.write("good.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
  std::string bad = s.write("bad.td", "s td 2 2 3\nb 1 1 2\nb 2 2\n1 2\n");
  Run ok = run({"check", "-i", gr, "--td", good});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out == "ok\n");
  Run missing = run({"check", "-i", gr, "--td", bad});
  CHECK(missing.code == cli::kInvalid);
  CHECK(missing.out.find("witness 3") != std::string::npos);
  CHECK(run({"check", "-i", gr, "--td", s.write("broken.td", "s td 2 2 3\n")}).code == cli::kParseError);
}

TEST_CASE("check an expression") {
  CHECK(run({"check"}, testing::kP3).out == "ok\n");
  Run cw = run({"check", "--cw"}, testing::kP3);
  CHECK(cw.code == cli::kInvalid);
  CHECK(cw.out.find("node 0") != std::string::npos);
  CHECK(run({"check", "--cw"}, testing::kK3).code == cli::kOk);

  Scratch s;
  std::string other = s.write("p3b.fx", "(join 1 2 (union (vert 1) (join 1 2 (union (vert 1) (vert 2)))))");
  CHECK(run({"check", "--compare", other}, testing::kP3).code == cli::kOk);
  CHECK(run({"check", "--compare", other}, testing::kK3).code == cli::kInvalid);
}

TEST_CASE("to-cw keeps clique-width input byte for byte") {
  std::string text = "; a triangle\n(join 1 2 (union (vert 1)\n  (ren 1 2 (join 1 2 (union (vert 1) (vert 2))))))\n";
  Run r = run({"to-cw"}, text);
  CHECK(r.code == cli::kOk);
  CHECK(r.out == text);
}

TEST_CASE("to-cw with a certificate") {
  Scratch s;
  Run r = run({"to-cw", "--certificate", s.path("cert.txt")}, testing::kP3);
  REQUIRE(r.code == cli::kOk);
  Expression out = parse_expression(r.out);
  CHECK(validate_expression(out, true).ok());

  ConversionCertificate cert;
  std::istringstream lines(s.read("cert.txt"));
  std::uint32_t a, b;
  while (lines >> a >> b) {
    CHECK(a == cert.to_input.size() + 1);
    cert.to_input.push_back(b - 1);
  }
  CHECK(check_correspondence(evaluate(parse_expression(testing::kP3)).structure(), evaluate(out).structure(), cert));
}

TEST_CASE("from-td") {
  Scratch s;
  std::string gr = s.write("k3.gr", "p tw 3 3\n1 2\n2 3\n1 3\n");
  std::string td = s.write("k3.td", "s td 1 3 3\nb 1 1 2 3\n");
  Run r = run({"from-td", "-i", gr, "--td", td, "--certificate", s.path("cert.txt")});
  REQUIRE(r.code == cli::kOk);
  CHECK(evaluate(parse_expression(r.out)).edge_count() == 3);
  CHECK(s.read("cert.txt").size() == std::string("1 1\n2 2\n3 3\n").size());
  CHECK(run({"from-td", "-i", gr}).code == cli::kParseError);
  std::string partial = s.write("partial.td", "s td 1 2 3\nb 1 1 2\n");
  CHECK(run({"from-td", "-i", gr, "--td", partial}).code == cli::kInvalid);
}

TEST_CASE("normalize") {
  Run r = run({"normalize"}, "(fuse 1 (verts 1 5))");
  CHECK(r.out == "(verts 1 1)\n");
  CHECK(run({"normalize", "--prune"}, "(ren 1 2 (verts 3 1))").out == "(verts 3 1)\n");
}

TEST_CASE("stats") {
  Run r = run({"stats"}, testing::kP3);
  CHECK(r.code == cli::kOk);
  CHECK(r.out ==
        "node_count: 10\ndistinct_labels: 3\nmax_label: 3\nvertex_creations: 4\nhas_fuse: true\n"
        "has_multi_verts: false\n");
}

TEST_CASE("eval") {
  Run r = run({"eval"}, testing::kK23);
  CHECK(r.code == cli::kOk);
  CHECK(parse_gr(r.out).edges.size() == 6);
  CHECK(r.out.find("c label 5 2") != std::string::npos);
  Run dump = run({"eval", "--dump"}, testing::kK23);
  CHECK(std::count(dump.out.begin(), dump.out.end(), '\n') == 5);
}

TEST_CASE("errors and usage") {
  CHECK(run({"isp"}, "(join 1 1 (vert 1))").code == cli::kParseError);
  CHECK(run({"isp"}, "(verts 1").code == cli::kParseError);
  CHECK(run({}).code == cli::kParseError);
  CHECK(run({"frobnicate"}).code == cli::kParseError);
  CHECK(run({"isp", "-i", "/nonexistent/file"}).code == cli::kParseError);
  Run help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("from-td") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  for (const char* cmd : {"isp", "to-cw", "normalize", "eval", "stats"}) {
    Run a = run({cmd}, testing::kC5);
    Run b = run({cmd}, testing::kC5);
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
  }
}
