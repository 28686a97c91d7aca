#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xorlab/cli.hpp"

using xorlab::cli::run_cli;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "xorlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"verify-sandwich", "--dims", "2,x"}).code == 2);
  CHECK(run({"--format", "xml", "ot", "bound"}).code == 2);
  CHECK(run({"ot", "ceiling", "--n", "0"}).code == 2);
  CHECK(run({"sdp", "solve", "/nonexistent/problem.json"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify-sandwich") {
  auto r = run({"--seed", "5", "verify-sandwich", "--dims", "2,4", "--samples", "50"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2 * 50 + 2);
  const auto rec = Json::parse(ls.front());
  CHECK(rec.at("seed") == 5);
  const auto summary = Json::parse(ls.back());
  CHECK(summary.at("type") == "summary");
  CHECK(summary.at("sandwich_violations") == 0);

  CHECK(run({"--seed", "5", "verify-sandwich", "--dims", "2,4", "--samples", "50"}).out == r.out);

  r = run({"verify-sandwich", "--dims", "2", "--samples", "0"});
  CHECK(r.code == 0);

  r = run({"verify-sandwich", "--dims", "3", "--samples", "20", "--summary-only"});
  CHECK(lines(r.out).size() == 1);
}

TEST_CASE("table with one column") {
  const auto r = run({"table", "--n-max", "1", "--restarts", "3", "--iters", "100"});
  CHECK(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 7);
  CHECK(ls[0].rfind("# seed=1", 0) == 0);
  CHECK(ls[1] == "row,n=1");
  CHECK(ls[2] == "Lower Bound,0.750");
  CHECK(ls[3] == "See-saw,0.854");
  CHECK(ls[4] == "SDP Relaxation,0.854");
  CHECK(ls[5] == "Our Bound,1.000");
  CHECK(ls[6] == "Conjectured Value,0.854");
}

TEST_CASE("protocol commands") {
  auto r = run({"ot", "bound", "--mode", "bit"});
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j.at("schema") == "xorlab/v1");
  CHECK(std::abs(j.at("bound").get<double>() - 0.599) <= 5e-4);

  r = run({"ot", "bound", "--mode", "string"});
  CHECK(std::abs(Json::parse(r.out).at("bound").get<double>() - 0.5852) <= 5e-4);

  r = run({"ot", "ceiling", "--n", "2", "--mode", "tensor"});
  CHECK(std::abs(Json::parse(r.out).at("ceiling").get<double>() - 0.7285533906) <= 1e-9);

  r = run({"ot", "demo", "--encoding", "bbbw"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out).at("value_preserved") == true);

  CHECK(run({"ot", "cheats", "--encoding", "identical"}).code == 0);
  CHECK(run({"cf", "demo"}).code == 0);
  CHECK(run({"ot", "suite"}).code == 0);

  r = run({"learn", "--encoding", "bbbw"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out).at("theorem1_ok") == true);
}

TEST_CASE("classical encoding file fails the precondition") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "xorlab_cli_classical.json").string();
  {
    std::ofstream f(path);
    f << R"({"schema":"xorlab/v1","n":1,"entries":[)";
    for (int k = 0; k < 4; ++k) {
      const int x0 = k >> 1, x1 = k & 1;
      f << (k ? "," : "") << R"({"x0":")" << x0 << R"(","x1":")" << x1
        << R"(","prior":0.25,"state":{"dim":4,"matrix":{"rows":4,"cols":4,"data":[)";
      for (int e = 0; e < 16; ++e) f << (e ? "," : "") << (e == 5 * k ? "[1,0]" : "[0,0]");
      f << "]}}}";
    }
    f << "]}";
  }
  const auto r = run({"ot", "demo", "--encoding", path});
  CHECK(r.code == 1);
  CHECK(r.err.find("precondition") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("sdp solve and --out") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto problem = (dir / "xorlab_cli_problem.json").string();
  const auto report = (dir / "xorlab_cli_report.json").string();
  {
    std::ofstream f(problem);
    f << R"({"schema":"xorlab/v1","dim":2,
      "objective":{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[-1,0]]},
      "constraints":[{"matrix":{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]},"rhs":1}]})";
  }
  const auto r = run({"--out", report, "sdp", "solve", problem});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(report);
  const auto j = Json::parse(in);
  CHECK(j.at("status") == "optimal");
  CHECK(std::abs(j.at("value").get<double>() - 1.0) <= 1e-6);
  std::filesystem::remove(problem);
  std::filesystem::remove(report);
}
