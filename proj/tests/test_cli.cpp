#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "heatnorm/cli.hpp"
#include "heatnorm/report_io.hpp"

using namespace heatnorm;
using io::Json;

namespace
{

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& csv)
{
  std::vector<std::string> lines;
  std::istringstream in(csv);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#')
      lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("format_number round-trips")
{
  for (double x : {0.1, 1.0 / 3, 1e-300, 6.02214076e23, -2.5, 0.0})
    CHECK(std::stod(io::format_number(x)) == x);
  CHECK(io::format_number(1.0) == "1");
  CHECK(io::format_number(std::nan("")) == "nan");
}

TEST_CASE("Table CSV and JSON")
{
  io::Table t({"a", "b", "c"});
  t.add_row({1.5, std::int64_t(2), std::monostate{}});
  t.add_row({std::string("x"), true, 0.25});
  std::ostringstream os;
  t.write_csv(os);
  CHECK(os.str() == "a,b,c\n1.5,2,\nx,true,0.25\n");
  const Json j = t.to_json();
  REQUIRE(j.is_array());
  CHECK(j[0]["c"].is_null());
  CHECK(j[1]["a"] == "x");
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);

  io::Table one({"v"});
  one.add_row({2.0});
  CHECK(one.to_json(true).is_object());
}

TEST_CASE("sweep subcommand")
{
  const auto r = run({"sweep", "--t-min", "1e-6", "--t-max", "10", "--points", "7"});
  CHECK(r.code == cli::exit_ok);
  CHECK(r.out.rfind("# subcommand: sweep", 0) == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] == "t,exact_m,envelope_ub,floor_lb,dyadic_ub,n_star,normalized_exact");
  // floor_lb is empty once t >= 1/e.
  CHECK(lines.back().find(",,") != std::string::npos);

  const auto j = run({"--format", "json", "sweep", "--points", "3"});
  CHECK(j.code == cli::exit_ok);
  const Json doc = Json::parse(j.out);
  REQUIRE(doc.size() == 3);
  CHECK(doc[0]["t"] == 1e-9);
  CHECK(j.err.find("# manifest") != std::string::npos);
}

TEST_CASE("bound subcommand")
{
  const auto r = run({"bound", "--n", "3", "--q", "1.5", "--critical", "--t-grid", "1e-4:1:5"});
  CHECK(r.code == cli::exit_ok);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "n,q,s,t,kernel_norm,critical_log_bound");
  CHECK(lines[1].rfind("3,1.5,2,1e-04,", 0) == 0);

  CHECK(run({"bound", "--n", "2", "--q", "2", "--s", "0.5", "--t", "0.1"}).code == cli::exit_ok);
  CHECK(run({"bound", "--n", "2", "--q", "3", "--t", "0.1"}).code == cli::exit_usage);
  CHECK(run({"bound", "--n", "2"}).code == cli::exit_usage);
  CHECK(run({"bound", "--t-grid", "1:2"}).code == cli::exit_usage);
}

TEST_CASE("extremizer subcommand")
{
  const auto r = run({"extremizer", "--t", "0.01"});
  CHECK(r.code == cli::exit_ok);
  const Json j = Json::parse(r.out);
  CHECK(j["lambda"].get<double>() == doctest::Approx(paper_lambda(0.01)));
  CHECK(j["is_optimized"] == false);

  const auto o = run({"extremizer", "--t", "0.01", "--optimize"});
  CHECK(Json::parse(o.out)["ratio"].get<double>() >= j["ratio"].get<double>());

  CHECK(run({"extremizer", "--t", "2", "--lambda", "3"}).code == cli::exit_ok);
  CHECK(run({"extremizer", "--t", "2"}).code == cli::exit_usage);
  CHECK(run({"extremizer", "--t", "0.1", "--lambda", "0.5"}).code == cli::exit_usage);
  CHECK(run({"extremizer", "--t", "0.1", "--lambda", "2", "--optimize"}).code == cli::exit_usage);
}

TEST_CASE("grid-verify and bg subcommands")
{
  const auto g = run({"grid-verify", "--n", "128", "--L", "40", "--profile", "random", "--trials", "3", "--seed", "5"});
  CHECK(g.code == cli::exit_ok);
  const Json j = Json::parse(g.out);
  for (const char* key : {"ratio", "exact_m", "margin", "plancherel_err", "semigroup_err"})
    CHECK(j.contains(key));
  CHECK(j["trials"] == 3);

  const auto b = run({"bg", "--n", "64", "--L", "20", "--profile", "random", "--trials", "4"});
  CHECK(b.code == cli::exit_ok);
  CHECK(Json::parse(b.out).size() == 4);

  CHECK(run({"grid-verify", "--n", "100"}).code == cli::exit_usage);
  CHECK(run({"grid-verify", "--profile", "annular"}).code == cli::exit_usage);
}

TEST_CASE("e1 subcommand and global options")
{
  const auto r = run({"e1", "--x", "1"});
  CHECK(r.code == cli::exit_ok);
  CHECK(Json::parse(r.out)["e1"].get<double>() == doctest::Approx(0.21938393439552027));
  CHECK(run({"e1", "--x", "0"}).code == cli::exit_usage);
  CHECK(run({}).code == cli::exit_usage);
  CHECK(run({"nonsense"}).code == cli::exit_usage);
  CHECK(run({"--format", "xml", "e1", "--x", "1"}).code == cli::exit_usage);
  CHECK(run({"--help"}).code == cli::exit_ok);

  const auto path = std::filesystem::temp_directory_path() / "heatnorm_cli_test.json";
  const auto o = run({"--out", path.string(), "e1", "--x", "2"});
  CHECK(o.code == cli::exit_ok);
  CHECK(o.out.empty());
  std::ifstream in(path);
  CHECK(Json::parse(in)["x"] == 2.0);
  std::ifstream manifest(path.string() + ".manifest.json");
  const Json m = Json::parse(manifest);
  CHECK(m["subcommand"] == "e1");
  CHECK(m["version"] == io::tool_version());
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".manifest.json");
}

TEST_CASE("Assertion failures give exit code 1")
{
  // A tiny grid-verify tolerance with a saturating field on a coarse grid
  // trips the ratio check, since the lattice sum overshoots M(t).
  const auto r = run({"--tol", "1e-15", "grid-verify", "--n", "8", "--L", "4", "--t", "1", "--profile", "saturating"});
  CHECK(r.code == cli::exit_violation);
  CHECK(r.err.find("violation") != std::string::npos);
}

TEST_CASE("Identical arguments give identical output")
{
  const std::vector<std::string> args = {"--format", "csv", "bg", "--n", "64", "--L", "20", "--profile", "random",
                                         "--trials", "3", "--seed", "9"};
  auto strip = [](const std::string& s) {
    std::string out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
      if (line.rfind("# duration_seconds", 0) != 0)
        out += line + "\n";
    return out;
  };
  CHECK(strip(run(args).out) == strip(run(args).out));
}

TEST_CASE("Worked CLI examples")
{
  const auto sweep = run({"sweep", "--t-min", "1e-9", "--t-max", "1e4", "--points", "400", "--format", "csv"});
  CHECK(sweep.code == cli::exit_ok);
  CHECK(data_lines(sweep.out).size() == 401);
  CHECK(run({"sweep", "--t-min", "-1"}).code == cli::exit_usage);
  const Json e1 = Json::parse(run({"e1", "--x", "1.0"}).out);
  CHECK(e1["x"] == 1.0);
  CHECK(e1["e1"].get<double>() == doctest::Approx(0.21938393439552).epsilon(1e-13));
}
