#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nlbound/json_io.hpp"
#include "support.hpp"

using namespace nlbound;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NLBOUND_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "nlbound_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("box JSON round trip") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const BinarySystem p = testing::random_box(rng);
    const Json j = box_to_json(p);
    CHECK(box_from_json(Json::parse(j.dump())) == p);
  }
  const Json dec = Json::parse(R"({"p": [[["0.375", "0.125", "0.125", "0.375"], ["3/8", "1/8", "1/8", "3/8"]],
                                         [["3/8", "1/8", "1/8", "3/8"], ["1/8", "3/8", "3/8", "1/8"]]]})");
  CHECK(box_from_json(dec) == facet_isotropic({}));
  CHECK_THROWS_AS(box_from_json(Json::parse(R"({"q": 1})")), std::invalid_argument);
  CHECK_THROWS_AS(box_from_json(Json::parse(R"({"p": [[1, 2]]})")), std::invalid_argument);
}

TEST_CASE("protocol JSON round trip") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const Protocol pr = random_protocol(1 + t % 4, rng);
    CHECK(protocol_from_json(Json::parse(protocol_to_json(pr).dump())) == pr);
  }
  Json broken = protocol_to_json(trivial_protocol(2));
  broken["f"][0] = Json::array({0, 1});
  CHECK_THROWS_AS(protocol_from_json(broken), std::invalid_argument);
}

TEST_CASE("decomposition JSON is exact") {
  const Decomposition d = minimal_isotropic(wedge(Rational(1, 5), Rational(2, 5)));
  const Json j = decomposition_to_json(d);
  CHECK(Rational::parse(j.at("epsilon").get<std::string>()) == d.epsilon);
  CHECK(Rational::parse(j.at("q").get<std::string>()) == d.q);
  CHECK(Rational::parse(j.at("p_f").get<std::string>()) == d.facet_weight);
  CHECK(j.at("weights").size() == 16u);
  CHECK(j.at("facet").at("id") == 0);
}

TEST_CASE("cli: nl, decompose, validate") {
  Run r = run("nl --wedge 1/5,0");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out).at("nl") == "12/5");

  r = run("nl --wedge 0.2,0");
  CHECK(Json::parse(r.out).at("nl") == "12/5");

  r = run("decompose --wedge 1/5,0");
  REQUIRE(r.code == 0);
  const Json d = Json::parse(r.out);
  CHECK(d.at("epsilon") == "1/5");
  CHECK(d.at("q") == "1/1");

  const fs::path bad = scratch() / "signaling.json";
  {
    BinarySystem p = pr_box();
    p(1, 0, 0, 0) = Rational(1, 4);
    p(1, 0, 1, 1) = Rational(3, 4);
    std::ofstream(bad) << box_to_json(p).dump();
  }
  r = run("validate --box " + bad.string());
  CHECK(r.code == 2);
  const Json v = Json::parse(r.out);
  CHECK(v.at("valid") == false);
  CHECK_FALSE(v.at("violations").empty());
  CHECK(v.at("violations")[0].contains("where"));

  CHECK(run("nl --box " + bad.string()).code == 2);
  CHECK(run("nl --wedge 3/4,1/2").code == 3);
  CHECK(run("nl --box /nonexistent/box.json").code == 4);
  const fs::path garbage = scratch() / "garbage.json";
  std::ofstream(garbage) << "{not json";
  CHECK(run("nl --box " + garbage.string()).code == 2);
}

TEST_CASE("cli: bound, grid and the table cache") {
  const fs::path cache = scratch() / "cache";
  fs::remove_all(cache);
  Run cold = run("bound --wedge 1/5,0 --n 4 --cache " + cache.string());
  REQUIRE(cold.code == 0);
  CHECK(Json::parse(cold.out).at("bound") == "12/5");
  CHECK(fs::exists(table_cache_path(cache, Rational(2, 5), 4)));

  // Cache hit: same bytes out.
  const std::string cmd = std::string(NLBOUND_CLI) + " bound --wedge 1/5,0 --n 4 --cache " + cache.string() +
                          " 2>&1 >/dev/null | grep -c cache_hit";
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[16] = {};
  CHECK(fgets(buf, sizeof buf, pipe) != nullptr);
  pclose(pipe);
  CHECK(std::string(buf) == "1\n");
  CHECK(run("bound --wedge 1/5,0 --n 4 --cache " + cache.string()).out == cold.out);
  // A smaller n reuses the larger table.
  CHECK(run("bound --wedge 1/5,0 --n 3 --cache " + cache.string()).code == 0);

  // Corrupt the cached file.
  const fs::path file = table_cache_path(cache, Rational(2, 5), 4);
  {
    std::fstream f(file, std::ios::in | std::ios::out);
    f.seekp(-3, std::ios::end);
    f.put('7');
  }
  CHECK(run("bound --wedge 1/5,0 --n 4 --cache " + cache.string()).code == 5);

  const Run grid = run("grid --wedge 1/5,0 --n 2");
  REQUIRE(grid.code == 0);
  CHECK(grid.out.rfind("s_k,s_l,bound_num,bound_den\n", 0) == 0);
  CHECK(run("grid --wedge 1/5,0 --n 2 --approx").out.find("bound_approx") != std::string::npos);

  CHECK(run("bound --wedge 1/5,0 --n 8").code == 6);
  CHECK(run("search --wedge 1/2,0 --n 2").code == 6);
  CHECK(run("bound --wedge 1/5,0 --n 0").code == 3);
  CHECK(run("bogus").code == 1);
  fs::remove_all(cache);
}

TEST_CASE("cli: search") {
  const Run r = run("search --wedge 1/2,0 --n 2 --long-run --seed 3");
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j.at("D") == "3/1");
  CHECK(j.at("seed") == 3);
  const Protocol w = protocol_from_json(j.at("witness"));
  CHECK(nl_protocol(wedge(Rational(1, 2), 0), w) == 3);
}
