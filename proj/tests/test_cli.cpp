#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "dstsp/cli.hpp"
#include "dstsp/error.hpp"
#include "dstsp/report.hpp"

using namespace dstsp;
using namespace dstsp::report;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("dstsp_cli_" + std::to_string(::getpid()))) { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "dstsp_lab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("hashes") {
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1e-300, 6.02214076e23, 3.141592653589793}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("csv emission and parsing") {
  TempDir dir;
  const auto path = dir.file("empty.csv");
  emit_report({{"a", "b"}, {}}, path, Format::Csv);
  CHECK(read_file(path) == "a,b\n");

  Table t{{"name", "x", "k"}, {{std::string("plain"), 0.25, std::int64_t{3}},
                               {std::string("with,comma \"q\"\nline"), -1e-9, std::int64_t{-7}}}};
  emit_report(t, path, Format::Csv);
  const auto back = parse_csv(read_file(path));
  REQUIRE(back.header == t.header);
  REQUIRE(back.rows.size() == 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(to_text(back.rows[r][c]) == to_text(t.rows[r][c]));
  CHECK(read_file(path).find('\r') == std::string::npos);

  emit_report(t, dir.file("t.json"), Format::Json);
  CHECK(read_file(dir.file("t.json")).rfind("[\n{\"name\":\"plain\",\"x\":0.25,\"k\":3}", 0) == 0);
  emit_report({{"a"}, {}}, dir.file("e.json"), Format::Json);
  CHECK(read_file(dir.file("e.json")) == "[]\n");

  CHECK_THROWS_AS(emit_report(t, dir.file("missing/dir/x.csv"), Format::Csv), Error);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("a million rows stream to disk") {
  TempDir dir;
  const auto path = dir.file("big.csv");
  {
    ReportWriter w(path, Format::Csv, {"i", "v"});
    for (std::int64_t i = 0; i < 1000000; ++i) w.row({i, 0.5});
    CHECK(w.rows() == 1000000);
  }
  CHECK(fs::file_size(path) > 7000000);
}

TEST_CASE("config parsing and precedence") {
  auto cfg = cli::config_from_json(R"({"model": "reeds_shepp", "r_min": 0.5, "n": [16, 64], "seeds": 3})");
  CHECK(cfg.model == "reeds_shepp");
  CHECK(cfg.r_min == 0.5);
  CHECK(cfg.n == std::vector<std::uint64_t>{16, 64});
  CHECK(cli::make_model(cfg).r_min() == 0.5);
  try {
    cli::config_from_json("{\n  \"n\": [1,\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  auto expect_field = [](const std::string& text, const std::string& field) {
    try {
      auto c = cli::config_from_json(text);
      c.subcommand = "run-dstsp";
      c.validate();
      FAIL("expected an error for " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
      CHECK(std::string(e.what()).find("'" + field) != std::string::npos);
    }
  };
  expect_field(R"({"seeds": -1})", "seeds");
  expect_field(R"({"delta": "x"})", "delta");
  expect_field(R"({"bogus": 1})", "bogus");
  expect_field(R"({"n": [64, 16]})", "n");
  expect_field(R"({"n": []})", "n");
  expect_field(R"({"model": "scaled_euclidean2", "sigma": "1:2"})", "sigma");
  cli::ExperimentConfig sc;
  sc.model = "scaled_euclidean2";
  sc.sigma = "0.5:1:2";
  CHECK(cli::make_model(sc).sigma().at(0.75) == 2.0);

  TempDir dir;
  const auto conf = dir.file("c.json");
  write_file(conf, R"({"n": [3], "seeds": 2, "density": "linear"})");
  const auto out = dir.file("o.csv");
  REQUIRE(call({"run-dstsp", "--config", conf, "--seeds", "4", "--out", out, "--threads", "1"}) == 0);
  const auto t = parse_csv(read_file(out));
  CHECK(t.rows.size() == 4);
  CHECK(to_text(t.rows[0][2]) == "linear");
  CHECK(to_text(t.rows[0][3]) == "3");
  CHECK(fs::exists(out + ".manifest.json"));
  CHECK(call({"run-dstsp", "--n", "5,4"}) == 2);
  CHECK(call({"no-such-command"}) != 0);
}

TEST_CASE("cli output is independent of thread count") {
  TempDir dir;
  const std::vector<std::vector<std::string>> runs{
      {"run-dstsp", "--model", "euclidean2", "--n", "64,256", "--seeds", "6", "--seed", "7"},
      {"run-adversarial", "--model", "scaled_euclidean2", "--sigma", "0.5:1:2", "--n", "128", "--seeds", "4"},
      {"cbo-check", "--n", "8,60", "--seeds", "5", "--lambda", "0.3"},
      {"concentration", "--m", "4", "--n", "500", "--trials", "400"},
      {"estimate-agility", "--samples", "20000"}};
  int k = 0;
  for (const auto& args : runs) {
    std::string first, first_manifest;
    const auto out = dir.file("r" + std::to_string(k) + ".csv");
    for (const char* threads : {"1", "3", "8"}) {
      auto a = args;
      a.insert(a.end(), {"--threads", threads, "--out", out});
      REQUIRE(call(a) == 0);
      const auto text = read_file(out);
      const auto manifest = read_file(out + ".manifest.json");
      if (first.empty()) {
        first = text;
        first_manifest = manifest;
      }
      CHECK(text == first);
      CHECK(manifest == first_manifest);
    }
    ++k;
  }
}

TEST_CASE("hcp-solve and check-bounds outputs") {
  TempDir dir;
  write_file(dir.file("i.json"), R"({"b": 4, "s": 2, "targets": [[1, 2]]})");
  REQUIRE(call({"hcp-solve", "--instance", dir.file("i.json"), "--out", dir.file("h.csv"), "--assert"}) == 0);
  auto t = parse_csv(read_file(dir.file("h.csv")));
  CHECK(to_text(t.rows[0][3]) == "2");
  REQUIRE(call({"check-bounds", "--b", "16", "--delta", "0.1", "--alpha", "0.3183", "--n", "10000", "--out",
                dir.file("b.json")}) == 0);
  const auto text = read_file(dir.file("b.json"));
  CHECK(text.find("\"lower\": 8.51") != std::string::npos);
  CHECK(text.find("\"upper\": 4679.3") != std::string::npos);
  write_file(dir.file("bad.json"), R"({"b": 4, "s": 2, "targets": [[9]]})");
  CHECK(call({"hcp-solve", "--instance", dir.file("bad.json")}) == 3);
}
