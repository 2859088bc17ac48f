#include "doctest.h"

#include "bhgs/error.hpp"
#include "bhgs/io.hpp"
#include "support.hpp"

using namespace bhgs;
using namespace testing;

namespace {

ErrorKind kind_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::parameter;
}

}  // namespace

TEST_CASE("profile CSV round-trips exactly") {
  const auto dir = scratch_dir("io_csv");
  const auto grid = RadialGrid::build(40, 11.0);
  FieldGenerator gen(2);
  const RadialField u = gen(grid, 2);
  io::write_field_csv(dir / "u.csv", u);
  const RadialField v = io::read_field_csv(dir / "u.csv");
  CHECK(v.size() == 40);
  CHECK(v.components() == 2);
  CHECK(v.grid().r_max() == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(v.values() == u.values());
  const std::string text = io::read_text(dir / "u.csv");
  CHECK(text.rfind("r,w_1,w_2\n", 0) == 0);
}

TEST_CASE("malformed profile CSV") {
  const auto dir = scratch_dir("io_csv_bad");
  CHECK(kind_of([&] { io::read_field_csv(dir / "missing.csv"); }) == ErrorKind::io);
  io::write_text(dir / "empty.csv", "");
  CHECK(kind_of([&] { io::read_field_csv(dir / "empty.csv"); }) == ErrorKind::io);
  io::write_text(dir / "header.csv", "x,y\n0,1\n");
  CHECK(kind_of([&] { io::read_field_csv(dir / "header.csv"); }) == ErrorKind::io);
  io::write_text(dir / "short.csv", "r,w_1\n0,1\n1,0\n");
  CHECK(kind_of([&] { io::read_field_csv(dir / "short.csv"); }) == ErrorKind::io);

  const auto grid = RadialGrid::build(20, 5.0);
  std::string rows = "r,w_1\n";
  for (Eigen::Index i = 0; i < 20; ++i) rows += std::to_string(0.25 * static_cast<double>(i)) + ",0\n";
  io::write_text(dir / "uniform.csv", rows);
  CHECK(kind_of([&] { io::read_field_csv(dir / "uniform.csv"); }) == ErrorKind::io);

  io::write_field_csv(dir / "ok.csv", gaussian(grid));
  std::string ok = io::read_text(dir / "ok.csv");
  io::write_text(dir / "ragged.csv", ok + "1,2,3\n");
  CHECK(kind_of([&] { io::read_field_csv(dir / "ragged.csv"); }) == ErrorKind::io);
  const auto comma = ok.find(',', ok.find('\n') + 1);
  ok.replace(comma + 1, 1, "x");
  io::write_text(dir / "nan.csv", ok);
  CHECK(kind_of([&] { io::read_field_csv(dir / "nan.csv"); }) == ErrorKind::io);
}

TEST_CASE("profile JSON round-trips exactly") {
  const auto grid = RadialGrid::build(24, 9.0);
  const RadialField u = gaussian(grid, -1.3, 0.7);
  const nlohmann::json j = io::field_to_json(u);
  CHECK(j.at("n") == 24);
  CHECK(j.at("m") == 1);
  const RadialField v = io::field_from_json(nlohmann::json::parse(j.dump()));
  CHECK(v.values() == u.values());
  CHECK(v.grid().nodes() == u.grid().nodes());

  nlohmann::json bad = j;
  bad["values"].erase(0);
  CHECK(kind_of([&] { io::field_from_json(bad); }) == ErrorKind::io);
  bad = j;
  bad["values"][3].push_back(1.0);
  CHECK(kind_of([&] { io::field_from_json(bad); }) == ErrorKind::io);
  CHECK(kind_of([&] { io::field_from_json({{"n", 24}}); }) == ErrorKind::io);
}

TEST_CASE("TOML subset") {
  const nlohmann::json j = io::parse_toml(R"(
# run settings
command = "solve"
output_dir = 'out dir'   # trailing comment
formats = ["json", "csv"]

[potential]
kind = "defocusing_well"
m = 1
[potential.params]
p = 4.0

[solver]
n = 1_000
r_max = 1.6e1
polish = false
seeds = [1, 2, 3]
label = "a # not a comment"
empty = []
)");
  CHECK(j.at("command") == "solve");
  CHECK(j.at("output_dir") == "out dir");
  CHECK(j.at("formats") == nlohmann::json({"json", "csv"}));
  CHECK(j.at("potential").at("kind") == "defocusing_well");
  CHECK(j.at("potential").at("params").at("p") == 4.0);
  CHECK(j.at("solver").at("n") == 1000);
  CHECK(j.at("solver").at("n").is_number_integer());
  CHECK(j.at("solver").at("r_max") == 16.0);
  CHECK(j.at("solver").at("polish") == false);
  CHECK(j.at("solver").at("seeds") == nlohmann::json({1, 2, 3}));
  CHECK(j.at("solver").at("label") == "a # not a comment");
  CHECK(j.at("solver").at("empty").empty());
}

TEST_CASE("TOML errors are configuration errors") {
  for (const char* text : {"a = 1\na = 2\n", "[]\n", "[a..b]\n", "novalue\n", "x = \"open\n",
                           "x = [1, 2\n", "x = 12abc\n", " = 3\n", "x =\n", "a = 1\n[a]\n"}) {
    CAPTURE(text);
    CHECK(kind_of([&] { io::parse_toml(text); }) == ErrorKind::config);
  }
}

TEST_CASE("config files by extension") {
  const auto dir = scratch_dir("io_config");
  io::write_text(dir / "run.toml", "command = \"oracle\"\n");
  io::write_text(dir / "run.json", R"({"command": "oracle"})");
  io::write_text(dir / "bad.json", "{command");
  CHECK(io::load_config_file(dir / "run.toml") == io::load_config_file(dir / "run.json"));
  CHECK(kind_of([&] { io::load_config_file(dir / "bad.json"); }) == ErrorKind::config);
  CHECK(kind_of([&] { io::load_config_file(dir / "absent.toml"); }) == ErrorKind::io);
}

TEST_CASE("SHA-256 digests") {
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
