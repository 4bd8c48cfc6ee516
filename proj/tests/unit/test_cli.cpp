#include "helpers.hpp"

#include "dualdepth/cli.hpp"
#include "dualdepth/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace dualdepth;
using namespace testing;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;

  json report() const { return json::parse(out); }
  json result() const { return report().at("result"); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli_dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return test_path("fixtures/" + name); }

std::string temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dualdepth-cli-tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 2") {
    CHECK(run({}).code == kExitInput);
    CHECK(run({"frobnicate"}).code == kExitInput);
    CHECK(run({"depth", "--instance", fixture("tri.json")}).code == kExitInput);  // missing --point
    const auto r = run({"depth", "--instance", fixture("tri.json"), "--point", "0,0", "--bogus"});
    CHECK(r.code == kExitInput);
    CHECK_FALSE(r.err.empty());
    CHECK(r.out.empty());
    CHECK(run({"--version"}).code == kExitOk);
    CHECK(run({"depth", "--help"}).code == kExitOk);
  }

  TEST_CASE("depth") {
    const auto r = run({"depth", "--instance", fixture("tri.json"), "--point", "2,2"});
    REQUIRE(r.code == kExitOk);
    const auto rep = r.report();
    CHECK(rep.at("version") == kVersion);
    CHECK(rep.at("instance_digest").get<std::string>().size() == 16);
    CHECK(rep.at("command").size() == 5);
    CHECK(rep.contains("timing_ms"));
    CHECK(rep.at("result").at("depth") == 0);

    const auto inside = run({"depth", "--instance", fixture("tri.json"), "--point", "1/4,1/4"});
    CHECK(inside.result().at("depth") == 1);
    const auto vertex = run({"depth", "--instance", fixture("tri.json"), "--point", "0,0"});
    CHECK(vertex.result().at("depth") == 2);
    CHECK(vertex.result().at("contained") == 2);

    CHECK(run({"depth", "--instance", fixture("tri.json"), "--point", "1,x"}).code == kExitInput);
    CHECK(run({"depth", "--instance", fixture("tri.json"), "--point", "1,2,3"}).code == kExitInput);
    CHECK(run({"depth", "--instance", fixture("missing.json"), "--point", "0,0"}).code == kExitInput);
  }

  TEST_CASE("center") {
    const auto r = run({"center", "--instance", fixture("tri.json")});
    REQUIRE(r.code == kExitOk);
    CHECK(r.result().at("depth") == 2);
    CHECK(r.result().at("meets_bound") == true);
    CHECK(r.result().at("bound") == 1);

    const auto fp = run({"center", "--instance", fixture("six.json"), "--method", "fixed-point"});
    CHECK((fp.code == kExitOk || fp.code == kExitFail));
    const auto res = fp.result();
    CHECK(res.at("method") == "fixed-point");
    CHECK((fp.code == kExitOk) == res.at("meets_bound").get<bool>());

    CHECK(run({"center", "--instance", fixture("concurrent.json")}).code == kExitInput);
    CHECK(run({"center", "--instance", fixture("tri.json"), "--method", "magic"}).code == kExitInput);
  }

  TEST_CASE("tverberg-plane") {
    const auto r = run({"tverberg-plane", "--instance", fixture("six.json")});
    REQUIRE(r.code == kExitOk);
    CHECK(r.result().at("groups").size() == 2);
    CHECK(run({"tverberg-plane", "--instance", fixture("concurrent.json")}).code == kExitInput);
    const auto four = temp_file("four.json");
    REQUIRE(run({"gen", "--model", "random-rational", "--n", "4", "--d", "2", "--seed", "1", "--out", four}).code == kExitOk);
    CHECK(run({"tverberg-plane", "--instance", four}).code == kExitInput);
  }

  TEST_CASE("tverberg-search") {
    const auto r = run({"tverberg-search", "--instance", fixture("six.json"), "--groups", "2"});
    REQUIRE(r.code == kExitOk);
    const auto res = r.result();
    CHECK(res.at("found") == true);
    CHECK(res.at("strict") == true);
    CHECK(res.at("groups").size() == 2);
    CHECK(run({"tverberg-search", "--instance", fixture("six.json"), "--groups", "3"}).code == kExitInput);
  }

  TEST_CASE("colorful") {
    const auto path = temp_file("colored9.json");
    REQUIRE(run({"gen", "--model", "random-rational", "--n", "9", "--d", "2", "--seed", "5", "--colors", "--out", path}).code ==
            kExitOk);
    const auto r = run({"colorful", "--instance", path, "--r", "2"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.result().at("found") == true);
    CHECK(r.result().at("preconditions_met") == true);

    const auto none = run({"colorful", "--instance", fixture("short_color.json"), "--r", "2"});
    CHECK(none.code == kExitFail);
    CHECK(none.result().at("found") == false);
    CHECK(none.result().at("preconditions_met") == false);
    CHECK(run({"colorful", "--instance", fixture("six.json"), "--r", "2"}).code == kExitInput);  // no colors
  }

  TEST_CASE("verify-measure") {
    const auto r = run({"verify-measure", "--instance", fixture("disk_lines.json"), "--samples", "4000", "--probes", "360"});
    REQUIRE(r.code == kExitOk);
    const auto res = r.result();
    CHECK(res.at("pass") == true);
    CHECK(res.at("sample_size") == 4000);
    CHECK(res.contains("search"));

    const auto far = run({"verify-measure", "--instance", fixture("disk_lines.json"), "--point", "10,0", "--samples", "2000"});
    CHECK(far.code == kExitFail);
    CHECK(far.result().at("pass") == false);

    CHECK(run({"verify-measure", "--instance", fixture("tri.json")}).code == kExitInput);  // no measure
    CHECK(run({"verify-measure", "--instance", fixture("disk_lines.json"), "--measure-index", "3"}).code == kExitInput);
    CHECK(run({"verify-measure", "--instance", fixture("two_disks.json"), "--point", "0,0"}).code == kExitInput);
  }

  TEST_CASE("verify-transversal") {
    const auto good = run({"verify-transversal", "--instance", fixture("two_disks.json"), "--samples", "4000"});
    REQUIRE(good.code == kExitOk);
    CHECK(good.result().at("per_measure_estimate").size() == 2);
    const auto bad = run({"verify-transversal", "--instance", fixture("two_disks.json"), "--samples", "4000", "--point",
                          "0,5", "--direction", "1,0"});
    CHECK(bad.code == kExitFail);
    // Overriding only the point keeps the file's direction: y = 5 - x/3 misses both disks.
    CHECK(run({"verify-transversal", "--instance", fixture("two_disks.json"), "--samples", "2000", "--point", "0,5"}).code ==
          kExitFail);
    CHECK(run({"verify-transversal", "--instance", fixture("two_disks.json"), "--direction", "1,0", "--direction",
               "0,1"})
              .code == kExitInput);
    CHECK(run({"verify-transversal", "--instance", fixture("tri.json")}).code == kExitInput);
  }

  TEST_CASE("plot") {
    const auto raw = run({"plot", "--instance", fixture("tri.json"), "--witness", "0,0"});
    REQUIRE(raw.code == kExitOk);
    CHECK(raw.out.rfind("<?xml", 0) == 0);
    const auto path = temp_file("tri.svg");
    const auto r = run({"plot", "--instance", fixture("six.json"), "--partition", "--ray", "0,0:1,1", "--point", "1,2",
                        "--out", path});
    REQUIRE(r.code == kExitOk);
    const auto svg = read_text(path);
    CHECK(r.result().at("bytes") == svg.size());
    CHECK(svg.find("id=\"t1\"") != std::string::npos);
    CHECK(svg.find("id=\"witness\"") != std::string::npos);
    const auto three = temp_file("three_d.json");
    REQUIRE(run({"gen", "--n", "4", "--d", "3", "--out", three}).code == kExitOk);
    CHECK(run({"plot", "--instance", three}).code == kExitInput);
    CHECK(run({"plot", "--instance", fixture("tri.json"), "--ray", "0,0"}).code == kExitInput);
  }

  TEST_CASE("validate") {
    const auto ok = run({"validate", "--instance", fixture("tri.json")});
    REQUIRE(ok.code == kExitOk);
    CHECK(ok.result().at("general_position").at("ok") == true);
    const auto bad = run({"validate", "--instance", fixture("concurrent.json")});
    CHECK(bad.code == kExitFail);
    CHECK(bad.result().at("general_position").at("violation") == json::array({0, 1, 2}));
    const auto two = run({"validate", "--instance", fixture("two_disks.json")});
    CHECK(two.result().at("measures") == 2);
    CHECK(two.result().at("transversal") == true);

    const auto extra = temp_file("extra.json");
    {
      std::ofstream o(extra);
      o << R"({"format_version": 1, "dim": 1, "hyperplanes": [{"normal": [1], "offset": 0}], "note": "x"})";
    }
    CHECK(run({"validate", "--instance", extra}).code == kExitInput);
    CHECK(run({"validate", "--instance", extra, "--lenient"}).code == kExitOk);
  }

  TEST_CASE("gen") {
    const auto raw = run({"gen", "--model", "random-rational", "--n", "6", "--d", "2", "--seed", "7"});
    REQUIRE(raw.code == kExitOk);
    const auto parsed = parse_instance(raw.out);
    CHECK(parsed.instance == gen_instance(GeneratorModel::kRandomRational, 6, 2, 7));
    // The checked-in fixture was produced by this command.
    CHECK(parsed.instance == parse_instance(read_text(fixture("six.json"))).instance);
    CHECK(run({"gen", "--model", "nope", "--n", "6", "--d", "2"}).code == kExitInput);
    CHECK(run({"gen", "--n", "6"}).code == kExitInput);
  }

  TEST_CASE("reports re-run bit-identically from their echoed command") {
    const std::vector<std::vector<std::string>> commands = {
        {"depth", "--instance", fixture("tri.json"), "--point", "2,2"},
        {"center", "--instance", fixture("tri.json")},
        {"center", "--instance", fixture("six.json"), "--method", "fixed-point"},
        {"tverberg-plane", "--instance", fixture("six.json")},
        {"tverberg-search", "--instance", fixture("six.json"), "--groups", "2"},
        {"verify-measure", "--instance", fixture("disk_lines.json"), "--samples", "2000", "--probes", "180"},
        {"verify-transversal", "--instance", fixture("two_disks.json"), "--samples", "2000"},
        {"validate", "--instance", fixture("six.json")},
    };
    for (const auto& cmd : commands) {
      CAPTURE(cmd[0]);
      const auto first = run(cmd);
      const auto rep = first.report();
      const auto again = run(rep.at("command").get<std::vector<std::string>>());
      CHECK(again.code == first.code);
      CHECK(again.report().at("result").dump() == rep.at("result").dump());
      CHECK(again.report().at("instance_digest") == rep.at("instance_digest"));
    }
  }

  TEST_CASE("golden reports for the triangle fixture") {
    const auto center = run({"center", "--instance", fixture("tri.json")});
    CHECK(center.result().dump(2) + "\n" == read_text(test_path("golden/tri_center.json")));
    const auto part = run({"tverberg-plane", "--instance", fixture("tri.json")});
    CHECK(part.code == kExitOk);
    CHECK(part.result().dump(2) + "\n" == read_text(test_path("golden/tri_partition.json")));
    const auto digest = center.report().at("instance_digest").get<std::string>();
    CHECK(digest == instance_digest(parse_instance(read_text(fixture("tri.json"))).instance));
  }
}
