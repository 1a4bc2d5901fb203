#include <doctest.h>

#include <cstdlib>
#include <string>

#include "wavesys/cli_config.hpp"

using namespace wavesys;

TEST_CASE("17-digit float rendering round-trips") {
  for (double x : {1.0 / 3.0, 2.4142135623730951, 1e-300, 6.0, 0.1}) {
    const std::string s = fmt17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(fmt17(6.0) == "6");
}

TEST_CASE("render then parse is the identity") {
  RunConfig c;
  c.command = "classify";
  c.params = {{"n", "3"}, {"p", "2.5"}, {"q", "3"}};
  c.output_path = "out.csv";
  c.format = "json";
  RunConfig back = parse_config_text(render_config(c));
  CHECK(back == c);

  // Minimal config: no output, default format.
  RunConfig m;
  m.command = "exponents";
  m.params = {{"n", "2"}};
  CHECK(parse_config_text(render_config(m)) == m);
}

TEST_CASE("rendered text is deterministic and ordered") {
  RunConfig c;
  c.command = "solve";
  c.params = {{"q", "2"}, {"eps", "0.5"}};
  const std::string text = render_config(c);
  // command first, then format, then the params in sorted key order.
  CHECK(text.find("command = solve") < text.find("format = csv"));
  CHECK(text.find("format = csv") < text.find("eps = 0.5"));
  CHECK(text.find("eps = 0.5") < text.find("q = 2"));
  CHECK(render_config(c) == text);
}

TEST_CASE("parser accepts comments and loose whitespace") {
  const std::string text =
      "# run configuration\n"
      "\n"
      "command = classify   \n"
      "   n=3\n"
      "p =  2   # inline trailing comment\n"
      "q=2\n";
  RunConfig c = parse_config_text(text);
  CHECK(c.command == "classify");
  CHECK(c.format == "csv");
  CHECK(c.output_path.empty());
  REQUIRE(c.params.size() == 3);
  CHECK(c.params.at("n") == "3");
  CHECK(c.params.at("p") == "2");
  CHECK(c.params.at("q") == "2");
}

TEST_CASE("values keep everything after the first equals sign") {
  RunConfig c = parse_config_text(
      "command = verify-bounds\n"
      "ts = 1,3,10\n"
      "note = a=b\n");
  CHECK(c.params.at("ts") == "1,3,10");
  CHECK(c.params.at("note") == "a=b");
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_config_text("n = 3\n"), DomainError);  // no command
  CHECK_THROWS_AS(parse_config_text("command = classify\nn = 3\nn = 4\n"),
                  DomainError);  // duplicate parameter
  CHECK_THROWS_AS(
      parse_config_text("command = classify\nformat = yaml\n"),
      DomainError);  // unknown format
  CHECK_THROWS_AS(parse_config_text("command = classify\nstray line\n"),
                  DomainError);  // no equals sign
}

TEST_CASE("special keys are not parameters") {
  RunConfig c = parse_config_text(
      "command = solve\n"
      "output = /tmp/x.json\n"
      "format = json\n"
      "eps = 0.1\n");
  CHECK(c.command == "solve");
  CHECK(c.output_path == "/tmp/x.json");
  CHECK(c.format == "json");
  CHECK(c.params.size() == 1);
}
