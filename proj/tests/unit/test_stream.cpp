#include <doctest.h>

#include <sstream>

#include "dtw/stream.hpp"

using namespace dtw;

namespace {

std::string run(const std::string& text, ReplayOptions opt = {}, ReplayResult* res = nullptr) {
  std::istringstream is(text);
  auto s = parse_stream(is);
  std::ostringstream out, err;
  auto r = replay(s, opt, out, err);
  if (res) *res = r;
  return out.str();
}

}  // namespace

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    std::istringstream is(text);
    try {
      parse_stream(is);
    } catch (const ParseError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of("") == 1);
  CHECK(line_of("n 3 x 1\n") == 1);
  CHECK(line_of("n 3 k 1\n+ 0 1\n+ 0 3\n") == 3);
  CHECK(line_of("n 3 k 1\n# c\n\n+ 1 1\n") == 4);
  CHECK(line_of("n 3 k 1\n? what\n") == 2);
  CHECK(line_of("n 3 k 1\n+ 0 a\n") == 2);
  CHECK(line_of("n 3 k 1\n? color 0\n") == 2);
  CHECK(line_of("n 3 k 1\n+ 0 1\n? color 3\n! dump /tmp/x\n") == -1);
}

TEST_CASE("triangle queries") {
  CHECK(run("n 3 k 2\n+ 0 1\n+ 1 2\n+ 0 2\n? mis\n? tw\n? color 3\n? color 2\n") ==
        "mis 1\ntw_ok true\ncolor true\ncolor false\n");
}

TEST_CASE("tw above k in wrapper mode") {
  CHECK(run("n 3 k 1\n+ 0 1\n+ 1 2\n+ 0 2\n? tw\n? mis\n- 0 2\n? tw\n? mis\n") ==
        "tw_ok false\nmis unknown\ntw_ok true\nmis 2\n");
}

TEST_CASE("promise violation is flagged") {
  ReplayOptions opt;
  opt.promise = true;
  opt.validate = true;
  ReplayResult r;
  run("n 3 k 1\n+ 0 1\n+ 1 2\n+ 0 2\n", opt, &r);
  CHECK(r.promise_violations == 1);
  CHECK(r.exit_code != 0);
}

TEST_CASE("csv has one row per op and a summary") {
  std::ostringstream csv;
  ReplayOptions opt;
  opt.csv = &csv;
  std::string text = "n 8 k 1\n";
  for (int i = 0; i < 7; ++i) text += "+ " + std::to_string(i) + " " + std::to_string(i + 1) + "\n";
  text += "- 0 1\n- 3 4\n? tw\n";
  run(text, opt);
  std::istringstream is(csv.str());
  std::vector<std::string> lines;
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  REQUIRE(lines.size() == 12);
  CHECK(lines[0] == kCsvHeader);
  CHECK(lines[11].rfind("summary,10,", 0) == 0);
  for (std::size_t i = 1; i <= 10; ++i) {
    auto w = lines[i].substr(lines[i].rfind(',') + 1);
    CHECK(std::stoi(w) <= 11);
  }
}

TEST_CASE("write then parse is the identity") {
  std::string text = "n 5 k 2\n+ 0 1\n- 0 1\n? tw\n? mis\n? color 3\n! dump out.td\n";
  std::istringstream is(text);
  auto s = parse_stream(is);
  std::ostringstream os;
  write_stream(os, s);
  CHECK(os.str() == text);
}
