#include <catch_amalgamated.hpp>
#include <filesystem>
#include <fstream>

#include "decafs/series_io.hpp"

using namespace decafs;
using namespace decafs::io;
using V = std::vector<double>;

TEST_CASE("parse_number") {
  double x = 0.0;
  CHECK(parse_number("1.5", x));
  CHECK(x == 1.5);
  CHECK(parse_number(" -2e3 ", x));
  CHECK(x == -2000.0);
  CHECK(parse_number("+4", x));
  CHECK(x == 4.0);
  CHECK(parse_number("\"7.25\"", x));
  CHECK(x == 7.25);
  CHECK_FALSE(parse_number("", x));
  CHECK_FALSE(parse_number("abc", x));
  CHECK_FALSE(parse_number("1.5x", x));
  CHECK_FALSE(parse_number("nan", x));
  CHECK_FALSE(parse_number("inf", x));
  CHECK_FALSE(parse_number("1e400", x));
  CHECK_FALSE(parse_number("1,5", x));
}

TEST_CASE("plain and delimited text") {
  CHECK(parse_series("1\n2\n3\n") == V{1, 2, 3});
  CHECK(parse_series("1\r\n2\r\n\r\n3") == V{1, 2, 3});
  CHECK(parse_series("value\n1\n2\n") == V{1, 2});
  CHECK(parse_series("a,b\n1,10\n2,20\n", "b") == V{10, 20});
  CHECK(parse_series("a,b\n1,10\n2,20\n", "2") == V{10, 20});
  CHECK(parse_series("1\t10\n2\t20\n", "2") == V{10, 20});
  CHECK(parse_series("1;10\n2;20\n") == V{1, 2});
  CHECK(parse_series("1  10\n2 20\n", "2") == V{10, 20});
  CHECK(parse_series("\"t\",\"y\"\n1,\"3.5\"\n", "y") == V{3.5});
}

TEST_CASE("malformed input") {
  try {
    parse_series("value\n1.5\n2.5\nabc\n4\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.row() == 4);
    CHECK(std::string(e.what()).find("row 4") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_series(""), ParseError);
  CHECK_THROWS_AS(parse_series("value\n"), ParseError);
  CHECK_THROWS_AS(parse_series("1,2\n3\n", "2"), ParseError);
  CHECK_THROWS_AS(parse_series("1,2\n3,4\n", "3"), ParseError);
  CHECK_THROWS_AS(parse_series("1,2\n3,4\n", "name"), InvalidParameter);
  CHECK_THROWS_AS(parse_series("a,b\n1,2\n", "c"), InvalidParameter);
  CHECK_THROWS_AS(parse_series("1,2\n", "0"), InvalidParameter);
  CHECK_THROWS_AS(parse_series("1\nnan\n"), ParseError);
}

TEST_CASE("files") {
  const auto dir = std::filesystem::temp_directory_path() / "decafs_series_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "y.csv";
  {
    std::ofstream out(path);
    out << "t,y\n1,0.5\n2,-1\n";
  }
  CHECK(read_series(path.string(), "y") == V{0.5, -1.0});
  CHECK_THROWS_AS(read_series((dir / "missing.csv").string()), UnreadableInput);
  CHECK_THROWS_AS(read_series(dir.string()), UnreadableInput);
  std::filesystem::remove_all(dir);
}
