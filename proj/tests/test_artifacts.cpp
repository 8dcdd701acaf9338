#include <filesystem>

#include "doctest.h"
#include "magtb/artifacts.hpp"
#include "magtb/common.hpp"

using namespace magtb;

TEST_SUITE("artifacts") {
  TEST_CASE("FNV-1a reference vectors") {
    CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
    CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
    CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
    CHECK(hex64(1).size() == 16);
  }

  TEST_CASE("CSV metadata round trip") {
    const ArtifactMeta m{"tb", "0123456789abcdef"};
    const std::string text = with_csv_meta(m, "x,y\n1,2\n3,4.5\n");
    CHECK(text.rfind("# {", 0) == 0);
    const CsvTable t = parse_csv(text);
    CHECK(t.meta.at("command") == "tb");
    CHECK(t.meta.at("config_hash") == "0123456789abcdef");
    CHECK(t.meta.at("version") == kVersion);
    CHECK(t.header == std::vector<std::string>{"x", "y"});
    CHECK(t.numeric("y") == std::vector<double>{2.0, 4.5});
    CHECK(t.column("z") == -1);
    CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ArgumentError);
  }

  TEST_CASE("JSON metadata") {
    const ArtifactMeta m{"chern", "ffff"};
    const auto obj = nlohmann::json::parse(with_json_meta(m, {{"nearest_integer", 1}}));
    CHECK(obj.at("nearest_integer") == 1);
    CHECK(obj.at("meta").at("command") == "chern");
    const auto arr = nlohmann::json::parse(with_json_meta(m, nlohmann::json::array({1, 2})));
    CHECK(arr.at("data").size() == 2);
    CHECK(arr.contains("meta"));
  }

  TEST_CASE("files are written with parent directories") {
    const auto dir = std::filesystem::temp_directory_path() / "magtb_artifacts_test";
    std::filesystem::remove_all(dir);
    write_text(dir / "a" / "b.txt", "hello\n");
    CHECK(read_text(dir / "a" / "b.txt") == "hello\n");
    CHECK_THROWS(read_text(dir / "missing.txt"));
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("timestamp format") {
    const std::string t = utc_timestamp();
    CHECK(t.size() == 20);
    CHECK(t[10] == 'T');
    CHECK(t.back() == 'Z');
  }
}
