#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "rgl/report.hpp"

using namespace rgl;
namespace fs = std::filesystem;

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv") {
  Table t;
  t.header = {"name", "value", "count"};
  CHECK(to_csv(t) == "name,value,count\n");
  t.rows.push_back({std::string("a,b"), 0.5, 3LL});
  t.rows.push_back({std::string("say \"hi\""), 1e-20, -1LL});
  CHECK(to_csv(t) == "name,value,count\n\"a,b\",0.5,3\n\"say \"\"hi\"\"\",9.9999999999999995e-21,-1\n");
}

TEST_CASE("json document") {
  const auto doc = report_document("appendix-a", {{"x", 1.5}});
  CHECK(doc["schema"] == kSchemaVersion);
  CHECK(doc["command"] == "appendix-a");
  CHECK(doc["generated_at"].get<std::string>().back() == 'Z');
  const auto stripped = strip_timestamp(doc);
  CHECK_FALSE(stripped.contains("generated_at"));
  CHECK(nlohmann::json::parse(doc.dump()) == doc);
}

TEST_CASE("atomic writes") {
  const fs::path dir = fs::temp_directory_path() / "rgl_report_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto target = (dir / "out.json").string();
  write_atomic(target, "first");
  write_atomic(target, "second");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "second");
  CHECK_NOTHROW(check_writable(target));
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().filename() == "out.json");

  CHECK_THROWS_AS(write_atomic((dir / "missing" / "x.json").string(), "x"), IoError);
  CHECK_THROWS_AS(check_writable((dir / "missing" / "x.json").string()), IoError);
  // Target is a directory: the rename fails and the temporary must not linger.
  fs::create_directories(dir / "blocked");
  fs::create_directories(dir / "blocked" / "inner");
  CHECK_THROWS_AS(write_atomic((dir / "blocked").string(), "x"), IoError);
  CHECK_FALSE(fs::exists(dir / "blocked.tmp"));
  fs::remove_all(dir);
}
