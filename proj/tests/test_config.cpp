#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "hylent/config.hpp"
#include "hylent/errors.hpp"

using namespace hylent;

TEST_CASE("precision selection") {
  CHECK(precision_for_digits(15) == Precision::Double);
  CHECK(precision_for_digits(16) == Precision::Quad);
  CHECK(precision_for_digits(33) == Precision::Quad);
  CHECK_THROWS_AS(precision_for_digits(14), InvalidArgument);
  CHECK_THROWS_AS(precision_for_digits(40), InvalidArgument);
  CHECK(to_string(Precision::Quad) == "quad");
}

TEST_CASE("list parsing") {
  CHECK(parse_int_list("3") == std::vector<int>{3});
  CHECK(parse_int_list("2-4, 6") == std::vector<int>{2, 3, 4, 6});
  CHECK_THROWS_AS(parse_int_list("5-3"), InvalidArgument);
  CHECK_THROWS_AS(parse_int_list("x"), InvalidArgument);
  const auto g = parse_real_list("1:2:0.2");
  REQUIRE(g.size() == 6);
  CHECK(g.back() == doctest::Approx(2.0));
  CHECK(parse_real_list("0, 0.5,1") == std::vector<double>{0, 0.5, 1});
  CHECK_THROWS_AS(parse_real_list("1:2"), InvalidArgument);
  CHECK_THROWS_AS(parse_real_list("1:2:0"), InvalidArgument);
}

TEST_CASE("key=value text") {
  const auto kv = parse_key_values("# comment\nsystem = h-minus\n\nomega=5-6  # trailing\n");
  CHECK(kv.size() == 2);
  CHECK(kv.at("system") == "h-minus");
  CHECK(kv.at("omega") == "5-6");
  CHECK_THROWS_AS(parse_key_values("no equals sign"), InvalidArgument);
}

TEST_CASE("settings and validation") {
  RunConfig c;
  apply_setting(c, "system", "ps-minus");
  apply_setting(c, "omega", "5,6");
  apply_setting(c, "precision_digits", "15");
  apply_setting(c, "format", "json");
  apply_setting(c, "threads", "2");
  apply_setting(c, "corrupt", "yes");
  CHECK(c.system_spec().Z == 1.0);
  CHECK(c.system_spec().m3.value() == 1.0);
  CHECK(c.omegas == std::vector<int>{5, 6});
  CHECK(c.format == OutputFormat::Json);
  CHECK(c.corrupt);
  c.validate();

  apply_setting(c, "m3", "inf");
  CHECK(c.system_spec().m3.is_infinite());
  apply_setting(c, "Z", "1.4");
  CHECK(c.system_spec().Z == 1.4);

  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), InvalidArgument);
  CHECK_THROWS_AS(apply_setting(c, "threads", "two"), InvalidArgument);
  CHECK_THROWS_AS(apply_setting(c, "system", "lithium"), InvalidArgument);
  CHECK_THROWS_AS(apply_setting(c, "format", "xml"), InvalidArgument);

  RunConfig bad;
  bad.alpha_low = 1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad.alpha_high = 0.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  RunConfig neg;
  neg.charge = -1.0;
  CHECK_THROWS_AS(neg.validate(), InvalidArgument);
  RunConfig digits;
  digits.precision_digits = 40;
  CHECK_THROWS_AS(digits.validate(), InvalidArgument);
}

TEST_CASE("config file and environment default") {
  const auto path = std::filesystem::temp_directory_path() / "hylent_test_config.txt";
  {
    std::ofstream out(path);
    out << "system = h-minus\nomega = 4\nseed = 12\n";
  }
  RunConfig c;
  load_config_file(c, path.string());
  CHECK(c.system == "h-minus");
  CHECK(c.omegas == std::vector<int>{4});
  CHECK(c.seed == 12);
  // later settings override the file
  apply_setting(c, "omega", "6");
  CHECK(c.omegas == std::vector<int>{6});
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config_file(c, path.string()), InvalidArgument);

  ::setenv("HYLL_PRECISION_DIGITS", "15", 1);
  CHECK(default_config().precision_digits == 15);
  ::setenv("HYLL_PRECISION_DIGITS", "abc", 1);
  CHECK_THROWS_AS(default_config(), InvalidArgument);
  ::unsetenv("HYLL_PRECISION_DIGITS");
  CHECK(default_config().precision_digits == 33);
}
