#include <gtest/gtest.h>

#include "heegnerlab/report.hpp"

using namespace heegnerlab;

namespace {

RunReport sample() {
  RunReport rep;
  rep.subcommand = "demo";
  rep.config = {{"seed", 7}};
  Table t{"rows", {"name", "value", "ok"}, {}};
  t.add({"a,b", 0.999263871, true});
  t.add({"c", 12, false});
  rep.tables.push_back(t);
  rep.verdicts.push_back({"identity", true, ""});
  return rep;
}

}  // namespace

TEST(Report, FormatParsingAndSignificantDigits) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::csv);
  EXPECT_THROW(parse_format("xml"), std::invalid_argument);
  EXPECT_EQ(format_sig(0.999263871), "0.99926");
  EXPECT_EQ(format_sig(1.0), "1");
  EXPECT_EQ(format_sig(123456.0), "1.2346e+05");
}

TEST(Report, TsvAndCsvRendering) {
  const auto rep = sample();
  EXPECT_EQ(render(rep, OutputFormat::tsv),
            "name\tvalue\tok\na,b\t0.99926\ttrue\nc\t12\tfalse\n\ncheck\tverdict\tdetail\nidentity\tPASS\t\n");
  EXPECT_EQ(render(rep, OutputFormat::csv),
            "name,value,ok\n\"a,b\",0.99926,true\nc,12,false\n\ncheck,verdict,detail\nidentity,PASS,\n");
}

TEST(Report, JsonRendering) {
  auto rep = sample();
  const auto j = json::parse(render(rep, OutputFormat::json));
  EXPECT_EQ(j["subcommand"], "demo");
  EXPECT_EQ(j["config"]["seed"], 7);
  EXPECT_EQ(j["tables"]["rows"][0]["name"], "a,b");
  EXPECT_DOUBLE_EQ(j["tables"]["rows"][0]["value"].get<double>(), 0.99926);
  EXPECT_EQ(j["tables"]["rows"][1]["value"], 12);
  EXPECT_TRUE(j["pass"].get<bool>());
  rep.verdicts.push_back({"other", false, "x=3"});
  EXPECT_FALSE(json::parse(render(rep, OutputFormat::json))["pass"].get<bool>());
  Table bad{"bad", {"x"}, {}};
  EXPECT_THROW(bad.add({1, 2}), std::logic_error);
}

TEST(Report, ClassGroupJson) {
  const auto j = class_group_json(class_group(Discriminant(-23)));
  EXPECT_EQ(j.dump(), R"({"disc":-23,"h":3,"elementary_divisors":[3],"forms":[[1,1,6],[2,-1,3],[2,1,3]]})");
  const auto k = class_group_json(class_group(Discriminant(-84)));
  EXPECT_EQ(k["h"], 4);
  EXPECT_EQ(k["elementary_divisors"], json::parse("[2,2]"));
  EXPECT_EQ(k["forms"].size(), 4u);
}
