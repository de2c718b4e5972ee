#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using nlohmann::json;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dglift");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dglift::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string instance(const std::string& name) { return std::string(DGLIFT_INSTANCE_DIR) + "/" + name; }

json report(std::vector<std::string> args) {
  args.push_back("--json");
  Invocation r = invoke(args);
  EXPECT_NE(r.code, 2) << r.err;
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, BatteryOnI2) {
  const json r = report({"battery", instance("I2.dg")});
  const json& m = r["modules"][0];
  EXPECT_FALSE(m["conditions"][0]["value"].get<bool>());
  EXPECT_FALSE(m["conditions"][1]["value"].get<bool>());
  EXPECT_FALSE(m["ar1"]["holds"].get<bool>());
  EXPECT_EQ(m["ar1"]["first_failure"], 2);
  EXPECT_EQ(r["status"], "pass");
}

TEST(Cli, OmegaOnB3) {
  const Invocation r = invoke({"omega", instance("B3.dg")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("omega = 0, witness stored"), std::string::npos) << r.out;
  const json j = report({"omega", instance("B3.dg")});
  EXPECT_FALSE(j["modules"][0]["witness"].is_null());
  EXPECT_TRUE(j["modules"][0]["counit_splits"].get<bool>());
}

TEST(Cli, HomOnI3WithNegativeShift) {
  const json r = report({"hom", instance("I3.dg"), "--shift=-1"});
  EXPECT_GE(r["hom"]["dim"].get<int>(), 1);
  EXPECT_EQ(r["hom"]["explicit_class"]["map"]["e0"], "e1*(a)");
  EXPECT_EQ(r["hom"]["explicit_class"]["map"]["e1"], "0");
  EXPECT_TRUE(r["hom"]["explicit_class"]["reproduced"].get<bool>());
}

TEST(Cli, ReportsAreByteIdentical) {
  for (const std::string cmd : {"check", "battery", "gamma", "appendix"}) {
    for (const std::string field : {"Q", "Fp:2147483629"}) {
      const Invocation a = invoke({cmd, instance("summand.dg"), "--json", "--field=" + field});
      const Invocation b = invoke({cmd, instance("summand.dg"), "--json", "--field=" + field});
      EXPECT_EQ(a.code, 0) << cmd << a.err;
      EXPECT_EQ(a.out, b.out) << cmd;
      EXPECT_EQ(json::parse(a.out)["backend"], field);
    }
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate", instance("B.dg")}).code, 2);
  EXPECT_EQ(invoke({"battery"}).code, 2);
  EXPECT_EQ(invoke({"battery", instance("B.dg"), "--field=R"}).code, 2);
  EXPECT_EQ(invoke({"battery", "/nonexistent.dg"}).code, 2);
  EXPECT_EQ(invoke({"battery", instance("B.dg"), "--module", "nope"}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);

  const auto bad = std::filesystem::temp_directory_path() / "dglift_bad.dg";
  std::ofstream(bad) << "[algebra]\ny : 1\n[module M]\ne0 : 0\ne1 : 1, d = e0\ne2 : 2, d = e1\n";
  const Invocation r = invoke({"check", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":6:13:"), std::string::npos) << r.err;
  std::filesystem::remove(bad);
}

TEST(Cli, FlagsOverrideFileLimits) {
  const json r = report({"battery", instance("B.dg"), "--lbound", "2", "--max-degree", "7"});
  EXPECT_EQ(r["limits"]["lbound"], 2);
  EXPECT_EQ(r["limits"]["max_degree"], 7);
  EXPECT_EQ(r["limits"]["max_tensor"], 3);
  EXPECT_EQ(r["modules"][0]["gamma_dims"].size(), 3u);
}

TEST(Cli, WholeCorpusPasses) {
  for (const auto& entry : std::filesystem::directory_iterator(DGLIFT_INSTANCE_DIR)) {
    if (entry.path().extension() != ".dg") continue;
    for (const std::string cmd : {"check", "omega", "battery", "gamma", "appendix"}) {
      const Invocation r = invoke({cmd, entry.path().string()});
      EXPECT_EQ(r.code, 0) << cmd << " " << entry.path() << "\n" << r.out << r.err;
    }
  }
}
