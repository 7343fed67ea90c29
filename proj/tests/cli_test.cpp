#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cli.hpp"

using namespace nathanson;

namespace
{
const std::string kConfigs = NATHANSON_CONFIG_DIR;
const std::string kCase2 = kConfigs + "/case2_h4_t2.json";
const std::string kCase1 = kConfigs + "/case1_h5_t2.json";
const std::string kLab = kConfigs + "/lab_h4_t2.json";
const std::string kTheoremA = kConfigs + "/theorem_a_h2_t2.json";

struct Run
{
    int code;
    std::string out;
    std::string err;

    Json json() const { return Json::parse(out); }

    std::vector<Json> lines() const
    {
        std::vector<Json> v;
        std::istringstream in(out);
        for(std::string line; std::getline(in, line);) { v.push_back(Json::parse(line)); }
        return v;
    }
};

Run invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "nathanson");
    std::vector<const char*> argv;
    for(const auto& a : args) { argv.push_back(a.c_str()); }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text)
{
    const auto path = std::filesystem::temp_directory_path() / ("nathanson_cli_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}
} // namespace

TEST(Cli, HelpAndUsage)
{
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({"represent", "--n", "5"}).code, 2);
    EXPECT_EQ(invoke({"bogus"}).code, 2);
    EXPECT_EQ(invoke({"represent", "--config", kCase2, "--n", "12x"}).code, 2);
    EXPECT_EQ(invoke({"represent", "--config", "/nonexistent.json", "--n", "601"}).code, 2);
}

TEST(Cli, ConfigValidateAndShow)
{
    auto r = invoke({"config", "validate", "--config", kCase2});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.json()["valid"].get<bool>());

    const auto bad = write_temp("bad_cfg.json",
                                R"({"h":4,"t":2,"m_rule":{"kind":"arithmetic","first":10,"step":10},"strict":true,"mode":"case2"})");
    r = invoke({"config", "validate", "--config", bad});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.json()["valid"].get<bool>());
    EXPECT_FALSE(r.json()["violations"].empty());

    const auto malformed = write_temp("malformed_cfg.json", R"({"h":4,"t":)");
    r = invoke({"represent", "--config", malformed, "--n", "601"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.json()["error"]["code"], "ParseError");

    r = invoke({"config", "show", "--config", kCase2});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.json()["m"], Json::parse("[300,600,900]"));
    EXPECT_EQ(r.json()["classes"][1][0], Json::parse("[301,302]"));
}

TEST(Cli, Classify)
{
    auto r = invoke({"classify", "--config", kCase2, "--w", "302"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.json()["class"], 1);
    r = invoke({"classify", "--config", kCase2, "--n", "exp:[301,302]"});
    EXPECT_EQ(r.json()["class"], 1);
    EXPECT_TRUE(r.json()["in_A"].get<bool>());
    r = invoke({"classify", "--config", kCase2, "--n", "exp:[2,301]"});
    EXPECT_TRUE(r.json()["class"].is_null());
    EXPECT_EQ(invoke({"classify", "--config", kCase2, "--n", "0"}).code, 2);
    EXPECT_EQ(invoke({"classify", "--config", kCase2}).code, 2);
}

TEST(Cli, RepresentExitCodes)
{
    auto r = invoke({"represent", "--config", kCase2, "--n", "601"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(verify(parse_certificate(r.out)).ok());

    r = invoke({"represent", "--config", kCase2, "--n", "10"});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.json()["error"]["code"], "BelowGuarantee");

    r = invoke({"represent", "--config", kCase1, "--n", "3"});
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.json()["error"]["code"], "TooFewTerms");

    r = invoke({"represent", "--config", kCase1, "--n", "exp:[2,27,601]", "--trace"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.json()["trace_digest"].is_string());
    EXPECT_TRUE(Json::parse(r.err).contains("trace"));

    EXPECT_EQ(invoke({"represent", "--config", kLab, "--n", "100"}).code, 2);
}

TEST(Cli, FaithfulModeDivergenceOnStderr)
{
    const auto plain = invoke({"represent", "--config", kCase2, "--n", "exp:[2,304]"});
    const auto faithful = invoke({"represent", "--config", kCase2, "--n", "exp:[2,304]", "--paper-faithful"});
    EXPECT_EQ(plain.code, 0);
    EXPECT_EQ(faithful.code, 0);
    EXPECT_EQ(plain.out, faithful.out);
    EXPECT_TRUE(plain.err.empty());
    const auto d = Json::parse(faithful.err)["divergences"][0];
    EXPECT_EQ(d["exp"], Json::parse("[2,301]"));
    EXPECT_EQ(d["check"], "class impurity");
}

TEST(Cli, VerifyFiles)
{
    const auto cert = invoke({"represent", "--config", kCase2, "--n", "123456789"}).out;
    EXPECT_EQ(invoke({"verify", write_temp("good.json", cert)}).code, 0);

    auto j = Json::parse(cert);
    j["parts"][0]["exp"].push_back(5000);
    const auto r = invoke({"verify", write_temp("tampered.json", j.dump())});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(r.json()["ok"].get<bool>());

    EXPECT_EQ(invoke({"verify", write_temp("garbage.json", "not json")}).code, 2);
}

TEST(Cli, ScanOrderAndSummary)
{
    const auto r = invoke({"scan", "--config", kCase2, "--from", "590", "--to", "620"});
    EXPECT_EQ(r.code, 0);
    const auto lines = r.lines();
    ASSERT_EQ(lines.size(), 32u);
    for(std::size_t i = 0; i < 11; ++i) { EXPECT_EQ(lines[i]["error"]["code"], "BelowGuarantee"); }
    for(std::size_t i = 11; i < 31; ++i)
    {
        EXPECT_EQ(lines[i]["n"]["dec"], std::to_string(590 + i));
        EXPECT_TRUE(lines[i]["case"].get<std::string>().starts_with("case2/"));
    }
    EXPECT_EQ(lines.back()["summary"], Json::parse(R"({"total":31,"ok":20,"below_guarantee":11,"too_few_terms":0,"failed":0})"));

    const auto empty = invoke({"scan", "--config", kCase2, "--from", "700", "--to", "699"});
    EXPECT_EQ(empty.code, 0);
    EXPECT_EQ(empty.lines().size(), 1u);
    EXPECT_EQ(empty.lines()[0]["summary"]["total"], 0);
}

TEST(Cli, ScanParallelMatchesSerial)
{
    const auto serial = invoke({"scan", "--config", kCase2, "--from", "601", "--to", "9000"});
    const auto parallel = invoke({"scan", "--config", kCase2, "--from", "601", "--to", "9000", "--jobs", "4"});
    EXPECT_EQ(serial.code, 0);
    EXPECT_EQ(serial.out, parallel.out);

    const auto case1 = invoke({"scan", "--config", kCase1, "--from", "1", "--to", "40", "--jobs", "3"});
    EXPECT_EQ(case1.code, 0);
    const auto summary = case1.lines().back()["summary"];
    EXPECT_EQ(summary["failed"], 0);
    EXPECT_EQ(summary["ok"].get<int>() + summary["too_few_terms"].get<int>(), 40);
}

TEST(Cli, OracleCommands)
{
    auto r = invoke({"oracle", "enumerate", "--config", kLab, "--N", "20"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.json()["count"].get<std::size_t>(), r.json()["elements"].size());

    r = invoke({"oracle", "rtable", "--config", kLab, "--N", "100", "--jobs", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.json()["r"].size(), 101u);
    EXPECT_EQ(r.json()["r"][0], 0);
    EXPECT_NE(r.json()["note"].get<std::string>().find("finite-window"), std::string::npos);

    r = invoke({"oracle", "ewindow", "--config", kLab, "--N", "100", "--a", "4"});
    EXPECT_EQ(r.code, 0);
    r = invoke({"oracle", "ewindow", "--config", kLab, "--N", "600", "--a", "516"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.json()["error"]["code"], "ElementNotInA");

    r = invoke({"oracle", "rtable", "--config", kLab, "--N", "5000", "--max-window", "1000"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.json()["error"]["code"], "WindowTooLarge");

    r = invoke({"oracle", "theorem-a", "--config", kTheoremA, "--N", "4096", "--samples", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.json()["samples"].size(), 5u);
    EXPECT_TRUE(r.json()["all_samples_nonempty"].get<bool>());

    r = invoke({"oracle", "theorem-a", "--config", kLab, "--N", "4096"});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.json()["error"]["code"], "ParameterMismatch");

    r = invoke({"oracle", "theorem-a", "--config", kLab, "--N", "4096", "--samples", "3", "--allow-unmet-hypotheses"});
    EXPECT_EQ(r.code, 0);
    EXPECT_FALSE(r.json()["unmet_hypotheses"].empty());
}
