#include "dqrr/suites.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace dqrr;

namespace {

SuiteConfig small(const std::string& suite, uint64_t seed = 7)
{
	SuiteConfig cfg;
	cfg.suite = suite;
	cfg.trials = 10;
	cfg.seed = seed;
	return cfg;
}

} // namespace

TEST(Harness, ReportsAreDeterministic)
{
	auto a = emit(run_suite(small("weyl")), "json");
	auto b = emit(run_suite(small("weyl")), "json");
	EXPECT_EQ(a, b);
	EXPECT_EQ(emit(run_suite(small("complexes")), "text"), emit(run_suite(small("complexes")), "text"));
}

TEST(Harness, JsonShape)
{
	auto j = nlohmann::json::parse(emit(run_suite(small("brodzki")), "json"));
	EXPECT_EQ(j.at("schema"), kReportSchema);
	EXPECT_EQ(j.at("suite"), "brodzki");
	EXPECT_EQ(j.at("params").at("seed"), 7);
	EXPECT_TRUE(j.at("ok").get<bool>());
	bool found = false;
	for (auto& c : j.at("checks"))
		if (c.at("name") == "br_eta_power") {
			found = true;
			EXPECT_EQ(c.at("status"), "pass");
			EXPECT_EQ(c.at("witness").at("value"), 1);
		}
	EXPECT_TRUE(found);
}

TEST(Harness, TextHasOneLinePerCheck)
{
	auto r = run_suite(small("koszul"));
	std::istringstream in(to_text(r));
	std::string line;
	int n = 0;
	while (std::getline(in, line))
		++n;
	EXPECT_EQ(n, int(r.checks.size()) + 2);
}

TEST(Harness, FailingCheckCarriesWitness)
{
	Report r;
	r.suite = "x";
	r.expect("good", true);
	r.expect("bad", false, {{"input", 3}});
	EXPECT_FALSE(r.ok());
	auto t = to_text(r);
	EXPECT_NE(t.find("fail  bad  witness={\"input\":3}"), std::string::npos);
	EXPECT_NE(t.find("FAILED"), std::string::npos);
	auto j = to_json(r);
	EXPECT_EQ(j.at("checks").at(1).at("witness").at("input"), 3);
	EXPECT_THROW(emit(r, "yaml"), std::invalid_argument);
}

TEST(Harness, KnownFailureIsReported)
{
	auto r = run_suite(small("fundamental"));
	for (auto& c : r.checks) {
		bool known = c.name.rfind("muhumu_lead", 0) == 0;
		EXPECT_EQ(c.status, known ? Status::fail : Status::pass) << c.name;
	}
}

TEST(Harness, ConfigFileParses)
{
	std::istringstream in("# comment\nsuite = weyl\nd=2\n  trials=5 # inline\nseed=42\nformat=json\n");
	auto cfg = load_config(in);
	EXPECT_EQ(cfg.suite, "weyl");
	EXPECT_EQ(cfg.d, 2);
	EXPECT_EQ(cfg.trials, 5);
	EXPECT_EQ(cfg.seed, 42u);
	EXPECT_EQ(cfg.format, "json");
}

TEST(Harness, ConfigErrors)
{
	auto bad = [](const std::string& s) {
		std::istringstream in(s);
		return load_config(in);
	};
	EXPECT_THROW(bad("trials\n"), config_error);
	EXPECT_THROW(bad("trials=abc\n"), config_error);
	EXPECT_THROW(bad("colour=blue\n"), config_error);
	SuiteConfig cfg;
	cfg.d = 3;
	EXPECT_THROW(cfg.validate(), config_error);
	cfg = SuiteConfig{};
	cfg.order = 0;
	EXPECT_THROW(cfg.validate(), config_error);
	EXPECT_THROW(run_suite(small("nonsense")), config_error);
}

TEST(Harness, SuiteNamesCoverModules)
{
	auto n = suite_names();
	for (auto s : {"complexes", "weyl", "koszul", "brodzki", "fundamental", "liecw", "fedosov"})
		EXPECT_NE(std::find(n.begin(), n.end(), s), n.end()) << s;
}

TEST(Harness, SeedChangesDraws)
{
	auto a = run_suite(small("weyl", 1)), b = run_suite(small("weyl", 2));
	EXPECT_TRUE(a.ok());
	EXPECT_TRUE(b.ok());
	EXPECT_NE(to_json(a).at("params"), to_json(b).at("params"));
}
