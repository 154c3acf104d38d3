#include "dqrr/suites.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace dqrr;

namespace {

uint64_t default_seed()
{
	if (const char* s = std::getenv("DQRR_SEED")) {
		char* end = nullptr;
		auto v = std::strtoull(s, &end, 10);
		if (end && *end == 0 && end != s)
			return v;
		throw config_error("DQRR_SEED is not an integer");
	}
	return 1;
}

nlohmann::json series_json(const std::string& name, int order)
{
	auto s = series_expand(name, order);
	nlohmann::json c = nlohmann::json::array();
	for (auto& [k, v] : s.c)
		c.push_back({{"z", k.first}, {"theta", k.second}, {"c", v.get_str()}});
	return {{"name", name}, {"order", order}, {"coefficients", c}};
}

int run_fedosov(const std::string& path, int depth)
{
	std::ifstream in(path);
	if (!in)
		throw config_error("cannot open " + path);
	nlohmann::json j;
	try {
		j = nlohmann::json::parse(in);
	} catch (const nlohmann::json::exception& e) {
		throw config_error(std::string("theta file: ") + e.what());
	}
	const int cap = depth + 2;
	FormalForm theta = theta_from_json(j, cap);
	auto c = fedosov_recursion(theta, depth);
	auto ex = curvature_of_lift(c);
	int mw = mc_residual(c, theta).min_weight();
	nlohmann::json out{{"depth", depth},
	                   {"theta", form_json(ex)},
	                   {"residual_min_weight", mw == kZeroFiltration ? -1 : mw},
	                   {"A_0", form_json(c.A_0)},
	                   {"higher", form_json(c.higher)},
	                   {"central_lift", form_json(c.central_lift)}};
	std::cout << out.dump(2) << "\n";
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"dqrr: exact verification of the algebraic Riemann-Roch pipeline"};
	app.require_subcommand(1);

	SuiteConfig cfg;
	std::string config_path;
	auto* verify = app.add_subcommand("verify", "run a named verification suite");
	verify->add_option("suite", cfg.suite, "complexes|weyl|koszul|brodzki|fundamental|liecw|fedosov|all")->required();
	auto* o_d = verify->add_option("--d", cfg.d, "half dimension");
	auto* o_cap = verify->add_option("--cap", cfg.cap, "polynomial degree cap");
	auto* o_order = verify->add_option("--order", cfg.order, "truncation order M");
	auto* o_trials = verify->add_option("--trials", cfg.trials, "random trials per check");
	auto* o_seed = verify->add_option("--seed", cfg.seed, "seed (default $DQRR_SEED or 1)");
	auto* o_format = verify->add_option("--format", cfg.format, "json|text")->check(CLI::IsMember({"json", "text"}));
	auto* o_golden = verify->add_option("--golden", cfg.golden, "golden Br(U) table");
	verify->add_option("--config", config_path, "key=value config file");
	verify->add_flag("--timing", cfg.timing, "record per-suite timing");

	std::string series_name;
	int series_order = 6;
	auto* series = app.add_subcommand("series", "print coefficients of a named series");
	series->add_option("name", series_name, "EXP|SINH_RATIO|AHAT|AHAT_INV_ETHETA_FACTOR")->required();
	series->add_option("--order", series_order, "order")->required();

	std::string theta_path;
	int depth = 4;
	auto* fed = app.add_subcommand("fedosov", "run the recursion for a scalar 2-form");
	fed->add_option("--theta", theta_path, "JSON 2-form {d, terms:[{z, dz, t, c}]}")->required();
	fed->add_option("--depth", depth, "recursion depth N")->required();

	int golden_order = 4;
	auto* golden = app.add_subcommand("golden", "print the series-side Br(U) table");
	golden->add_option("--order", golden_order, "truncation order M");

	CLI11_PARSE(app, argc, argv);

	try {
		if (*verify) {
			SuiteConfig base;
			base.seed = default_seed();
			if (!config_path.empty()) {
				std::ifstream in(config_path);
				if (!in)
					throw config_error("cannot open " + config_path);
				base = load_config(in, base);
			}
			// command line wins over the config file
			base.suite = cfg.suite;
			if (o_d->count())
				base.d = cfg.d;
			if (o_cap->count())
				base.cap = cfg.cap;
			if (o_order->count())
				base.order = cfg.order;
			if (o_trials->count())
				base.trials = cfg.trials;
			if (o_seed->count())
				base.seed = cfg.seed;
			if (o_format->count())
				base.format = cfg.format;
			if (o_golden->count())
				base.golden = cfg.golden;
			base.timing = cfg.timing;
			Report r = run_suite(base);
			std::cout << emit(r, base.format);
			return r.ok() ? 0 : 1;
		}
		if (*series) {
			std::cout << series_json(series_name, series_order).dump(2) << "\n";
			return 0;
		}
		if (*fed)
			return run_fedosov(theta_path, depth);
		if (*golden) {
			std::cout << detail::br_table_json(br_u_series_side(golden_order)).dump(2) << "\n";
			return 0;
		}
	} catch (const config_error& e) {
		std::cerr << "dqrr: " << e.what() << "\n";
		return 2;
	}
	return 0;
}
