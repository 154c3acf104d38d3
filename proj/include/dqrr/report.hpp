#pragma once

#include "json.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace dqrr {

inline constexpr int kReportSchema = 1;

enum class Status { pass, fail, skip };

inline const char* status_name(Status s)
{
	switch (s) {
	case Status::pass: return "pass";
	case Status::fail: return "fail";
	default: return "skip";
	}
}

struct Check {
	std::string name;
	Status status = Status::pass;
	nlohmann::json witness; // counterexample on failure, value table otherwise (may be null)
	std::string note;
};

struct Report {
	std::string suite;
	nlohmann::json params = nlohmann::json::object();
	std::vector<Check> checks;
	std::map<std::string, double> timing; // seconds per check; only filled on request

	void add(Check c) { checks.push_back(std::move(c)); }
	void pass(const std::string& name, nlohmann::json value = nullptr) { add({name, Status::pass, std::move(value), {}}); }
	void fail(const std::string& name, nlohmann::json witness, std::string note = {})
	{
		add({name, Status::fail, std::move(witness), std::move(note)});
	}
	void skip(const std::string& name, std::string why) { add({name, Status::skip, nullptr, std::move(why)}); }
	void expect(const std::string& name, bool ok, nlohmann::json witness = nullptr, std::string note = {})
	{
		if (ok)
			pass(name);
		else
			fail(name, std::move(witness), std::move(note));
	}

	bool ok() const
	{
		return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == Status::fail; });
	}
	void sort()
	{
		std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
	}
	void merge(const Report& o, const std::string& prefix)
	{
		for (auto c : o.checks) {
			c.name = prefix + c.name;
			checks.push_back(std::move(c));
		}
		for (auto& [k, v] : o.timing)
			timing[prefix + k] = v;
	}
};

inline nlohmann::json to_json(const Report& r)
{
	nlohmann::json checks = nlohmann::json::array();
	for (auto& c : r.checks) {
		nlohmann::json j{{"name", c.name}, {"status", status_name(c.status)}};
		if (!c.witness.is_null())
			j["witness"] = c.witness;
		if (!c.note.empty())
			j["note"] = c.note;
		checks.push_back(std::move(j));
	}
	nlohmann::json j{{"schema", kReportSchema}, {"suite", r.suite}, {"params", r.params}, {"checks", checks},
	                 {"ok", r.ok()}};
	if (!r.timing.empty())
		j["timing"] = r.timing;
	return j;
}

inline std::string to_text(const Report& r)
{
	std::string s = "suite " + r.suite + " " + r.params.dump() + "\n";
	for (auto& c : r.checks) {
		s += std::string(status_name(c.status)) + "  " + c.name;
		if (!c.note.empty())
			s += "  (" + c.note + ")";
		if (c.status == Status::fail && !c.witness.is_null())
			s += "  witness=" + c.witness.dump();
		auto t = r.timing.find(c.name);
		if (t != r.timing.end())
			s += "  [" + std::to_string(t->second) + "s]";
		s += "\n";
	}
	s += r.ok() ? "ok\n" : "FAILED\n";
	return s;
}

inline std::string emit(const Report& r, const std::string& format)
{
	if (format == "json")
		return to_json(r).dump(2) + "\n";
	if (format == "text")
		return to_text(r);
	throw std::invalid_argument("unknown format: " + format);
}

} // namespace dqrr
