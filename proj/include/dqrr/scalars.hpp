#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dqrr {

using Rational = mpq_class;

struct config_error : std::runtime_error {
	using std::runtime_error::runtime_error;
};

inline Rational rat(long n, long d = 1)
{
	Rational r(n, d);
	r.canonicalize();
	return r;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational factorial(int n)
{
	Rational r = 1;
	for (int i = 2; i <= n; ++i)
		r *= i;
	return r;
}

struct Window {
	int t_min = -8, t_max = 8;
	int u_min = -8, u_max = 8;

	bool contains(int t, int u) const
	{
		return t >= t_min && t <= t_max && u >= u_min && u <= u_max;
	}
	bool operator==(const Window&) const = default;
};

// Truncated Laurent series in t and u with exact coefficients.
class TULaurent {
public:
	using Key = std::pair<int, int>; // (t-exponent, u-exponent)

	TULaurent() = default;
	explicit TULaurent(Window w) : w_(w) {}
	TULaurent(Window w, const Rational& c, int t = 0, int u = 0) : w_(w) { add_term(t, u, c); }

	const Window& window() const { return w_; }
	const std::map<Key, Rational>& terms() const { return c_; }
	bool clipped() const { return clip_; }
	bool is_zero() const { return c_.empty(); }
	void mark_clipped() { clip_ = true; }

	Rational coeff(int t, int u) const
	{
		auto it = c_.find({t, u});
		return it == c_.end() ? Rational(0) : it->second;
	}

	void add_term(int t, int u, const Rational& c)
	{
		if (sgn(c) == 0)
			return;
		if (!w_.contains(t, u)) {
			clip_ = true;
			return;
		}
		auto [it, fresh] = c_.try_emplace({t, u}, c);
		if (!fresh) {
			it->second += c;
			if (sgn(it->second) == 0)
				c_.erase(it);
		}
	}

	TULaurent& operator+=(const TULaurent& o)
	{
		check(o);
		for (auto& [k, v] : o.c_)
			add_term(k.first, k.second, v);
		clip_ = clip_ || o.clip_;
		return *this;
	}
	TULaurent& operator-=(const TULaurent& o)
	{
		check(o);
		for (auto& [k, v] : o.c_)
			add_term(k.first, k.second, -v);
		clip_ = clip_ || o.clip_;
		return *this;
	}
	TULaurent& operator*=(const Rational& q)
	{
		if (sgn(q) == 0) {
			c_.clear();
			return *this;
		}
		for (auto& [k, v] : c_)
			v *= q;
		return *this;
	}

	// multiply by t^a u^b
	TULaurent shifted(int a, int b) const
	{
		TULaurent r(w_);
		r.clip_ = clip_;
		for (auto& [k, v] : c_)
			r.add_term(k.first + a, k.second + b, v);
		return r;
	}

	friend TULaurent operator+(TULaurent a, const TULaurent& b) { return a += b; }
	friend TULaurent operator-(TULaurent a, const TULaurent& b) { return a -= b; }
	friend TULaurent operator-(TULaurent a) { return a *= Rational(-1); }
	friend TULaurent operator*(TULaurent a, const Rational& q) { return a *= q; }
	friend TULaurent operator*(const Rational& q, TULaurent a) { return a *= q; }

	friend TULaurent operator*(const TULaurent& a, const TULaurent& b)
	{
		a.check(b);
		TULaurent r(a.w_);
		r.clip_ = a.clip_ || b.clip_;
		for (auto& [ka, va] : a.c_)
			for (auto& [kb, vb] : b.c_)
				r.add_term(ka.first + kb.first, ka.second + kb.second, va * vb);
		return r;
	}

	// equality ignores the clip flag
	friend bool operator==(const TULaurent& a, const TULaurent& b) { return a.c_ == b.c_; }

	std::string str() const
	{
		if (c_.empty())
			return "0";
		std::string s;
		for (auto& [k, v] : c_) {
			if (!s.empty())
				s += " + ";
			s += "(" + v.get_str() + ")";
			if (k.first)
				s += "t^" + std::to_string(k.first);
			if (k.second)
				s += "u^" + std::to_string(k.second);
		}
		return s;
	}

private:
	void check(const TULaurent& o) const
	{
		if (!(w_ == o.w_))
			throw config_error("TULaurent window mismatch");
	}

	Window w_;
	std::map<Key, Rational> c_;
	bool clip_ = false;
};

inline TULaurent tu_add(const TULaurent& a, const TULaurent& b) { return a + b; }
inline TULaurent tu_mul(const TULaurent& a, const TULaurent& b) { return a * b; }

// Power series in z with an optional second even symbol theta.
struct Series {
	int order = 0;
	std::map<std::pair<int, int>, Rational> c; // (z-exp, theta-exp)

	Rational at(int z, int th = 0) const
	{
		auto it = c.find({z, th});
		return it == c.end() ? Rational(0) : it->second;
	}
	void add(int z, int th, const Rational& v)
	{
		if (z + th > order || sgn(v) == 0)
			return;
		auto& x = c[{z, th}];
		x += v;
		if (sgn(x) == 0)
			c.erase({z, th});
	}
	std::vector<Rational> univariate() const
	{
		std::vector<Rational> r(order + 1);
		for (auto& [k, v] : c)
			if (k.second == 0)
				r[k.first] = v;
		return r;
	}
};

inline Series series_mul(const Series& a, const Series& b)
{
	Series r;
	r.order = std::min(a.order, b.order);
	for (auto& [ka, va] : a.c)
		for (auto& [kb, vb] : b.c)
			r.add(ka.first + kb.first, ka.second + kb.second, va * vb);
	return r;
}

// Reciprocal of a univariate series with nonzero constant term.
inline std::vector<Rational> series_inverse(const std::vector<Rational>& a)
{
	if (a.empty() || sgn(a[0]) == 0)
		throw config_error("series_inverse: constant term vanishes");
	std::vector<Rational> r(a.size());
	r[0] = 1 / a[0];
	for (size_t n = 1; n < a.size(); ++n) {
		Rational s = 0;
		for (size_t k = 1; k <= n; ++k)
			s += a[k] * r[n - k];
		r[n] = -s / a[0];
	}
	return r;
}

inline Series series_expand(const std::string& name, int order)
{
	if (order < 0)
		throw config_error("series order must be >= 0");
	auto uni = [&](const std::vector<Rational>& v) {
		Series s;
		s.order = order;
		for (int i = 0; i <= order; ++i)
			s.add(i, 0, v[i]);
		return s;
	};
	// (e^{z/2} - e^{-z/2})/z = sum_{k even} (1/2)^k / (k+1)! z^k
	std::vector<Rational> sinh(order + 1);
	for (int k = 0; k <= order; k += 2) {
		Rational h = 1;
		for (int i = 0; i < k; ++i)
			h /= 2;
		sinh[k] = h / factorial(k + 1);
	}
	if (name == "EXP") {
		std::vector<Rational> e(order + 1);
		for (int k = 0; k <= order; ++k)
			e[k] = 1 / factorial(k);
		return uni(e);
	}
	if (name == "SINH_RATIO")
		return uni(sinh);
	if (name == "AHAT")
		return uni(series_inverse(sinh));
	if (name == "AHAT_INV_ETHETA_FACTOR") {
		Series s = uni(sinh), e;
		e.order = order;
		for (int k = 0; k <= order; ++k)
			e.add(0, k, Rational((k % 2) ? -1 : 1) / factorial(k));
		return series_mul(s, e);
	}
	throw config_error("unknown series: " + name);
}

} // namespace dqrr
