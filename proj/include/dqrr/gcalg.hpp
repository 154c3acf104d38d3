#pragma once

#include "dqrr/scalars.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

// Free graded-commutative algebra over Q on finitely many homogeneous
// generators. Odd generators square to zero. Monomials are exponent vectors
// read in generator order; that order fixes the sign of every basis element.

namespace dqrr {

using GMono = std::vector<uint8_t>;
using GElem = std::map<GMono, Rational>;

struct GCAlg {
	std::vector<int> deg;
	std::vector<std::string> names;

	size_t size() const { return deg.size(); }
	bool odd(size_t i) const { return deg[i] % 2 != 0; }

	int degree(const GMono& m) const
	{
		int s = 0;
		for (size_t i = 0; i < m.size(); ++i)
			s += m[i] * deg[i];
		return s;
	}
	GMono one() const { return GMono(size(), 0); }
	GElem unit() const { return {{one(), Rational(1)}}; }
	GElem gen(size_t i, const Rational& c = 1) const
	{
		GMono m = one();
		m[i] = 1;
		return {{m, c}};
	}
	std::string str(const GMono& m) const
	{
		std::string s;
		for (size_t i = 0; i < m.size(); ++i)
			for (int k = 0; k < m[i]; ++k)
				s += (s.empty() ? "" : "*") + names[i];
		return s.empty() ? "1" : s;
	}
};

inline void gc_add(GElem& a, const GMono& m, const Rational& c)
{
	if (sgn(c) == 0)
		return;
	auto [it, fresh] = a.try_emplace(m, c);
	if (!fresh) {
		it->second += c;
		if (sgn(it->second) == 0)
			a.erase(it);
	}
}

inline void gc_add(GElem& a, const GElem& b, const Rational& s = 1)
{
	for (auto& [m, c] : b)
		gc_add(a, m, c * s);
}

inline GElem gc_scaled(GElem a, const Rational& s)
{
	if (sgn(s) == 0)
		return {};
	for (auto& [m, c] : a)
		c *= s;
	return a;
}

inline GElem gc_sub(GElem a, const GElem& b)
{
	gc_add(a, b, -1);
	return a;
}

// Sign of reordering m1 * m2 into generator order, or 0 if an odd generator repeats.
inline int gc_mono_sign(const GCAlg& g, const GMono& a, const GMono& b)
{
	long swaps = 0;
	long odd_after = 0; // odd generators of a with index > current
	for (size_t i = 0; i < a.size(); ++i)
		if (g.odd(i) && a[i])
			++odd_after;
	for (size_t i = 0; i < a.size(); ++i) {
		if (g.odd(i) && a[i])
			--odd_after;
		if (g.odd(i) && b[i]) {
			if (a[i])
				return 0;
			swaps += odd_after;
		}
	}
	return swaps % 2 ? -1 : 1;
}

inline GElem gc_mul(const GCAlg& g, const GElem& x, const GElem& y)
{
	GElem r;
	GMono m(g.size());
	for (auto& [a, ca] : x)
		for (auto& [b, cb] : y) {
			int s = gc_mono_sign(g, a, b);
			if (!s)
				continue;
			for (size_t i = 0; i < m.size(); ++i)
				m[i] = a[i] + b[i];
			Rational v = ca * cb;
			if (s < 0)
				v = -v;
			gc_add(r, m, v);
		}
	return r;
}

inline int gc_degree_of(const GCAlg& g, const GElem& x)
{
	return x.empty() ? 0 : g.degree(x.begin()->first);
}

inline bool gc_homogeneous(const GCAlg& g, const GElem& x)
{
	for (auto& [m, c] : x)
		if (g.degree(m) != gc_degree_of(g, x))
			return false;
	return true;
}

// Left derivation of degree p determined by its values on generators.
inline GElem gc_derivation(const GCAlg& g, int p, const std::vector<GElem>& img, const GElem& x)
{
	GElem r;
	for (auto& [m, c] : x) {
		int before = 0;
		GMono prefix = g.one();
		for (size_t i = 0; i < m.size(); ++i) {
			if (!m[i] || img[i].empty()) {
				before += m[i] * g.deg[i];
				prefix[i] = m[i];
				continue;
			}
			// prefix * (k g_i^{k-1}) * D(g_i) * suffix
			GMono rest = g.one();
			rest[i] = m[i] - 1;
			GMono suffix = g.one();
			for (size_t j = i + 1; j < m.size(); ++j)
				suffix[j] = m[j];
			GElem left = {{prefix, Rational(1)}};
			GElem mid = gc_mul(g, {{rest, Rational(m[i])}}, img[i]);
			GElem term = gc_mul(g, gc_mul(g, left, mid), {{suffix, Rational(1)}});
			gc_add(r, term, (p * before) % 2 ? Rational(-c) : c);
			before += m[i] * g.deg[i];
			prefix[i] = m[i];
		}
	}
	return r;
}

// Left partial derivative d/dg_i, a derivation of degree -deg g_i.
inline GElem gc_partial(const GCAlg& g, size_t i, const GElem& x)
{
	GElem r;
	for (auto& [m, c] : x) {
		if (!m[i])
			continue;
		int before = 0;
		for (size_t j = 0; j < i; ++j)
			before += m[j] * g.deg[j];
		GMono n = m;
		n[i] -= 1;
		Rational v = c * int(m[i]);
		gc_add(r, n, (g.deg[i] * before) % 2 ? Rational(-v) : v);
	}
	return r;
}

// Algebra map sending generator i to img[i].
inline GElem gc_substitute(const GCAlg& src, const GCAlg& dst, const std::vector<GElem>& img, const GElem& x)
{
	GElem r;
	for (auto& [m, c] : x) {
		GElem term = dst.unit();
		for (size_t i = 0; i < m.size(); ++i)
			for (int k = 0; k < m[i]; ++k)
				term = gc_mul(dst, term, img[i]);
		gc_add(r, term, c);
	}
	return r;
}

// All monomials of total degree n; generators must have positive degree.
inline std::vector<GMono> gc_monomials(const GCAlg& g, int n)
{
	for (int d : g.deg)
		if (d <= 0)
			throw config_error("gc_monomials: generator of nonpositive degree");
	std::vector<GMono> out;
	GMono m = g.one();
	std::function<void(size_t, int)> rec = [&](size_t i, int left) {
		if (i == g.size()) {
			if (left == 0)
				out.push_back(m);
			return;
		}
		int maxk = g.odd(i) ? 1 : left / g.deg[i];
		for (int k = 0; k <= maxk && k * g.deg[i] <= left; ++k) {
			m[i] = uint8_t(k);
			rec(i + 1, left - k * g.deg[i]);
		}
		m[i] = 0;
	};
	rec(0, n);
	return out;
}

} // namespace dqrr
