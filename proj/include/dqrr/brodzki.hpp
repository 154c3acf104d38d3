#pragma once

#include "dqrr/chains.hpp"

#include <map>

// Connecting morphism from the reduced cyclic complex to C^lambda(k)[1].
// j is the constant-term functional: j(key) = 1 on the unit, 0 otherwise.

namespace dqrr {

// sum_k c_k 1^(k), 1^(k) = (k-1)! k! 1^{(x)2k-1}
struct KChain {
	Window window;
	std::map<int, TULaurent> c;
	bool clip = false;

	explicit KChain(Window w = {}) : window(w) {}
	void add(int k, const TULaurent& v)
	{
		clip = clip || v.clipped();
		if (v.is_zero())
			return;
		auto [it, fresh] = c.try_emplace(k, v);
		if (!fresh) {
			it->second += v;
			if (it->second.is_zero())
				c.erase(it);
		}
	}
	TULaurent at(int k) const
	{
		auto it = c.find(k);
		return it == c.end() ? TULaurent(window) : it->second;
	}
	KChain& operator+=(const KChain& o)
	{
		for (auto& [k, v] : o.c)
			add(k, v);
		clip = clip || o.clip;
		return *this;
	}
	KChain& operator-=(const KChain& o)
	{
		for (auto& [k, v] : o.c)
			add(k, -v);
		clip = clip || o.clip;
		return *this;
	}
	friend bool operator==(const KChain& a, const KChain& b) { return a.c == b.c; }
	bool is_zero() const { return c.empty(); }
};

namespace detail {

template <class Alg>
TULaurent j_of_product(const Alg& alg, const typename Alg::Key& a, const typename Alg::Key& b, Window w)
{
	std::vector<KTerm<typename Alg::Key>> prod;
	alg.mul(a, b, prod);
	TULaurent r(w);
	for (auto& t : prod)
		if (alg.is_unit(t.key))
			r.add_term(t.tpow, 0, t.c);
	return r;
}

template <class Alg>
TULaurent j_of_delta(const Alg& alg, const typename Alg::Key& a, Window w)
{
	std::vector<KTerm<typename Alg::Key>> dt;
	alg.delta(a, dt);
	TULaurent r(w);
	for (auto& t : dt)
		if (alg.is_unit(t.key))
			r.add_term(t.tpow, 0, t.c);
	return r;
}

inline TULaurent j_unit(bool unit, Window w) { return unit ? TULaurent(w, 1) : TULaurent(w); }

} // namespace detail

// rho(a) = j(delta a); rho(a_1, a_2) = u j(a_1) j(a_2) - j(a_1 a_2); zero on longer words
template <class Alg>
TULaurent rho(const Alg& alg, const std::vector<typename Alg::Key>& w, Window win)
{
	if (w.size() == 1)
		return detail::j_of_delta(alg, w[0], win);
	if (w.size() == 2) {
		TULaurent jj = detail::j_unit(alg.is_unit(w[0]), win) * detail::j_unit(alg.is_unit(w[1]), win);
		return jj.shifted(0, 1) - detail::j_of_product(alg, w[0], w[1], win);
	}
	return TULaurent(win);
}

// Sum over cuts of a linear word into blocks of size 1 and 2. Inside br the
// size-2 block carries one power of u: u (j j - j(a a')).
template <class Alg>
TULaurent block_sum(const Alg& alg, const std::vector<typename Alg::Key>& w, Window win)
{
	const size_t n = w.size();
	std::vector<TULaurent> f(n + 1, TULaurent(win));
	f[n] = TULaurent(win, 1);
	for (size_t pos = n; pos-- > 0;) {
		TULaurent acc(win);
		TULaurent r1 = detail::j_of_delta(alg, w[pos], win);
		if (!r1.is_zero() && !f[pos + 1].is_zero())
			acc += r1 * f[pos + 1];
		if (pos + 2 <= n && !f[pos + 2].is_zero()) {
			TULaurent jj = detail::j_unit(alg.is_unit(w[pos]), win) * detail::j_unit(alg.is_unit(w[pos + 1]), win);
			TULaurent r2 = (jj - detail::j_of_product(alg, w[pos], w[pos + 1], win)).shifted(0, 1);
			if (!r2.is_zero())
				acc += r2 * f[pos + 2];
		}
		if (f[pos + 1].clipped() || (pos + 2 <= n && f[pos + 2].clipped()))
			acc.mark_clipped();
		f[pos] = acc;
	}
	return f[0];
}

// br_{2n+1}(a_0..a_p) = 1/(n+1)! sum_i (-1)^{e_<i e_>=i} (rho x .. x rho)(a_i..a_{i-1}); 0 in even degree
template <class Alg>
TULaurent br(const Chain<Alg>& c)
{
	TULaurent total(c.window);
	for (auto& [w, k] : c.words) {
		int deg = c.word_degree(w);
		if (deg % 2 == 0)
			continue;
		int n = (deg - 1) / 2;
		TULaurent s(c.window);
		std::vector<long> eps(w.size());
		long all = 0;
		for (size_t i = 0; i < w.size(); ++i)
			all += eps[i] = c.eps(w[i]);
		long before = 0;
		for (size_t i = 0; i < w.size(); ++i) {
			std::vector<typename Alg::Key> rw(w.begin() + i, w.end());
			rw.insert(rw.end(), w.begin(), w.begin() + i);
			TULaurent v = block_sum(c.alg, rw, c.window);
			if (!v.is_zero())
				s += v * Rational(parity_sign(before * (all - before)));
			else if (v.clipped())
				s.mark_clipped();
			before += eps[i];
		}
		total += (s * k) * (Rational(1) / factorial(n + conv::kBrFactorialShift));
	}
	return total;
}

// Br = br_{2n+1} . 1^(n+1), collected per word degree
template <class Alg>
KChain Br(const Chain<Alg>& c)
{
	std::map<int, Chain<Alg>> by_degree;
	for (auto& [w, k] : c.words) {
		int deg = c.word_degree(w);
		if (deg % 2 == 0)
			continue;
		auto [it, fresh] = by_degree.try_emplace(deg, c.empty_like());
		it->second.add(w, k);
	}
	KChain r(c.window);
	for (auto& [deg, part] : by_degree)
		r.add((deg - 1) / 2 + conv::kBrFactorialShift, br(part));
	return r;
}

// eta^(n+1) = n! eta^{(x) n+1} over k[eta], deg eta = +1
inline Chain<EtaAlg> eta_power(int n, Window w = {})
{
	Chain<EtaAlg> c(EtaAlg{1}, w, 0);
	c.add(std::vector<int>(n + 1, 1), factorial(n));
	return c;
}

// 1^(n+1) = n! (n+1)! 1^{(x) 2n+1}, as a plain word over k
inline Chain<EtaAlg> one_power(int n, Window w = {})
{
	Chain<EtaAlg> c(EtaAlg{1}, w, 1000);
	c.add(std::vector<int>(2 * n + 1, 0), factorial(n) * factorial(n + 1));
	return c;
}

} // namespace dqrr
