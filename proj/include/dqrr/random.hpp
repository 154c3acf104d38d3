#pragma once

#include "dqrr/chains.hpp"
#include "dqrr/fedosov.hpp"
#include "dqrr/koszul.hpp"
#include "dqrr/rng.hpp"

#include <vector>

// Sparse random elements. Weyl words keep the total degree of all entries
// within the cap so that no product in b, B or the Moyal checks is clipped.

namespace dqrr {

inline Mono random_mono(Rng& r, int d, int max_deg, bool nonunit = false)
{
	for (;;) {
		Mono m;
		int deg = r.uniform(nonunit ? 1 : 0, max_deg);
		for (int k = 0; k < deg; ++k)
			m.e[r.uniform(0, 2 * d - 1)]++;
		if (!nonunit || !m.is_one())
			return m;
	}
}

inline WeylElement random_weyl(Rng& r, int d, int cap, Window w, int max_deg, int terms = 3)
{
	WeylElement f(d, cap, w);
	for (int i = 0; i < terms; ++i)
		f.add(random_mono(r, d, max_deg), r.uniform(0, 1), r.small_rational());
	return f;
}

namespace detail {

template <class Alg>
struct KeyDraw;

template <>
struct KeyDraw<WAlg> {
	// degree budget is shared by the whole word
	static Mono draw(Rng& r, const WAlg& a, int& budget, bool nonunit)
	{
		int deg = std::min(budget, r.uniform(nonunit ? 1 : 0, 2));
		if (nonunit && deg == 0)
			deg = 1;
		Mono m;
		for (int k = 0; k < deg; ++k)
			m.e[r.uniform(0, 2 * a.d - 1)]++;
		budget -= deg;
		return m;
	}
};

template <>
struct KeyDraw<EtaAlg> {
	static int draw(Rng& r, const EtaAlg&, int&, bool nonunit) { return nonunit ? 1 : r.uniform(0, 1); }
};

template <>
struct KeyDraw<MatAlg> {
	static int draw(Rng& r, const MatAlg&, int&, bool nonunit) { return r.uniform(nonunit ? 1 : 0, 3); }
};

template <>
struct KeyDraw<WEtaAlg> {
	static WEtaAlg::Key draw(Rng& r, const WEtaAlg& a, int& budget, bool nonunit)
	{
		int e = r.uniform(0, 1);
		WAlg w{a.d, a.cap, false};
		Mono m = KeyDraw<WAlg>::draw(r, w, budget, nonunit && e == 0);
		return {m, e};
	}
};

} // namespace detail

// Random chain of `terms` words with lengths 1..max_len; reduced slots avoid the unit
// when `reduced_from` says so.
template <class Alg>
Chain<Alg> random_chain(Rng& r, const Alg& alg, Window w, int max_len, int terms, int reduced_from = 1,
                        int budget = 1 << 20)
{
	Chain<Alg> c(alg, w, reduced_from);
	for (int i = 0; i < terms; ++i) {
		int len = r.uniform(1, max_len);
		int b = budget;
		typename Chain<Alg>::Word word;
		for (int k = 0; k < len; ++k)
			word.push_back(detail::KeyDraw<Alg>::draw(r, alg, b, k >= reduced_from));
		c.add(word, r.small_rational(), r.uniform(0, 1), 0);
	}
	return c;
}

// Random chain of a single homological degree.
template <class Alg>
Chain<Alg> random_homogeneous_chain(Rng& r, const Alg& alg, Window w, int max_len, int terms, int reduced_from = 1,
                                    int budget = 1 << 20)
{
	Chain<Alg> c = random_chain(r, alg, w, max_len, terms, reduced_from, budget);
	if (c.is_zero())
		return c;
	int deg = c.word_degree(c.words.begin()->first);
	Chain<Alg> out = c.empty_like();
	for (auto& [word, k] : c.words)
		if (c.word_degree(word) == deg)
			out.add(word, k);
	return out;
}

inline KoszulChain random_koszul(Rng& r, int d, int cap, Window w, int terms = 3)
{
	KoszulChain k(d, cap, w);
	for (int i = 0; i < terms; ++i) {
		Mask s = Mask(r.uniform(0, (1 << (2 * d)) - 1));
		k.add(random_mono(r, d, std::max(0, cap - std::popcount(s))), s, TULaurent(w, r.small_rational(), r.uniform(0, 1)));
	}
	return k;
}

inline FormalDeRham random_derham(Rng& r, int d, Window w, int terms = 3)
{
	FormalDeRham f(d, w);
	for (int i = 0; i < terms; ++i)
		f.add(random_mono(r, d, 3), Mask(r.uniform(0, (1 << (2 * d)) - 1)), TULaurent(w, r.small_rational()));
	return f;
}

inline FormalForm random_formal_form(Rng& r, int d, int cap, int q, int terms = 4)
{
	FormalForm f(d, cap);
	for (int i = 0; i < terms; ++i) {
		uint8_t mask = 0;
		while (std::popcount(mask) < q)
			mask |= uint8_t(1u << r.uniform(0, 2 * d - 1));
		FKey k{mask, random_mono(r, d, 2), random_mono(r, d, cap), 0};
		int room = (cap - k.y.degree(d)) / 2;
		k.tpow = room > 0 ? r.uniform(0, room) : 0;
		f.add(k, r.small_rational());
	}
	return f;
}

} // namespace dqrr
