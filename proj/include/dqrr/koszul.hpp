#pragma once

#include "dqrr/chains.hpp"

#include <bit>
#include <map>
#include <numeric>

// Koszul complex K = W (x) Lambda V*, formal de Rham forms, and the maps
// between them and Hochschild chains of W.

namespace dqrr {

using Mask = unsigned;

// sign of inserting index k into the sorted set `mask` from the left
inline int wedge_front_sign(Mask mask, int k) { return parity_sign(std::popcount(mask & ((1u << k) - 1))); }

// f(x,xi) dz_S with TULaurent coefficients; dz ordered like the coordinates.
struct FormalDeRham {
	int d = 1;
	Window window;
	std::map<std::pair<Mono, Mask>, TULaurent> terms;

	FormalDeRham() = default;
	FormalDeRham(int d_, Window w) : d(d_), window(w) {}

	void add(const Mono& m, Mask s, const TULaurent& c)
	{
		if (c.is_zero())
			return;
		auto [it, fresh] = terms.try_emplace({m, s}, c);
		if (!fresh) {
			it->second += c;
			if (it->second.is_zero())
				terms.erase(it);
		}
	}
	FormalDeRham& operator+=(const FormalDeRham& o)
	{
		for (auto& [k, c] : o.terms)
			add(k.first, k.second, c);
		return *this;
	}
	FormalDeRham& operator-=(const FormalDeRham& o)
	{
		for (auto& [k, c] : o.terms)
			add(k.first, k.second, -c);
		return *this;
	}
	friend FormalDeRham operator+(FormalDeRham a, const FormalDeRham& b) { return a += b; }
	friend FormalDeRham operator-(FormalDeRham a, const FormalDeRham& b) { return a -= b; }
	friend bool operator==(const FormalDeRham& a, const FormalDeRham& b) { return a.terms == b.terms; }
	bool is_zero() const { return terms.empty(); }

	FormalDeRham scaled(int tpow, int upow) const
	{
		FormalDeRham r(d, window);
		for (auto& [k, c] : terms)
			r.add(k.first, k.second, c.shifted(tpow, upow));
		return r;
	}
	TULaurent coeff(const Mono& m, Mask s) const
	{
		auto it = terms.find({m, s});
		return it == terms.end() ? TULaurent(window) : it->second;
	}
};

inline FormalDeRham derham_d(const FormalDeRham& w)
{
	FormalDeRham r(w.d, w.window);
	for (auto& [k, c] : w.terms) {
		auto [m, s] = k;
		for (int j = 0; j < 2 * w.d; ++j) {
			if (!m.e[j] || (s >> j & 1u))
				continue;
			Mono dm = m;
			dm.e[j]--;
			r.add(dm, s | (1u << j), c * Rational(m.e[j] * wedge_front_sign(s, j)));
		}
	}
	return r;
}

inline FormalDeRham t_derham_d(const FormalDeRham& w) { return derham_d(w).scaled(1, 0); }
inline FormalDeRham u_derham_d(const FormalDeRham& w) { return derham_d(w).scaled(0, 1); }

// commutative wedge product over O
inline FormalDeRham wedge(const FormalDeRham& a, const FormalDeRham& b)
{
	FormalDeRham r(a.d, a.window);
	for (auto& [ka, ca] : a.terms)
		for (auto& [kb, cb] : b.terms) {
			if (ka.second & kb.second)
				continue;
			int sign = 1;
			for (int j = 0; j < 2 * a.d; ++j)
				if (kb.second >> j & 1u)
					sign *= parity_sign(std::popcount(ka.second & ~((1u << (j + 1)) - 1)));
			Mono m;
			for (int i = 0; i < 2 * a.d; ++i)
				m.e[i] = int8_t(ka.first.e[i] + kb.first.e[i]);
			r.add(m, ka.second | kb.second, (ca * cb) * Rational(sign));
		}
	return r;
}

inline int form_degree(Mask s) { return std::popcount(s); }

// I (resp. J): multiply the degree-i part by t^{i-d} (resp. u^{i-d}); inverse flips the sign.
inline FormalDeRham op_I(const FormalDeRham& w, bool inverse = false)
{
	FormalDeRham r(w.d, w.window);
	for (auto& [k, c] : w.terms) {
		int e = form_degree(k.second) - w.d;
		r.add(k.first, k.second, c.shifted(inverse ? -e : e, 0));
	}
	return r;
}
inline FormalDeRham op_J(const FormalDeRham& w, bool inverse = false)
{
	FormalDeRham r(w.d, w.window);
	for (auto& [k, c] : w.terms) {
		int e = form_degree(k.second) - w.d;
		r.add(k.first, k.second, c.shifted(0, inverse ? -e : e));
	}
	return r;
}

// Elements f (x) v_S of W (x) Lambda^q V*, v_j the coordinate functions.
struct KoszulChain {
	int d = 1, cap = 5;
	Window window;
	std::map<std::pair<Mono, Mask>, TULaurent> terms;

	KoszulChain() = default;
	KoszulChain(int d_, int cap_, Window w) : d(d_), cap(cap_), window(w) {}

	void add(const Mono& m, Mask s, const TULaurent& c)
	{
		if (c.is_zero() || m.degree(d) > cap)
			return;
		auto [it, fresh] = terms.try_emplace({m, s}, c);
		if (!fresh) {
			it->second += c;
			if (it->second.is_zero())
				terms.erase(it);
		}
	}
	KoszulChain& operator+=(const KoszulChain& o)
	{
		for (auto& [k, c] : o.terms)
			add(k.first, k.second, c);
		return *this;
	}
	friend bool operator==(const KoszulChain& a, const KoszulChain& b) { return a.terms == b.terms; }
	bool is_zero() const { return terms.empty(); }
};

// d(f (x) v_1..v_q) = sum_i (-1)^{i-1} [f, v_i] (x) v_1..^v_i..v_q
inline KoszulChain koszul_partial(const KoszulChain& k)
{
	KoszulChain r(k.d, k.cap, k.window);
	for (auto& [key, c] : k.terms) {
		auto [m, s] = key;
		int i = 0;
		for (int j = 0; j < 2 * k.d; ++j) {
			if (!(s >> j & 1u))
				continue;
			Mono v = Mono::var(j);
			auto fv = moyal_monomials(k.d, m, v), vf = moyal_monomials(k.d, v, m);
			for (auto& t : fv)
				r.add(t.m, s & ~(1u << j), c.shifted(t.tpow, 0) * (t.c * parity_sign(i)));
			for (auto& t : vf)
				r.add(t.m, s & ~(1u << j), c.shifted(t.tpow, 0) * (-t.c * parity_sign(i)));
			++i;
		}
	}
	return r;
}

inline std::vector<int> mask_indices(Mask s)
{
	std::vector<int> v;
	for (int j = 0; s >> j; ++j)
		if (s >> j & 1u)
			v.push_back(j);
	return v;
}

// sign of the permutation sorting `idx`; 0 on a repeat
inline int sort_sign(std::vector<int> idx)
{
	int s = 1;
	for (size_t i = 0; i < idx.size(); ++i)
		for (size_t j = i + 1; j < idx.size(); ++j) {
			if (idx[i] == idx[j])
				return 0;
			if (idx[i] > idx[j])
				s = -s;
		}
	return s;
}

// f (x) v_S -> f (x) Alt(v_S), Alt = sum_sigma sgn(sigma) sigma
inline Chain<WAlg> koszul_to_hochschild(const KoszulChain& k)
{
	Chain<WAlg> r(WAlg{k.d, k.cap, false}, k.window, 1);
	for (auto& [key, c] : k.terms) {
		auto idx = mask_indices(key.second);
		std::vector<int> perm(idx.size());
		std::iota(perm.begin(), perm.end(), 0);
		do {
			Chain<WAlg>::Word w{key.first};
			for (int p : perm)
				w.push_back(Mono::var(idx[p]));
			r.add(w, c * Rational(sort_sign(perm)));
		} while (std::next_permutation(perm.begin(), perm.end()));
	}
	return r;
}

namespace detail {

// v in V* acts by contraction with its omega-dual vector: x_j -> -d/dxi_j, xi_j -> d/dx_j.
// Returns i_{v_{j1}} ... i_{v_{jq}} (dz_0 .. dz_{2d-1}), the last index contracted first.
inline std::pair<int, Mask> contract_volume(int d, Mask s)
{
	Mask form = (1u << (2 * d)) - 1;
	int sign = 1;
	auto idx = mask_indices(s);
	for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
		int dual = *it < d ? *it + d : *it - d;
		if (!(form >> dual & 1u))
			return {0, 0};
		sign *= wedge_front_sign(form, dual) * (*it < d ? -1 : 1);
		form &= ~(1u << dual);
	}
	return {sign, form};
}

} // namespace detail

// f (x) v_S -> f i_{v_S}(omega^d), normalized so the full wedge x_1..xi_d maps to 1.
inline FormalDeRham koszul_to_derham(const KoszulChain& k)
{
	FormalDeRham r(k.d, k.window);
	int full = detail::contract_volume(k.d, (1u << (2 * k.d)) - 1).first;
	for (auto& [key, c] : k.terms) {
		auto [sign, form] = detail::contract_volume(k.d, key.second);
		if (!sign)
			continue;
		r.add(key.first, form, c * Rational(sign * full));
	}
	return r;
}

// Project a Hochschild chain over W to K: f (x) a_1..a_q -> f (x) (1/q!) lin(a_1)^...^lin(a_q)
inline KoszulChain koszul_projection(const Chain<WAlg>& c)
{
	const int d = c.alg.d;
	KoszulChain r(d, c.alg.cap, c.window);
	for (auto& [w, k] : c.words) {
		std::vector<int> idx;
		bool linear = true;
		for (size_t i = 1; i < w.size() && linear; ++i) {
			if (w[i].degree(d) != 1) {
				linear = false;
				break;
			}
			int j = 0;
			while (!w[i].e[j])
				++j;
			idx.push_back(j);
		}
		if (!linear)
			continue;
		int s = sort_sign(idx);
		if (!s)
			continue;
		Mask m = 0;
		for (int j : idx)
			m |= 1u << j;
		r.add(w[0], m, k * (Rational(s) / factorial(int(idx.size()))));
	}
	return r;
}

// Degree-0 trace density: J^{-1} I^{-1} (K -> DR) (projection).
inline FormalDeRham trace_density_0(const Chain<WAlg>& c)
{
	return op_J(op_I(koszul_to_derham(koszul_projection(c)), true), true);
}

// f_0 (x) ... (x) f_p -> (1/p!) f_0 df_1 ^ ... ^ df_p
inline FormalDeRham hkr(const Chain<WAlg>& c)
{
	const int d = c.alg.d;
	FormalDeRham r(d, c.window);
	for (auto& [w, k] : c.words) {
		FormalDeRham acc(d, c.window);
		acc.add(w[0], 0, k * (Rational(1) / factorial(int(w.size()) - 1)));
		for (size_t i = 1; i < w.size(); ++i) {
			FormalDeRham f(d, c.window);
			f.add(w[i], 0, TULaurent(c.window, 1));
			acc = wedge(acc, derham_d(f));
		}
		r += acc;
	}
	return r;
}

// Lie derivative of a form along (1/t) ad(h), h quadratic.
inline FormalDeRham lie_derivative(const WeylElement& h, const FormalDeRham& w)
{
	const int d = w.d;
	auto D = WeylDerivation::of(h);
	auto apply_fn = [&](const Mono& m) {
		WeylElement f(d, 64, w.window);
		f.add(m, TULaurent(w.window, 1));
		WeylElement hh(d, 64, w.window);
		for (auto& [mm, cc] : D.generator.terms())
			hh.add(mm, cc);
		return commutator(hh, f).t_shifted(-1);
	};
	FormalDeRham r(d, w.window);
	for (auto& [key, c] : w.terms) {
		auto [m, s] = key;
		auto img = apply_fn(m);
		for (auto& [mm, cc] : img.terms())
			r.add(mm, s, c * cc);
		auto idx = mask_indices(s);
		for (size_t p = 0; p < idx.size(); ++p) {
			// dz_j -> d(X z_j), X z_j linear
			auto lin = apply_fn(Mono::var(idx[p]));
			for (auto& [mm, cc] : lin.terms()) {
				int jn = 0;
				while (!mm.e[jn])
					++jn;
				auto nidx = idx;
				nidx[p] = jn;
				int sg = sort_sign(nidx);
				if (!sg)
					continue;
				Mask ns = 0;
				for (int j : nidx)
					ns |= 1u << j;
				r.add(m, ns, c * cc * Rational(sg));
			}
		}
	}
	return r;
}

// Slotwise action of (1/t) ad(h) on a Hochschild chain over W.
inline Chain<WAlg> lie_derivative(const WeylElement& h, const Chain<WAlg>& c)
{
	Chain<WAlg> r = c.empty_like();
	const int d = c.alg.d;
	auto D = WeylDerivation::of(h);
	for (auto& [w, k] : c.words)
		for (size_t i = 0; i < w.size(); ++i) {
			WeylElement f(d, c.alg.cap, c.window);
			f.add(w[i], TULaurent(c.window, 1));
			WeylElement hh(d, c.alg.cap, c.window);
			for (auto& [mm, cc] : D.generator.terms())
				hh.add(mm, cc);
			auto img = commutator(hh, f).t_shifted(-1);
			for (auto& [mm, cc] : img.terms()) {
				auto nw = w;
				nw[i] = mm;
				r.add(nw, k * cc);
			}
		}
	return r;
}

} // namespace dqrr
