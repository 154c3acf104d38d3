#pragma once

#include "dqrr/brodzki.hpp"
#include "dqrr/koszul.hpp"

#include <map>

// The fundamental cyclic class: U_0 for general d, the d = 1 cocycle in the
// complex extended by the even symbols c1 and theta, and its Br image.

namespace dqrr {

using WEChain = Chain<WEtaAlg>;

inline Window fundamental_window(int M, int d = 1)
{
	return Window{-(M + d + 3), M + d + 3, -(2 * M + d + 4), M + d + 3};
}

// Darboux order used for U_0.
inline std::vector<int> darboux_order(int d)
{
	std::vector<int> v;
	for (int i = 0; i < d; ++i) {
		if (conv::kFundamentalXiFirst) {
			v.push_back(d + i);
			v.push_back(i);
		} else
			v.push_back(i);
	}
	if (!conv::kFundamentalXiFirst)
		for (int i = 0; i < d; ++i)
			v.push_back(d + i);
	return v;
}

// U_0 = u^{-d} / (2d t^d) Alt(v_1 .. v_2d) in the reduced lambda complex of W_d
inline Chain<WAlg> u0(int d, Window w, int cap = 4)
{
	Chain<WAlg> c(WAlg{d, cap, false}, w, 0);
	auto v = darboux_order(d);
	std::vector<int> perm(2 * d);
	std::iota(perm.begin(), perm.end(), 0);
	do {
		Chain<WAlg>::Word word;
		for (int p : perm)
			word.push_back(Mono::var(v[p]));
		c.add(word, Rational(sort_sign(perm), 2 * d), -d, -d);
	} while (std::next_permutation(perm.begin(), perm.end()));
	return lambda_normalize(c);
}

// Polynomial in (c1, theta) with chain coefficients over W_1[eta].
struct ExtendedChain {
	using Exp = std::pair<int, int>; // (c1, theta)
	WEtaAlg alg;
	Window window;
	std::map<Exp, WEChain> parts;

	ExtendedChain() = default;
	ExtendedChain(WEtaAlg a, Window w) : alg(a), window(w) {}

	WEChain& at(Exp e)
	{
		auto it = parts.find(e);
		if (it == parts.end())
			it = parts.emplace(e, WEChain(alg, window, 0)).first;
		return it->second;
	}
	WEChain get(Exp e) const
	{
		auto it = parts.find(e);
		return it == parts.end() ? WEChain(alg, window, 0) : it->second;
	}
	void prune()
	{
		for (auto it = parts.begin(); it != parts.end();)
			it = it->second.is_zero() ? parts.erase(it) : std::next(it);
	}
	ExtendedChain& operator+=(const ExtendedChain& o)
	{
		for (auto& [e, c] : o.parts)
			at(e) += c;
		prune();
		return *this;
	}
	ExtendedChain& operator-=(const ExtendedChain& o)
	{
		for (auto& [e, c] : o.parts)
			at(e) -= c;
		prune();
		return *this;
	}
	bool is_zero() const
	{
		for (auto& [e, c] : parts)
			if (!c.is_zero())
				return false;
		return true;
	}
	bool clipped() const
	{
		for (auto& [e, c] : parts)
			if (c.clip)
				return true;
		return false;
	}
};

inline ExtendedChain lambda_normalize(const ExtendedChain& c)
{
	ExtendedChain r(c.alg, c.window);
	for (auto& [e, ch] : c.parts)
		r.at(e) = lambda_normalize(ch);
	r.prune();
	return r;
}

// x * d = x * xi / t as an element of W_1[eta] (eta-exponent `eta`)
inline std::vector<std::pair<WEtaAlg::Key, TULaurent>> x_star_partial(const WEtaAlg& alg, Window w, int eta = 0)
{
	std::vector<std::pair<WEtaAlg::Key, TULaurent>> r;
	for (auto& t : moyal_monomials(1, Mono::var(0), Mono::var(1))) {
		TULaurent c(w);
		c.add_term(t.tpow - 1, 0, t.c);
		r.push_back({{t.m, eta}, c});
	}
	(void)alg;
	return r;
}

// iota_Phi(a_0..a_p) = (u^{-1}/t) sum_i (-1)^{sum_{k<=i} eps_k (deg Phi + 1)} a_0..a_i Phi a_{i+1}..a_p
inline WEChain iota_phi(const std::vector<std::pair<WEtaAlg::Key, TULaurent>>& phi, const WEChain& c)
{
	WEChain r = c.empty_like();
	for (auto& [w, k] : c.words)
		for (auto& [pk, pc] : phi) {
			long ephi = c.alg.degree(pk) + 1;
			long s = 0;
			TULaurent base = (k * pc).shifted(-1, -1);
			for (size_t i = 0; i < w.size(); ++i) {
				s += c.eps(w[i]);
				auto nw = w;
				nw.insert(nw.begin() + i + 1, pk);
				r.add(nw, base * Rational(parity_sign(s * ephi)));
			}
		}
	r.clip = r.clip || c.clip;
	return r;
}

// The contraction dual to c1 inserts Phi = -x xi, the split sp(2) element
// (x * xi minus its central part t/2), with the overall sign that makes the
// extended differential square to zero. Constants die in the reduced complex,
// so on eta-free chains this agrees with Phi = -(x * xi).
inline std::vector<std::pair<WEtaAlg::Key, TULaurent>> c1_insertion(const WEtaAlg&, Window w, int eta = 0)
{
	Mono m;
	m.e[0] = m.e[1] = 1;
	return {{{m, eta}, TULaurent(w, -1)}};
}

inline WEChain iota_x_partial(const WEChain& c) { return iota_phi(c1_insertion(c.alg, c.window), c); }

// d/d eta + u b + c1 iota_{x*d}, on lambda-normalized representatives
inline ExtendedChain extended_differential(const ExtendedChain& c)
{
	ExtendedChain r(c.alg, c.window);
	TULaurent u(c.window, 1, 0, 1);
	for (auto& [e, ch] : c.parts) {
		WEChain part = dga_delta(ch);
		WEChain ub = hochschild_b(ch);
		ub *= u;
		part += ub;
		r.at(e) += part;
		r.at({e.first + 1, e.second}) += iota_x_partial(ch);
	}
	return lambda_normalize(r);
}

// Slotwise (1/t) ad(Phi), Phi = x * d, on chains over W_1[eta].
inline WEChain lie_x_partial(const WEChain& c)
{
	WEChain r = c.empty_like();
	auto phi = x_star_partial(c.alg, c.window);
	std::vector<KTerm<WEtaAlg::Key>> prod;
	for (auto& [w, k] : c.words)
		for (size_t i = 0; i < w.size(); ++i)
			for (auto& [pk, pc] : phi) {
				for (int side = 0; side < 2; ++side) {
					prod.clear();
					if (side == 0)
						c.alg.mul(pk, w[i], prod);
					else
						c.alg.mul(w[i], pk, prod);
					for (auto& t : prod) {
						auto nw = w;
						nw[i] = t.key;
						r.add(nw, (k * pc).shifted(t.tpow - 1, 0) * (side == 0 ? t.c : -t.c));
					}
				}
			}
	return r;
}

// U = sum_{m=1}^M u^{1-2m}/m (d (x) x)^{(x) m} c1^{m-1}, d = xi / t
inline ExtendedChain u_d1(int M, int cap = 6)
{
	Window w = fundamental_window(M);
	ExtendedChain U(WEtaAlg{1, cap}, w);
	for (int m = 1; m <= M; ++m) {
		WEChain::Word word;
		for (int i = 0; i < m; ++i) {
			word.push_back({Mono::var(1), 0});
			word.push_back({Mono::var(0), 0});
		}
		U.at({m - 1, 0}).add(word, Rational(1, m), -m, 1 - 2 * m);
	}
	return lambda_normalize(U);
}

// Br applied coefficientwise in (c1, theta)
inline std::map<ExtendedChain::Exp, KChain> br_extended(const ExtendedChain& c)
{
	std::map<ExtendedChain::Exp, KChain> r;
	for (auto& [e, ch] : c.parts) {
		KChain k = Br(ch);
		if (!k.is_zero() || k.clip)
			r[e] = k;
	}
	return r;
}

// eta^[m] = exp(c1 iota_{(x*d) eta} + theta iota_{t eta}) eta^(m), truncated at total symbol degree L
inline ExtendedChain eta_bracket(int m, int L, Window w, int cap = 6)
{
	WEtaAlg alg{1, cap};
	ExtendedChain cur(alg, w);
	WEChain::Word word(m, {Mono{}, 1});
	cur.at({0, 0}).add(word, factorial(m - 1));
	auto phi_c = c1_insertion(alg, w, 1);
	std::vector<std::pair<WEtaAlg::Key, TULaurent>> phi_t{{{Mono{}, 1}, TULaurent(w, 1, 1, 0)}};
	ExtendedChain total = cur;
	for (int p = 1; p <= L; ++p) {
		ExtendedChain next(alg, w);
		for (auto& [e, ch] : cur.parts) {
			next.at({e.first + 1, e.second}) += iota_phi(phi_c, ch);
			next.at({e.first, e.second + 1}) += iota_phi(phi_t, ch);
		}
		for (auto& [e, ch] : next.parts)
			ch *= Rational(1, p);
		next.prune();
		total += next;
		cur = next;
	}
	return lambda_normalize(total);
}

// (U . 1)_0: pairing_on_unit applied to the words of a reduced lambda chain
inline Chain<WAlg> pairing_unit_lead(const Chain<WAlg>& U)
{
	Chain<WAlg> r(U.alg, U.window, 1);
	for (auto& [w, k] : U.words) {
		auto p = pairing_on_unit(U.alg, U.window, w);
		p *= k;
		r += p;
	}
	return r;
}

// Lead (c1-free, eta-free) words of an extended chain as a chain over W_1.
inline Chain<WAlg> lead_part(const ExtendedChain& U)
{
	Chain<WAlg> r(WAlg{1, U.alg.cap, false}, U.window, 0);
	for (auto& [w, k] : U.get({0, 0}).words) {
		bool plain = true;
		Chain<WAlg>::Word nw;
		for (auto& key : w) {
			plain = plain && key.second == 0;
			nw.push_back(key.first);
		}
		if (plain)
			r.add(nw, k);
	}
	return r;
}

// d-fold external product of a d = 1 lambda chain, via N and the shuffle product.
inline Chain<WAlg> cross_assemble(const Chain<WAlg>& u1, int d)
{
	if (d == 1)
		return lambda_normalize(u1);
	Chain<WAlg> acc = N_op(u1);
	int dacc = 1;
	for (int k = 1; k < d; ++k) {
		auto prod = shuffle_external(acc, N_op(u1));
		Chain<WAlg> next(WAlg{dacc + 1, u1.alg.cap * (dacc + 1), false}, u1.window, 0);
		for (auto& [w, c] : prod.words) {
			Chain<WAlg>::Word nw;
			for (auto& [a, b] : w) {
				Mono m;
				for (int i = 0; i < dacc; ++i) {
					m.e[i] = a.e[i];
					m.e[dacc + 1 + i] = a.e[dacc + i];
				}
				m.e[dacc] = b.e[0];
				m.e[2 * dacc + 1] = b.e[1];
				nw.push_back(m);
			}
			next.add(nw, c);
		}
		acc = next;
		++dacc;
	}
	Chain<WAlg> r = acc.empty_like();
	for (auto& [w, c] : acc.words)
		r.add(w, c * Rational(1, int(w.size())));
	return lambda_normalize(r);
}

} // namespace dqrr

namespace dqrr {

using BrTable = std::map<ExtendedChain::Exp, KChain>;

// Series side of Br(U): sum_m u^{1-m} 1^(m) [SINH_RATIO(c1)]_{2m-2}, m <= M.
inline BrTable br_u_series_side(int M)
{
	Window w = fundamental_window(M);
	Series s = series_expand("SINH_RATIO", M);
	BrTable r;
	for (int m = 1; m <= M; ++m) {
		Rational c = s.at(m - 1);
		if (sgn(c) == 0)
			continue;
		KChain k(w);
		k.add(m, TULaurent(w, c, 0, 1 - m));
		r[{m - 1, 0}] = k;
	}
	return r;
}

// sum_{m<M} (SINH_RATIO(c1) e^{-theta})_{2m} u^{-m} Br(eta^[m+1]), symbols of total degree < M
inline BrTable br_eta_combination(int M)
{
	Window w = fundamental_window(M);
	Series sinh = series_expand("SINH_RATIO", M);
	BrTable r;
	for (int m = 0; m < M; ++m) {
		BrTable e = br_extended(eta_bracket(m + 1, M - 1, w));
		for (int a = 0; a <= m; ++a) {
			int b = m - a;
			Rational coef = sinh.at(a) / factorial(b);
			if (b % 2)
				coef = -coef;
			if (sgn(coef) == 0)
				continue;
			for (auto& [ex, kc] : e) {
				ExtendedChain::Exp key{ex.first + a, ex.second + b};
				if (key.first + key.second >= M)
					continue;
				auto [it, fresh] = r.try_emplace(key, KChain(w));
				for (auto& [n, v] : kc.c)
					it->second.add(n, v.shifted(0, -m) * coef);
			}
		}
	}
	for (auto it = r.begin(); it != r.end();)
		it = it->second.is_zero() ? r.erase(it) : std::next(it);
	return r;
}

// Reads a_k off Br(U) at c1^k u^{-k} 1^(k+1), k < M, and returns the reciprocal series.
inline std::vector<Rational> ahat_from_br(const BrTable& brU, int M)
{
	std::vector<Rational> a(M);
	for (int k = 0; k < M; ++k) {
		auto it = brU.find({k, 0});
		if (it == brU.end())
			continue;
		TULaurent v = it->second.at(k + 1);
		auto t = v.terms().find({0, -k});
		if (t != v.terms().end())
			a[k] = t->second;
	}
	return series_inverse(a);
}

} // namespace dqrr
