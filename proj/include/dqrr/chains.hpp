#pragma once

#include "dqrr/algebra.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace dqrr {

inline int parity_sign(long e) { return (e % 2) ? -1 : 1; }

// Linear combination of tensor words (a_0, ..., a_p). Slots with index >=
// reduced_from live in A/k: a word with a unit there is zero.
template <class Alg>
class Chain {
public:
	using Key = typename Alg::Key;
	using Word = std::vector<Key>;

	Alg alg;
	Window window;
	int reduced_from = 1;
	bool clip = false;
	std::map<Word, TULaurent> words;

	Chain() = default;
	Chain(Alg a, Window w, int reduced = 1) : alg(std::move(a)), window(w), reduced_from(reduced) {}

	Chain empty_like() const { return Chain(alg, window, reduced_from); }

	bool degenerate(const Word& w) const
	{
		for (size_t i = reduced_from; i < w.size(); ++i)
			if (alg.is_unit(w[i]))
				return true;
		return false;
	}

	void add(const Word& w, const TULaurent& c)
	{
		if (c.clipped())
			clip = true;
		if (c.is_zero() || degenerate(w))
			return;
		auto it = words.find(w);
		if (it == words.end())
			words.emplace(w, c);
		else {
			it->second += c;
			if (it->second.is_zero())
				words.erase(it);
		}
	}
	void add(const Word& w, const Rational& q, int tpow = 0, int upow = 0)
	{
		TULaurent c(window);
		c.add_term(tpow, upow, q);
		if (c.is_zero() && sgn(q) != 0)
			clip = true;
		add(w, c);
	}
	void add_scaled(const Word& w, const TULaurent& c, int tpow, const Rational& q)
	{
		if (sgn(q) == 0)
			return;
		if (tpow == 0)
			add(w, c * q);
		else
			add(w, c.shifted(tpow, 0) * q);
	}

	Chain& operator+=(const Chain& o)
	{
		for (auto& [w, c] : o.words)
			add(w, c);
		clip = clip || o.clip;
		return *this;
	}
	Chain& operator-=(const Chain& o)
	{
		for (auto& [w, c] : o.words)
			add(w, -c);
		clip = clip || o.clip;
		return *this;
	}
	Chain& operator*=(const TULaurent& s)
	{
		Chain r = empty_like();
		r.clip = clip;
		for (auto& [w, c] : words)
			r.add(w, c * s);
		return *this = r;
	}
	Chain& operator*=(const Rational& q)
	{
		Chain r = empty_like();
		r.clip = clip;
		for (auto& [w, c] : words)
			r.add(w, c * q);
		return *this = r;
	}
	friend Chain operator+(Chain a, const Chain& b) { return a += b; }
	friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
	friend bool operator==(const Chain& a, const Chain& b) { return a.words == b.words; }

	bool is_zero() const { return words.empty(); }

	int eps(const Key& k) const { return alg.degree(k) + 1; }
	int word_degree(const Word& w) const
	{
		int s = -1;
		for (auto& k : w)
			s += eps(k);
		return s;
	}

	nlohmann::json to_json() const
	{
		nlohmann::json ws = nlohmann::json::array();
		int deg = words.empty() ? 0 : word_degree(words.begin()->first);
		for (auto& [w, c] : words) {
			nlohmann::json e = nlohmann::json::array();
			for (auto& k : w)
				e.push_back(alg.key_json(k));
			nlohmann::json terms = nlohmann::json::array();
			for (auto& [k, v] : c.terms())
				terms.push_back({{"t", k.first}, {"u", k.second}, {"num", v.get_num().get_str()}, {"den", v.get_den().get_str()}});
			ws.push_back({{"entries", e}, {"coeff", {{"terms", terms}}}});
		}
		return {{"algebra", alg.name()}, {"degree", deg}, {"words", ws}};
	}
};

namespace detail {

// tau(w) = sign * (a_p, a_0, ..., a_{p-1})
template <class Alg>
std::pair<int, typename Chain<Alg>::Word> rotate(const Chain<Alg>& c, const typename Chain<Alg>::Word& w)
{
	const size_t p = w.size() - 1;
	long s = 0;
	for (size_t k = 0; k < p; ++k)
		s += c.eps(w[k]);
	typename Chain<Alg>::Word r;
	r.reserve(w.size());
	r.push_back(w[p]);
	r.insert(r.end(), w.begin(), w.end() - 1);
	return {parity_sign(long(c.eps(w[p])) * s), r};
}

// all terms of a_i a_{i+1} placed in slot i
template <class Alg>
void merge_into(Chain<Alg>& out, const typename Chain<Alg>::Word& w, size_t i, const typename Alg::Key& a,
                const typename Alg::Key& b, const TULaurent& c, int sign)
{
	std::vector<KTerm<typename Alg::Key>> prod;
	if (out.alg.mul(a, b, prod))
		out.clip = true;
	typename Chain<Alg>::Word nw;
	nw.reserve(w.size() - 1);
	for (auto& t : prod) {
		nw.assign(w.begin(), w.begin() + i);
		nw.push_back(t.key);
		nw.insert(nw.end(), w.begin() + i + 2, w.end());
		out.add_scaled(nw, c, t.tpow, t.c * sign);
	}
}

} // namespace detail

template <class Alg>
Chain<Alg> tau(const Chain<Alg>& c)
{
	Chain<Alg> r = c.empty_like();
	for (auto& [w, k] : c.words) {
		auto [s, rw] = detail::rotate(c, w);
		r.add(rw, k * Rational(s));
	}
	r.clip = r.clip || c.clip;
	return r;
}

template <class Alg>
Chain<Alg> b_prime(const Chain<Alg>& c)
{
	Chain<Alg> r = c.empty_like();
	for (auto& [w, k] : c.words) {
		long s = 0;
		for (size_t i = 0; i + 1 < w.size(); ++i) {
			int sign = parity_sign(s + c.alg.degree(w[i]));
			detail::merge_into(r, w, i, w[i], w[i + 1], k, sign);
			s += c.eps(w[i]);
		}
	}
	r.clip = r.clip || c.clip;
	return r;
}

template <class Alg>
Chain<Alg> hochschild_b(const Chain<Alg>& c)
{
	Chain<Alg> r = b_prime(c);
	for (auto& [w, k] : c.words) {
		if (w.size() < 2)
			continue;
		auto [s, rw] = detail::rotate(c, w);
		detail::merge_into(r, rw, 0, rw[0], rw[1], k, s * parity_sign(c.alg.degree(rw[0])));
	}
	return r;
}

// N = sum_{k=0}^{p} tau^k on words of length p+1
template <class Alg>
Chain<Alg> N_op(const Chain<Alg>& c)
{
	Chain<Alg> r = c.empty_like();
	for (auto& [w, k] : c.words) {
		auto cur = w;
		int s = 1;
		for (size_t j = 0; j < w.size(); ++j) {
			r.add(cur, k * Rational(s));
			auto [s2, nw] = detail::rotate(c, cur);
			s *= s2;
			cur = nw;
		}
	}
	r.clip = r.clip || c.clip;
	return r;
}

template <class Alg>
Chain<Alg> connes_B(const Chain<Alg>& c)
{
	Chain<Alg> n = N_op(c);
	Chain<Alg> r = c.empty_like();
	for (auto& [w, k] : n.words) {
		typename Chain<Alg>::Word nw;
		nw.push_back(c.alg.unit());
		nw.insert(nw.end(), w.begin(), w.end());
		r.add(nw, k);
	}
	r.clip = r.clip || c.clip;
	return r;
}

// delta on slot i with sign -(-1)^{sum_{k<i} eps_k}: the suspension s of each slot
// gives d(s a) = -s(d a). This is the sign for which Br is a chain map for u b + delta.
template <class Alg>
Chain<Alg> dga_delta(const Chain<Alg>& c)
{
	Chain<Alg> r = c.empty_like();
	std::vector<KTerm<typename Alg::Key>> dt;
	for (auto& [w, k] : c.words) {
		long s = 0;
		for (size_t i = 0; i < w.size(); ++i) {
			dt.clear();
			c.alg.delta(w[i], dt);
			for (auto& t : dt) {
				auto nw = w;
				nw[i] = t.key;
				r.add_scaled(nw, k, t.tpow, -t.c * parity_sign(s));
			}
			s += c.eps(w[i]);
		}
	}
	r.clip = r.clip || c.clip;
	return r;
}

// Canonical representative modulo Im(id - tau): minimal rotation, signed.
template <class Alg>
Chain<Alg> lambda_normalize(const Chain<Alg>& c)
{
	Chain<Alg> r = c.empty_like();
	for (auto& [w, k] : c.words) {
		auto best = w;
		int best_s = 1, s = 1;
		bool zero = false;
		auto cur = w;
		for (size_t j = 1; j < w.size(); ++j) {
			auto [s2, nw] = detail::rotate(c, cur);
			s *= s2;
			cur = nw;
			if (cur < best) {
				best = cur;
				best_s = s;
			}
		}
		// check for a sign clash on the minimal rotation
		cur = w;
		s = 1;
		for (size_t j = 0; j < w.size(); ++j) {
			if (cur == best && s != best_s)
				zero = true;
			auto [s2, nw] = detail::rotate(c, cur);
			s *= s2;
			cur = nw;
		}
		if (!zero)
			r.add(best, k * Rational(best_s));
	}
	r.clip = r.clip || c.clip;
	return r;
}

// Shuffle product of words over A and B into A (x) B, letters a (x) 1 and 1 (x) b.
template <class A, class B>
Chain<TensorAlg<A, B>> shuffle_external(const Chain<A>& x, const Chain<B>& y)
{
	using T = TensorAlg<A, B>;
	Chain<T> r(T{x.alg, y.alg}, x.window, std::min(x.reduced_from, y.reduced_from));
	for (auto& [wa, ca] : x.words)
		for (auto& [wb, cb] : y.words) {
			const size_t n = wa.size(), m = wb.size();
			TULaurent c = ca * cb;
			// choose positions of the b-letters
			std::vector<int> pick(n + m, 0);
			std::fill(pick.begin() + n, pick.end(), 1);
			do {
				typename Chain<T>::Word w;
				long sign = 0;
				size_t ia = 0, ib = 0;
				for (size_t pos = 0; pos < n + m; ++pos) {
					if (pick[pos] == 0) {
						w.push_back({wa[ia], y.alg.unit()});
						++ia;
					} else {
						// b-letter moves past the a-letters still to its right in the a-word
						long rest = 0;
						for (size_t k = ia; k < n; ++k)
							rest += x.eps(wa[k]);
						sign += rest * y.eps(wb[ib]);
						w.push_back({x.alg.unit(), wb[ib]});
						++ib;
					}
				}
				r.add(w, c * Rational(parity_sign(sign)));
			} while (std::next_permutation(pick.begin(), pick.end()));
		}
	r.clip = x.clip || y.clip;
	return r;
}

template <class Alg>
bool in_cyclic_kernel(const Chain<Alg>& c)
{
	return (c - tau(c)).is_zero();
}

// (x_1 .. x_p) . 1 = sum_i (-1)^{i(p-1)} 1 (x) x_{i+1} (x) ... (x) x_i
template <class Alg>
Chain<Alg> pairing_on_unit(const Alg& alg, Window w, const std::vector<typename Alg::Key>& x)
{
	Chain<Alg> r(alg, w, 1);
	const size_t p = x.size();
	if (p == 0) {
		r.add({alg.unit()}, Rational(1));
		return r;
	}
	for (size_t i = 0; i < p; ++i) {
		typename Chain<Alg>::Word nw{alg.unit()};
		for (size_t k = 0; k < p; ++k)
			nw.push_back(x[(i + k) % p]);
		r.add(nw, Rational(parity_sign(long(i) * long(p - 1))));
	}
	return r;
}

// Lead component of (x_1..x_p) . (a_0 .. a_N):
//   (1/p!) sum_i (-1)^{i(p-1)} a_0 [x_{i+1},a_1] ... [x_i,a_p] (x) a_{p+1} ... a_N
template <class Alg>
Chain<Alg> pairing_lead(const std::vector<typename Alg::Key>& x, const Chain<Alg>& a)
{
	using Key = typename Alg::Key;
	Chain<Alg> r = a.empty_like();
	const size_t p = x.size();
	const Alg& alg = a.alg;
	using Lin = std::map<Key, TULaurent>;
	auto mul_lin = [&](const Lin& f, const Lin& g, int sg) {
		Lin out;
		std::vector<KTerm<Key>> prod;
		for (auto& [k1, c1] : f)
			for (auto& [k2, c2] : g) {
				prod.clear();
				if (alg.mul(k1, k2, prod))
					r.clip = true;
				for (auto& t : prod) {
					auto v = (c1 * c2).shifted(t.tpow, 0) * (t.c * sg);
					auto [it, fresh] = out.try_emplace(t.key, v);
					if (!fresh)
						it->second += v;
				}
			}
		return out;
	};
	for (auto& [w, c] : a.words) {
		if (w.size() < p + 1)
			continue;
		for (size_t i = 0; i < p; ++i) {
			Lin cur{{w[0], c}};
			for (size_t k = 1; k <= p; ++k) {
				Lin xs{{x[(i + k - 1) % p], TULaurent(a.window, 1)}}, ak{{w[k], TULaurent(a.window, 1)}};
				Lin comm = mul_lin(xs, ak, 1);
				for (auto& [kk, vv] : mul_lin(ak, xs, -1)) {
					auto [it, fresh] = comm.try_emplace(kk, vv);
					if (!fresh)
						it->second += vv;
				}
				cur = mul_lin(cur, comm, 1);
			}
			Rational q = Rational(parity_sign(long(i) * long(p - 1))) / factorial(int(p));
			for (auto& [k0, v] : cur) {
				typename Chain<Alg>::Word nw{k0};
				nw.insert(nw.end(), w.begin() + p + 1, w.end());
				r.add(nw, v * q);
			}
		}
	}
	return r;
}

} // namespace dqrr
