#pragma once

#include "dqrr/conventions.hpp"
#include "dqrr/scalars.hpp"

#include <array>
#include <climits>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <vector>

namespace dqrr {

// Exponent vector over (x_1..x_d, xi_1..xi_d); d <= 4.
struct Mono {
	std::array<int8_t, 8> e{};

	int degree(int d) const
	{
		int s = 0;
		for (int i = 0; i < 2 * d; ++i)
			s += e[i];
		return s;
	}
	bool is_one() const
	{
		for (auto v : e)
			if (v)
				return false;
		return true;
	}
	static Mono var(int i)
	{
		Mono m;
		m.e[i] = 1;
		return m;
	}
	auto operator<=>(const Mono&) const = default;
};

struct MonoHash {
	size_t operator()(const Mono& m) const
	{
		uint64_t h;
		static_assert(sizeof(m.e) == sizeof(h));
		std::memcpy(&h, m.e.data(), 8);
		return std::hash<uint64_t>()(h * 0x9e3779b97f4a7c15ULL);
	}
};

struct MonoTerm {
	Mono m;
	int tpow;
	Rational c;
};

namespace detail {

inline Rational falling(int n, int k)
{
	Rational r = 1;
	for (int i = 0; i < k; ++i)
		r *= n - i;
	return r;
}

} // namespace detail

// Moyal product of two monomials, no truncation.
//   f*g = sum_{a,b} (s t/2)^{|a|+|b|} (-1)^{|b|} / (a! b!) (D_x^a D_xi^b f)(D_xi^a D_x^b g)
inline std::vector<MonoTerm> moyal_monomials(int d, const Mono& f, const Mono& g)
{
	std::vector<MonoTerm> out;
	std::vector<int> a(d), b(d);
	std::function<void(int)> rec_a, rec_b;
	rec_b = [&](int i) {
		if (i == d) {
			Mono m;
			Rational c = 1;
			int n = 0, nb = 0;
			for (int k = 0; k < d; ++k) {
				// f loses x^a, xi^b ; g loses xi^a, x^b
				int fx = f.e[k], fxi = f.e[d + k], gx = g.e[k], gxi = g.e[d + k];
				if (a[k] > fx || b[k] > fxi || a[k] > gxi || b[k] > gx)
					return;
				c *= detail::falling(fx, a[k]) * detail::falling(fxi, b[k]) * detail::falling(gxi, a[k]) *
				     detail::falling(gx, b[k]);
				c /= factorial(a[k]) * factorial(b[k]);
				m.e[k] = int8_t(fx - a[k] + gx - b[k]);
				m.e[d + k] = int8_t(fxi - b[k] + gxi - a[k]);
				n += a[k] + b[k];
				nb += b[k];
			}
			for (int k = 0; k < n; ++k)
				c /= 2;
			if ((nb % 2) != 0)
				c = -c;
			if (conv::kMoyalSign < 0 && (n % 2) != 0)
				c = -c;
			out.push_back({m, n, c});
			return;
		}
		for (int k = 0; k <= std::min<int>(f.e[d + i], g.e[i]); ++k) {
			b[i] = k;
			rec_b(i + 1);
		}
	};
	rec_a = [&](int i) {
		if (i == d) {
			rec_b(0);
			return;
		}
		for (int k = 0; k <= std::min<int>(f.e[i], g.e[d + i]); ++k) {
			a[i] = k;
			rec_a(i + 1);
		}
	};
	rec_a(0);
	return out;
}

inline std::vector<MonoTerm> commutative_monomials(int d, const Mono& f, const Mono& g)
{
	Mono m;
	for (int i = 0; i < 2 * d; ++i)
		m.e[i] = int8_t(f.e[i] + g.e[i]);
	return {{m, 0, Rational(1)}};
}

inline constexpr int kZeroFiltration = INT_MAX;

class WeylElement {
public:
	WeylElement() = default;
	WeylElement(int d, int cap, Window w) : d_(d), cap_(cap), w_(w)
	{
		if (d < 1 || d > 4)
			throw config_error("WeylElement: d out of range");
	}

	static WeylElement constant(int d, int cap, Window w, const TULaurent& c)
	{
		WeylElement r(d, cap, w);
		r.add(Mono{}, c);
		return r;
	}
	static WeylElement variable(int d, int cap, Window w, int i, const Rational& c = 1)
	{
		WeylElement r(d, cap, w);
		r.add(Mono::var(i), TULaurent(w, c));
		return r;
	}

	int d() const { return d_; }
	int cap() const { return cap_; }
	const Window& window() const { return w_; }
	const std::map<Mono, TULaurent>& terms() const { return t_; }
	bool clipped() const
	{
		if (clip_)
			return true;
		for (auto& [m, c] : t_)
			if (c.clipped())
				return true;
		return false;
	}
	bool is_zero() const { return t_.empty(); }
	void mark_clipped() { clip_ = true; }

	void add(const Mono& m, const TULaurent& c)
	{
		if (c.is_zero()) {
			if (c.clipped())
				clip_ = true;
			return;
		}
		if (m.degree(d_) > cap_) {
			clip_ = true;
			return;
		}
		auto it = t_.find(m);
		if (it == t_.end())
			t_.emplace(m, c);
		else {
			it->second += c;
			if (it->second.is_zero()) {
				if (it->second.clipped())
					clip_ = true;
				t_.erase(it);
			}
		}
	}
	void add(const Mono& m, int tpow, const Rational& c)
	{
		TULaurent x(w_);
		x.add_term(tpow, 0, c);
		if (x.is_zero() && sgn(c) != 0)
			clip_ = true;
		add(m, x);
	}

	TULaurent coeff(const Mono& m) const
	{
		auto it = t_.find(m);
		return it == t_.end() ? TULaurent(w_) : it->second;
	}

	WeylElement& operator+=(const WeylElement& o)
	{
		check(o);
		for (auto& [m, c] : o.t_)
			add(m, c);
		clip_ = clip_ || o.clip_;
		return *this;
	}
	WeylElement& operator-=(const WeylElement& o)
	{
		check(o);
		for (auto& [m, c] : o.t_)
			add(m, -c);
		clip_ = clip_ || o.clip_;
		return *this;
	}
	WeylElement& operator*=(const TULaurent& s)
	{
		WeylElement r(d_, cap_, w_);
		r.clip_ = clip_;
		for (auto& [m, c] : t_)
			r.add(m, c * s);
		return *this = r;
	}
	WeylElement& operator*=(const Rational& q)
	{
		if (sgn(q) == 0) {
			t_.clear();
			return *this;
		}
		for (auto& [m, c] : t_)
			c *= q;
		return *this;
	}
	friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
	friend WeylElement operator-(WeylElement a, const WeylElement& b) { return a -= b; }
	friend WeylElement operator*(WeylElement a, const Rational& q) { return a *= q; }
	friend bool operator==(const WeylElement& a, const WeylElement& b) { return a.t_ == b.t_; }

	// multiply every coefficient by t^a
	WeylElement t_shifted(int a) const
	{
		WeylElement r(d_, cap_, w_);
		r.clip_ = clip_;
		for (auto& [m, c] : t_)
			r.add(m, c.shifted(a, 0));
		return r;
	}

	template <class Kernel>
	WeylElement product(const WeylElement& o, Kernel&& kernel) const
	{
		check(o);
		WeylElement r(d_, cap_, w_);
		r.clip_ = clip_ || o.clip_;
		for (auto& [m1, c1] : t_)
			for (auto& [m2, c2] : o.t_) {
				TULaurent c12 = c1 * c2;
				for (auto& mt : kernel(d_, m1, m2)) {
					if (mt.m.degree(d_) > cap_) {
						r.clip_ = true;
						continue;
					}
					r.add(mt.m, c12.shifted(mt.tpow, 0) * mt.c);
				}
			}
		return r;
	}

	std::string str() const
	{
		if (t_.empty())
			return "0";
		std::string s;
		for (auto& [m, c] : t_) {
			if (!s.empty())
				s += " + ";
			s += "[" + c.str() + "]";
			for (int i = 0; i < 2 * d_; ++i)
				if (m.e[i])
					s += (i < d_ ? "x" : "p") + std::to_string(i % d_ + 1) + "^" + std::to_string(m.e[i]);
		}
		return s;
	}

private:
	void check(const WeylElement& o) const
	{
		if (d_ != o.d_ || cap_ != o.cap_ || !(w_ == o.w_))
			throw config_error("WeylElement shape mismatch");
	}

	int d_ = 1, cap_ = 4;
	Window w_;
	std::map<Mono, TULaurent> t_;
	bool clip_ = false;
};

inline WeylElement moyal_mul(const WeylElement& f, const WeylElement& g)
{
	return f.product(g, moyal_monomials);
}

inline WeylElement commutative_mul(const WeylElement& f, const WeylElement& g)
{
	return f.product(g, commutative_monomials);
}

inline WeylElement commutator(const WeylElement& f, const WeylElement& g)
{
	return moyal_mul(f, g) - moyal_mul(g, f);
}

// Largest p with f in F_{-p}: min over terms of |alpha| + 2 * (t-exponent).
inline int filtration_order(const WeylElement& f)
{
	int p = kZeroFiltration;
	for (auto& [m, c] : f.terms())
		for (auto& [k, v] : c.terms())
			p = std::min(p, m.degree(f.d()) + 2 * k.first);
	return p;
}

inline WeylElement symbol(const WeylElement& f)
{
	const Window& w = f.window();
	if (w.t_min > 0 || w.t_max < 0)
		throw config_error("symbol: window excludes t^0");
	WeylElement r(f.d(), f.cap(), w);
	for (auto& [m, c] : f.terms()) {
		TULaurent x(w);
		for (auto& [k, v] : c.terms())
			if (k.first == 0)
				x.add_term(0, k.second, v);
		r.add(m, x);
	}
	return r;
}

// D = (1/t) ad(generator)
struct WeylDerivation {
	WeylElement generator;
	bool normalized = false;

	static WeylDerivation of(const WeylElement& f)
	{
		WeylDerivation D{f, true};
		WeylElement g(f.d(), f.cap(), f.window());
		for (auto& [m, c] : f.terms())
			if (!m.is_one())
				g.add(m, c);
		D.generator = g;
		return D;
	}
};

inline WeylElement derivation_apply(const WeylDerivation& D, const WeylElement& f)
{
	return commutator(D.generator, f).t_shifted(-1);
}

// Matrix of (1/t)ad(q) on span(x_1..x_d, xi_1..xi_d); column j is the image of basis vector j.
inline std::vector<std::vector<TULaurent>> sp_matrix_of_quadratic(const WeylElement& q)
{
	const int d = q.d(), n = 2 * d;
	for (auto& [m, c] : q.terms()) {
		if (m.degree(d) != 2)
			throw config_error("sp_matrix_of_quadratic: input not homogeneous quadratic");
		for (auto& [k, v] : c.terms())
			if (k.first != 0)
				throw config_error("sp_matrix_of_quadratic: input not t-free");
	}
	std::vector<std::vector<TULaurent>> M(n, std::vector<TULaurent>(n, TULaurent(q.window())));
	auto D = WeylDerivation::of(q);
	for (int j = 0; j < n; ++j) {
		auto img = derivation_apply(D, WeylElement::variable(d, q.cap(), q.window(), j));
		for (auto& [m, c] : img.terms()) {
			int i = 0;
			while (!m.e[i])
				++i;
			M[i][j] = c;
		}
	}
	return M;
}

// theta(X, Y) = lift([X,Y]) - [lift X, lift Y] with the constant-free lift f -> f/t.
inline TULaurent central_cocycle_theta(const WeylDerivation& X, const WeylDerivation& Y)
{
	auto br = commutator(X.generator, Y.generator).t_shifted(-1); // generator of [X,Y]
	return -br.coeff(Mono{}).shifted(-1, 0);
}

} // namespace dqrr
