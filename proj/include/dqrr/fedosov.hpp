#pragma once

#include "dqrr/weyl.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Fedosov theory on the formal polydisk with constant symplectic chart.
// Forms carry base coordinates z_1..z_2d (same index order as the fiber
// variables x, xi), a dz-mask, a fiber monomial y and a power of t.
// Weight is (fiber degree) + 2 (t power); z and dz carry no weight.
// Everything of weight above `cap` is dropped.

namespace dqrr {

struct FKey {
	uint8_t mask = 0;
	Mono z;
	Mono y;
	int tpow = 0;
	auto operator<=>(const FKey&) const = default;
};

struct FormalForm {
	int d = 1;
	int cap = 6;
	std::map<FKey, Rational> terms;

	FormalForm() = default;
	FormalForm(int d_, int cap_) : d(d_), cap(cap_)
	{
		if (d < 1 || d > 2)
			throw config_error("FormalForm: d must be 1 or 2");
	}

	int weight(const FKey& k) const { return k.y.degree(d) + 2 * k.tpow; }
	FormalForm empty_like() const { return FormalForm(d, cap); }

	void add(const FKey& k, const Rational& c)
	{
		if (sgn(c) == 0 || weight(k) > cap)
			return;
		auto [it, fresh] = terms.try_emplace(k, c);
		if (!fresh) {
			it->second += c;
			if (sgn(it->second) == 0)
				terms.erase(it);
		}
	}
	FormalForm& operator+=(const FormalForm& o)
	{
		for (auto& [k, c] : o.terms)
			add(k, c);
		return *this;
	}
	FormalForm& operator-=(const FormalForm& o)
	{
		for (auto& [k, c] : o.terms)
			add(k, -c);
		return *this;
	}
	FormalForm& operator*=(const Rational& s)
	{
		if (sgn(s) == 0)
			terms.clear();
		for (auto& [k, c] : terms)
			c *= s;
		return *this;
	}
	friend FormalForm operator+(FormalForm a, const FormalForm& b) { return a += b; }
	friend FormalForm operator-(FormalForm a, const FormalForm& b) { return a -= b; }
	friend FormalForm operator*(FormalForm a, const Rational& s) { return a *= s; }
	friend bool operator==(const FormalForm& a, const FormalForm& b) { return a.terms == b.terms; }
	bool is_zero() const { return terms.empty(); }

	FormalForm t_shifted(int a) const
	{
		FormalForm r = empty_like();
		for (auto& [k, c] : terms) {
			FKey n = k;
			n.tpow += a;
			r.add(n, c);
		}
		return r;
	}
	FormalForm with_cap(int c) const
	{
		FormalForm r(d, c);
		for (auto& [k, v] : terms)
			r.add(k, v);
		return r;
	}
	// terms of weight below w, or at least w
	FormalForm below(int w) const
	{
		FormalForm r = empty_like();
		for (auto& [k, c] : terms)
			if (weight(k) < w)
				r.add(k, c);
		return r;
	}
	FormalForm scalar_part() const
	{
		FormalForm r = empty_like();
		for (auto& [k, c] : terms)
			if (k.y.is_one())
				r.add(k, c);
		return r;
	}
	FormalForm fiber_part() const { return *this - scalar_part(); }
	int min_weight() const
	{
		int w = kZeroFiltration;
		for (auto& [k, c] : terms)
			w = std::min(w, weight(k));
		return w;
	}
	bool homogeneous_degree(int q) const
	{
		for (auto& [k, c] : terms)
			if (std::popcount(k.mask) != q)
				return false;
		return true;
	}

	// The WeylElement sitting over (dz-mask, base monomial).
	WeylElement fiber(uint8_t mask, const Mono& z, Window w) const
	{
		WeylElement r(d, cap, w);
		for (auto& [k, c] : terms)
			if (k.mask == mask && k.z == z)
				r.add(k.y, k.tpow, c);
		return r;
	}

	std::string str() const
	{
		if (terms.empty())
			return "0";
		std::string s;
		for (auto& [k, c] : terms) {
			if (!s.empty())
				s += " + ";
			s += c.get_str();
			if (k.tpow)
				s += " t^" + std::to_string(k.tpow);
			for (int i = 0; i < 2 * d; ++i)
				if (k.z.e[i])
					s += " z" + std::to_string(i + 1) + "^" + std::to_string(k.z.e[i]);
			for (int i = 0; i < 2 * d; ++i)
				if (k.y.e[i])
					s += " y" + std::to_string(i + 1) + "^" + std::to_string(k.y.e[i]);
			for (int i = 0; i < 2 * d; ++i)
				if (k.mask >> i & 1)
					s += " dz" + std::to_string(i + 1);
		}
		return s;
	}
};

namespace detail {

// sign of dz^A ^ dz^B reordered to increasing index, 0 on overlap
inline int wedge_sign(uint8_t a, uint8_t b)
{
	if (a & b)
		return 0;
	int swaps = 0;
	for (int j = 0; j < 8; ++j)
		if (b >> j & 1)
			swaps += std::popcount(unsigned(a >> (j + 1)));
	return swaps % 2 ? -1 : 1;
}

// left contraction by d/dz^i
inline int contract_sign(uint8_t mask, int i) { return std::popcount(unsigned(mask & ((1u << i) - 1))) % 2 ? -1 : 1; }

inline Mono mono_add(Mono a, const Mono& b)
{
	for (size_t i = 0; i < a.e.size(); ++i)
		a.e[i] += b.e[i];
	return a;
}

} // namespace detail

inline FormalForm ff_term(int d, int cap, uint8_t mask, Mono z, Mono y, int tpow, const Rational& c)
{
	FormalForm r(d, cap);
	r.add({mask, z, y, tpow}, c);
	return r;
}

// Wedge in dz, commutative in z, Moyal in the fiber.
inline FormalForm ff_mul(const FormalForm& a, const FormalForm& b)
{
	FormalForm r(a.d, std::min(a.cap, b.cap));
	for (auto& [ka, ca] : a.terms)
		for (auto& [kb, cb] : b.terms) {
			int s = detail::wedge_sign(ka.mask, kb.mask);
			if (!s)
				continue;
			// the product only raises weight, so skip early
			if (a.weight(ka) + a.weight(kb) > r.cap)
				continue;
			Mono z = detail::mono_add(ka.z, kb.z);
			Rational cab = ca * cb;
			if (s < 0)
				cab = -cab;
			for (auto& mt : moyal_monomials(a.d, ka.y, kb.y))
				r.add({uint8_t(ka.mask | kb.mask), z, mt.m, ka.tpow + kb.tpow + mt.tpow}, cab * mt.c);
		}
	return r;
}

// Graded commutator [a, b] = ab - (-1)^{pq} ba on form degrees.
inline FormalForm ff_bracket(const FormalForm& a, const FormalForm& b)
{
	FormalForm r(a.d, std::min(a.cap, b.cap));
	for (auto& [ka, ca] : a.terms)
		for (auto& [kb, cb] : b.terms) {
			if (ka.y.is_one() || kb.y.is_one())
				continue; // scalars are central
			FormalForm x = ff_term(a.d, r.cap, ka.mask, ka.z, ka.y, ka.tpow, ca);
			FormalForm y = ff_term(a.d, r.cap, kb.mask, kb.z, kb.y, kb.tpow, cb);
			int pq = std::popcount(ka.mask) * std::popcount(kb.mask);
			r += ff_mul(x, y);
			r -= ff_mul(y, x) * Rational(pq % 2 ? -1 : 1);
		}
	return r;
}

// de Rham differential in the base coordinates.
inline FormalForm ff_d(const FormalForm& a)
{
	FormalForm r = a.empty_like();
	for (auto& [k, c] : a.terms)
		for (int i = 0; i < 2 * a.d; ++i) {
			if (!k.z.e[i])
				continue;
			int s = detail::wedge_sign(uint8_t(1u << i), k.mask);
			if (!s)
				continue;
			FKey n = k;
			n.z.e[i] -= 1;
			n.mask |= uint8_t(1u << i);
			r.add(n, c * int(k.z.e[i]) * s);
		}
	return r;
}

// delta = sum_i dz^i d/dy^i
inline FormalForm koszul_delta(const FormalForm& a)
{
	FormalForm r = a.empty_like();
	for (auto& [k, c] : a.terms)
		for (int i = 0; i < 2 * a.d; ++i) {
			if (!k.y.e[i])
				continue;
			int s = detail::wedge_sign(uint8_t(1u << i), k.mask);
			if (!s)
				continue;
			FKey n = k;
			n.y.e[i] -= 1;
			n.mask |= uint8_t(1u << i);
			r.add(n, c * int(k.y.e[i]) * s);
		}
	return r;
}

// delta* = sum_i y^i iota(d/dz^i); delta delta* + delta* delta = (p + q)
inline FormalForm koszul_dual(const FormalForm& a)
{
	FormalForm r = a.empty_like();
	for (auto& [k, c] : a.terms)
		for (int i = 0; i < 2 * a.d; ++i) {
			if (!(k.mask >> i & 1))
				continue;
			FKey n = k;
			n.y.e[i] += 1;
			n.mask &= uint8_t(~(1u << i));
			r.add(n, c * detail::contract_sign(k.mask, i));
		}
	return r;
}

// h = delta* / (p + q), zero on the harmonic part p = q = 0
inline FormalForm koszul_homotopy(const FormalForm& a)
{
	FormalForm r = koszul_dual(a);
	FormalForm out = a.empty_like();
	for (auto& [k, c] : r.terms) {
		int pq = k.y.degree(a.d) + std::popcount(k.mask);
		out.add(k, c / pq);
	}
	return out;
}

// Projection onto fiber degree 0, form degree 0.
inline FormalForm harmonic_part(const FormalForm& a)
{
	FormalForm r = a.empty_like();
	for (auto& [k, c] : a.terms)
		if (k.mask == 0 && k.y.is_one())
			r.add(k, c);
	return r;
}

// Cone homotopy in the base: d K + K d = id on positive-degree polynomial forms.
inline FormalForm base_homotopy(const FormalForm& a)
{
	FormalForm r = a.empty_like();
	for (auto& [k, c] : a.terms) {
		int total = k.z.degree(a.d) + std::popcount(k.mask);
		if (total == 0)
			continue;
		for (int i = 0; i < 2 * a.d; ++i) {
			if (!(k.mask >> i & 1))
				continue;
			FKey n = k;
			n.z.e[i] += 1;
			n.mask &= uint8_t(~(1u << i));
			r.add(n, c * detail::contract_sign(k.mask, i) / total);
		}
	}
	return r;
}

// A_{-1}: (1/t) ad A_{-1} = -delta. Index i < d is x_i, i >= d is xi_i.
inline FormalForm tautological_form(int d, int cap)
{
	FormalForm r(d, cap);
	const int s = conv::kMoyalSign;
	for (int i = 0; i < d; ++i) {
		r.add({uint8_t(1u << i), Mono{}, Mono::var(d + i), 0}, s);
		r.add({uint8_t(1u << (d + i)), Mono{}, Mono::var(i), 0}, -s);
	}
	return r;
}

// Central 1-form making the curvature of A_{-1} vanish; calibrated so that
// theta = 0 gives the Moyal product on horizontal sections.
inline FormalForm tautological_central_lift(int d, int cap)
{
	FormalForm r(d, cap);
	const Rational h(conv::kMoyalSign, 2);
	for (int i = 0; i < d; ++i) {
		r.add({uint8_t(1u << (d + i)), Mono::var(i), Mono{}, 0}, -h);
		r.add({uint8_t(1u << i), Mono::var(d + i), Mono{}, 0}, h);
	}
	return r;
}

struct ConnectionData {
	int d = 1;
	int depth = 1;
	FormalForm A_minus1, A_0, higher, central_lift;

	int cap() const { return depth + 2; }
	FormalForm lift() const { return A_minus1 + A_0 + higher + central_lift; }
};

// Omega = dA + (1/2t)[A, A]
inline FormalForm curvature_form(const FormalForm& A)
{
	FormalForm r = ff_d(A);
	FormalForm br = ff_bracket(A, A);
	// [A, A] lies in t W, so the shift stays polynomial
	r += br.t_shifted(-1) * Rational(1, 2);
	return r;
}

// theta = Omega / t, kept where Omega is determined by the truncation.
inline FormalForm curvature_of_lift(const ConnectionData& c)
{
	FormalForm A = c.lift().with_cap(2 * c.cap());
	FormalForm omega = curvature_form(A).below(c.cap());
	return omega.scalar_part().t_shifted(-1).with_cap(c.cap());
}

// Omega - t theta; lies in weight >= depth + 2, i.e. (1/t) of it is in F_{-depth}.
inline FormalForm mc_residual(const ConnectionData& c, const FormalForm& theta)
{
	FormalForm A = c.lift().with_cap(2 * c.cap());
	FormalForm target = theta.with_cap(2 * c.cap()).t_shifted(1);
	return curvature_form(A) - target;
}

inline void check_theta(const FormalForm& theta)
{
	if (!theta.homogeneous_degree(2))
		throw config_error("fedosov: theta must be a 2-form");
	for (auto& [k, c] : theta.terms) {
		if (!k.y.is_one())
			throw config_error("fedosov: theta must have scalar values");
		if (k.tpow < -1)
			throw config_error("fedosov: theta has a pole beyond 1/t");
	}
	if (!ff_d(theta).is_zero())
		throw config_error("fedosov: theta is not closed");
}

// Solves delta r = dr + (1/2t)[r, r] - t theta' with delta* r = normalization,
// where theta' drops the 1/t part of theta; that part goes into the central lift.
inline ConnectionData fedosov_recursion(const FormalForm& theta, int N, const FormalForm* normalization = nullptr)
{
	if (N < 1)
		throw config_error("fedosov_recursion: depth must be >= 1");
	check_theta(theta);
	const int d = theta.d, cap = N + 2;
	ConnectionData c;
	c.d = d;
	c.depth = N;
	c.A_minus1 = tautological_form(d, cap);
	c.A_0 = FormalForm(d, cap);
	FormalForm ttheta = theta.with_cap(cap + 2).t_shifted(1);
	FormalForm lead(d, cap), rest(d, cap);
	for (auto& [k, v] : ttheta.terms)
		(k.tpow == 0 ? lead : rest).add(k, v);
	c.central_lift = tautological_central_lift(d, cap) + base_homotopy(lead);

	FormalForm seed(d, cap);
	if (normalization) {
		if (!normalization->homogeneous_degree(0) || normalization->with_cap(cap).min_weight() < 4)
			throw config_error("fedosov_recursion: normalization must be a 0-form of weight >= 4");
		// fiber-linear terms would put a central 1-form into A, out of reach of gauge
		for (auto& [k, v] : normalization->terms)
			if (k.y.degree(d) < 2)
				throw config_error("fedosov_recursion: normalization must have fiber degree >= 2");
		seed = koszul_delta(normalization->with_cap(cap + 1)).with_cap(cap);
	}
	FormalForm r(d, cap);
	for (int it = 0; it <= cap + 1; ++it) {
		FormalForm rhs = ff_d(r);
		rhs += ff_bracket(r.with_cap(cap + 2), r.with_cap(cap + 2)).t_shifted(-1).with_cap(cap) * Rational(1, 2);
		rhs -= rest;
		FormalForm next = seed + koszul_homotopy(rhs);
		if (next == r)
			break;
		r = next;
	}
	// split off the sp-valued (weight 2, quadratic t-free) part
	c.A_0 = FormalForm(d, cap);
	c.higher = FormalForm(d, cap);
	for (auto& [k, v] : r.terms)
		(k.tpow == 0 && k.y.degree(d) == 2 ? c.A_0 : c.higher).add(k, v);
	return c;
}

// B = e^{ad X/t} A - sum_n (ad X/t)^n dX / (n+1)!, on the full lift.
inline ConnectionData gauge_transform(const FormalForm& X, const ConnectionData& A)
{
	if (!X.homogeneous_degree(0))
		throw config_error("gauge_transform: X must be a 0-form");
	for (auto& [k, c] : X.terms)
		if (X.weight(k) < 3)
			throw config_error("gauge_transform: X is not in F_{-1}");
	const int cap = A.cap(), wide = cap + 2;
	FormalForm Xw = X.with_cap(wide);
	FormalForm total = A.lift().with_cap(wide);
	FormalForm term = total;
	// each ad(X)/t raises weight by at least one
	for (int n = 1; n <= wide + 1; ++n) {
		term = ff_bracket(Xw, term).t_shifted(-1) * Rational(1, n);
		if (term.is_zero())
			break;
		total += term;
	}
	FormalForm dterm = ff_d(Xw);
	for (int n = 0; n <= wide + 1 && !dterm.is_zero(); ++n) {
		total -= dterm * (Rational(1) / factorial(n + 1));
		dterm = ff_bracket(Xw, dterm).t_shifted(-1);
	}
	ConnectionData r = A;
	total = total.with_cap(cap);
	r.A_minus1 = total.empty_like();
	r.A_0 = total.empty_like();
	r.higher = total.empty_like();
	r.central_lift = total.empty_like();
	for (auto& [k, v] : total.terms) {
		int deg = k.y.degree(A.d);
		if (k.y.is_one())
			r.central_lift.add(k, v);
		else if (k.tpow == 0 && deg == 1 && k.z.is_one())
			r.A_minus1.add(k, v);
		else if (k.tpow == 0 && deg == 2)
			r.A_0.add(k, v);
		else
			r.higher.add(k, v);
	}
	return r;
}

struct GaugeCertificate {
	bool ok = false;
	FormalForm X;                   // accumulated generator
	std::vector<FormalForm> levels; // the piece solved at each step
	std::string failure;
};

// Solves e^{ad X/t}(d + A) = d + B level by level: at the lowest weight w of
// the fiber difference D, delta X_{w+1} = D_w with X_{w+1} = h D_w.
inline GaugeCertificate gauge_solve(const ConnectionData& A, const ConnectionData& B)
{
	GaugeCertificate cert;
	const int cap = A.cap();
	// (1/t) ad X loses two weights against A_{-1}, so only weights below cap - 1 are determined
	const int valid = cap - 1;
	cert.X = FormalForm(A.d, cap);
	for (int step = 0; step <= cap; ++step) {
		FormalForm D = (B.lift() - gauge_transform(cert.X, A).lift()).fiber_part().below(valid);
		if (D.is_zero()) {
			cert.ok = true;
			return cert;
		}
		int w = D.min_weight();
		FormalForm Dw(A.d, cap);
		for (auto& [k, v] : D.terms)
			if (D.weight(k) == w)
				Dw.add(k, v);
		FormalForm Xw = koszul_homotopy(Dw);
		if (!(koszul_delta(Xw) == Dw)) {
			cert.failure = "difference at weight " + std::to_string(w) + " is not delta-exact";
			return cert;
		}
		if (Xw.min_weight() < 3) {
			cert.failure = "generator leaves F_{-1} at weight " + std::to_string(w);
			return cert;
		}
		cert.levels.push_back(Xw);
		cert.X += Xw;
	}
	cert.failure = "no convergence";
	return cert;
}

// Flat section with symbol F: f = F + h(df + (1/t)[r, f]).
inline FormalForm horizontal_section(const ConnectionData& c, const FormalForm& F)
{
	if (!F.homogeneous_degree(0))
		throw config_error("horizontal_section: symbol must be a 0-form");
	for (auto& [k, v] : F.terms)
		if (!k.y.is_one())
			throw config_error("horizontal_section: symbol must be fiber-constant");
	const int cap = c.cap();
	FormalForm r = (c.A_0 + c.higher).with_cap(cap + 2);
	FormalForm Fc = F.with_cap(cap);
	FormalForm f = Fc;
	for (int it = 0; it <= cap + 1; ++it) {
		FormalForm rhs = ff_d(f);
		rhs += ff_bracket(r, f.with_cap(cap + 2)).t_shifted(-1).with_cap(cap);
		FormalForm next = Fc + koszul_homotopy(rhs);
		if (next == f)
			break;
		f = next;
	}
	return f;
}

// Star product induced on symbols: the fiber-constant part of f_F * f_G.
inline FormalForm induced_star(const ConnectionData& c, const FormalForm& F, const FormalForm& G)
{
	return harmonic_part(ff_mul(horizontal_section(c, F), horizontal_section(c, G)));
}

// Moyal product of base polynomials, z playing the role of (x, xi).
inline FormalForm base_moyal(const FormalForm& F, const FormalForm& G)
{
	FormalForm r(F.d, std::min(F.cap, G.cap));
	for (auto& [a, ca] : F.terms)
		for (auto& [b, cb] : G.terms)
			for (auto& mt : moyal_monomials(F.d, a.z, b.z))
				r.add({0, mt.m, Mono{}, a.tpow + b.tpow + mt.tpow}, ca * cb * mt.c);
	return r;
}

} // namespace dqrr
