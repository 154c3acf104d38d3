#include "dqrr/random.hpp"
#include "dqrr/weyl.hpp"

#include <gtest/gtest.h>

using namespace dqrr;

namespace {

const Window kW{-6, 6, -2, 2};

// Moyal product through the bidifferential operator
// exp((s t / 2) sum_i (d_{x_i} (x) d_{xi_i} - d_{xi_i} (x) d_{x_i})),
// applied pair by pair to f (x) g and then multiplied.
struct Bi {
	Mono f, g;
	int tpow;
	auto operator<=>(const Bi&) const = default;
};
using BiPoly = std::map<Bi, Rational>;

Rational falling_power(int n, int k)
{
	Rational r = 1;
	for (int i = 0; i < k; ++i)
		r *= n - i;
	return r;
}

BiPoly apply_pair(const BiPoly& in, int d, int i)
{
	BiPoly out;
	const int x = i, xi = d + i;
	for (auto& [b, c] : in)
		for (int n = 0;; ++n) {
			// (d_x f d_xi g - d_xi f d_x g)^n, binomially expanded
			bool any = false;
			Rational pre = c / factorial(n);
			for (int k = 0; k < n; ++k)
				pre *= Rational(conv::kMoyalSign, 2);
			for (int k = 0; k <= n; ++k) {
				// k factors of (-d_xi f d_x g), n-k of (d_x f d_xi g)
				int fx = n - k, fxi = k, gx = k, gxi = n - k;
				if (b.f.e[x] < fx || b.f.e[xi] < fxi || b.g.e[x] < gx || b.g.e[xi] < gxi)
					continue;
				any = true;
				Rational binom = factorial(n) / (factorial(k) * factorial(n - k));
				Rational v = pre * binom * (k % 2 ? -1 : 1) * falling_power(b.f.e[x], fx) * falling_power(b.f.e[xi], fxi) *
				             falling_power(b.g.e[x], gx) * falling_power(b.g.e[xi], gxi);
				Bi nb = b;
				nb.f.e[x] -= fx;
				nb.f.e[xi] -= fxi;
				nb.g.e[x] -= gx;
				nb.g.e[xi] -= gxi;
				nb.tpow += n;
				out[nb] += v;
			}
			if (!any && n > 0)
				break;
		}
	return out;
}

WeylElement oracle_moyal(const WeylElement& f, const WeylElement& g)
{
	const int d = f.d();
	WeylElement r(d, f.cap(), f.window());
	for (auto& [mf, cf] : f.terms())
		for (auto& [mg, cg] : g.terms()) {
			BiPoly p{{Bi{mf, mg, 0}, Rational(1)}};
			for (int i = 0; i < d; ++i)
				p = apply_pair(p, d, i);
			for (auto& [b, c] : p) {
				if (sgn(c) == 0)
					continue;
				Mono m;
				for (int k = 0; k < 2 * d; ++k)
					m.e[k] = int8_t(b.f.e[k] + b.g.e[k]);
				r.add(m, (cf * cg).shifted(b.tpow, 0) * c);
			}
		}
	return r;
}

} // namespace

TEST(Weyl, CanonicalCommutationRelation)
{
	auto x = WeylElement::variable(1, 4, kW, 0), xi = WeylElement::variable(1, 4, kW, 1);
	auto c = commutator(x, xi);
	EXPECT_EQ(c, WeylElement::constant(1, 4, kW, TULaurent(kW, conv::kMoyalSign, 1)));
	auto p = moyal_mul(x, xi);
	EXPECT_EQ(p.coeff(Mono{}), TULaurent(kW, Rational(conv::kMoyalSign, 2), 1));
}

TEST(Weyl, AgreesWithBidifferentialOracle)
{
	Rng rng(3);
	for (int d = 1; d <= 2; ++d)
		for (int i = 0; i < 60; ++i) {
			Rng r = rng.split(uint64_t(100 * d + i));
			auto f = random_weyl(r, d, 6, kW, 3), g = random_weyl(r, d, 6, kW, 3);
			auto p = moyal_mul(f, g);
			ASSERT_FALSE(p.clipped());
			EXPECT_EQ(p, oracle_moyal(f, g)) << f.str() << " * " << g.str();
		}
}

TEST(Weyl, AssociativityOnRandomTriples)
{
	Rng rng(4);
	int checked = 0;
	for (int d = 1; d <= 2; ++d)
		for (int i = 0; i < 100; ++i) {
			Rng r = rng.split(uint64_t(1000 * d + i));
			auto f = random_weyl(r, d, 6, kW, 2), g = random_weyl(r, d, 6, kW, 2), h = random_weyl(r, d, 6, kW, 2);
			auto l = moyal_mul(moyal_mul(f, g), h), rr = moyal_mul(f, moyal_mul(g, h));
			if (l.clipped() || rr.clipped())
				continue;
			++checked;
			EXPECT_EQ(l, rr);
		}
	EXPECT_EQ(checked, 200);
}

TEST(Weyl, CommutatorLiesInTW)
{
	Rng rng(5);
	for (int i = 0; i < 200; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		auto c = commutator(random_weyl(r, d, 6, kW, 3), random_weyl(r, d, 6, kW, 3));
		for (auto& [m, v] : c.terms())
			for (auto& [k, q] : v.terms())
				EXPECT_GE(k.first, 1);
	}
}

TEST(Weyl, ProductAboveCapIsFlagged)
{
	auto x = WeylElement::variable(1, 2, kW, 0);
	auto p = moyal_mul(moyal_mul(x, x), x);
	EXPECT_TRUE(p.clipped());
	EXPECT_FALSE(moyal_mul(x, x).clipped());
}

TEST(Weyl, SymbolIsMultiplicative)
{
	Rng rng(6);
	for (int i = 0; i < 50; ++i) {
		Rng r = rng.split(uint64_t(i));
		auto f = random_weyl(r, 1, 6, kW, 3), g = random_weyl(r, 1, 6, kW, 3);
		EXPECT_EQ(symbol(moyal_mul(f, g)), commutative_mul(symbol(f), symbol(g)));
	}
}

TEST(Weyl, FiltrationOrder)
{
	WeylElement f(1, 4, kW);
	f.add(Mono::var(0), 1, Rational(1)); // t x has order 3
	f.add(Mono{}, 2, Rational(1));       // t^2 has order 4
	EXPECT_EQ(filtration_order(f), 3);
	EXPECT_EQ(filtration_order(WeylElement(1, 4, kW)), kZeroFiltration);
}

TEST(Weyl, QuadraticDerivationMatrixIsSymplectic)
{
	// (1/t) ad(x xi) scales x and xi oppositely
	WeylElement q(1, 4, kW);
	Mono m;
	m.e[0] = m.e[1] = 1;
	q.add(m, 0, Rational(1));
	auto M = sp_matrix_of_quadratic(q);
	EXPECT_EQ(M[0][0], TULaurent(kW, -conv::kMoyalSign));
	EXPECT_EQ(M[1][1], TULaurent(kW, conv::kMoyalSign));
	EXPECT_TRUE(M[0][1].is_zero());
	EXPECT_TRUE(M[1][0].is_zero());
}
