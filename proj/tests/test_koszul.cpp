#include "dqrr/random.hpp"
#include "dqrr/suites.hpp"

#include <gtest/gtest.h>

using namespace dqrr;

namespace {

const Window kW{-5, 5, -5, 5};

FormalDeRham one_form(int d)
{
	FormalDeRham f(d, kW);
	f.add(Mono{}, 0, TULaurent(kW, 1));
	return f;
}

} // namespace

TEST(Koszul, PartialOnGeneratorIsCommutator)
{
	// d(x (x) v_xi) = [x, xi] = s t
	KoszulChain k(1, 4, kW);
	k.add(Mono::var(0), Mask(1u << 1), TULaurent(kW, 1));
	auto p = koszul_partial(k);
	KoszulChain expect(1, 4, kW);
	expect.add(Mono{}, 0, TULaurent(kW, conv::kMoyalSign, 1));
	EXPECT_EQ(p, expect);
}

TEST(Koszul, PartialSquaresToZero)
{
	Rng rng(21);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		auto k = random_koszul(r, d, 5, kW);
		EXPECT_TRUE(koszul_partial(koszul_partial(k)).is_zero());
	}
}

TEST(Koszul, ComparisonMapsAreChainMaps)
{
	Rng rng(22);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		auto k = random_koszul(r, d, 5, kW);
		EXPECT_EQ(hochschild_b(koszul_to_hochschild(k)), koszul_to_hochschild(koszul_partial(k)));
		EXPECT_EQ(koszul_to_derham(koszul_partial(k)), t_derham_d(koszul_to_derham(k)));
		EXPECT_EQ(koszul_projection(koszul_to_hochschild(k)), k);
	}
}

TEST(Koszul, AlternationHasFactorialManyWords)
{
	for (int d = 1; d <= 2; ++d) {
		auto phi = phi_cycle(d, 4, kW);
		size_t n = 1;
		for (int i = 2; i <= 2 * d; ++i)
			n *= i;
		EXPECT_EQ(phi.words.size(), n);
		EXPECT_TRUE(hochschild_b(phi).is_zero());
	}
}

TEST(Koszul, PhiMapsToOne)
{
	for (int d = 1; d <= 2; ++d)
		EXPECT_EQ(koszul_to_derham(koszul_projection(phi_cycle(d, 4, kW))), one_form(d)) << "d=" << d;
}

TEST(Koszul, DeRhamDifferentialByHand)
{
	// d(x xi) = xi dx + x dxi
	FormalDeRham f(1, kW);
	Mono m;
	m.e[0] = m.e[1] = 1;
	f.add(m, 0, TULaurent(kW, 1));
	FormalDeRham expect(1, kW);
	expect.add(Mono::var(1), 1, TULaurent(kW, 1));
	expect.add(Mono::var(0), 2, TULaurent(kW, 1));
	EXPECT_EQ(derham_d(f), expect);
	EXPECT_TRUE(derham_d(derham_d(f)).is_zero());
}

TEST(Koszul, HkrByHand)
{
	// hkr(x (x) xi) = x dxi
	Chain<WAlg> c(WAlg{1, 4, true}, kW, 1);
	c.add({Mono::var(0), Mono::var(1)}, Rational(1));
	FormalDeRham expect(1, kW);
	expect.add(Mono::var(0), 2, TULaurent(kW, 1));
	EXPECT_EQ(hkr(c), expect);
}

TEST(Koszul, HkrIntertwinesBAndD)
{
	Rng rng(23);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		auto c = random_chain(r, WAlg{d, 5, true}, kW, 3, 3, 1, 5);
		EXPECT_TRUE(hkr(hochschild_b(c)).is_zero());
		EXPECT_EQ(hkr(connes_B(c)), derham_d(hkr(c)));
	}
}

TEST(Koszul, IAndJConjugateDifferentials)
{
	Rng rng(24);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		auto f = random_derham(r, d, kW);
		EXPECT_EQ(op_I(derham_d(f)), t_derham_d(op_I(f)));
		EXPECT_EQ(op_J(derham_d(f)), u_derham_d(op_J(f)));
		EXPECT_EQ(op_I(op_I(f), true), f);
		EXPECT_EQ(op_J(op_J(f), true), f);
	}
}

TEST(Koszul, TraceDensityIsEquivariant)
{
	Rng rng(25);
	for (int i = 0; i < 40; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		WeylElement q(d, 5, kW);
		for (int k = 0; k < 2; ++k) {
			Mono m;
			m.e[r.uniform(0, 2 * d - 1)]++;
			m.e[r.uniform(0, 2 * d - 1)]++;
			q.add(m, 0, r.small_rational());
		}
		auto c = random_chain(r, WAlg{d, 5, false}, kW, 2 * d + 1, 3, 1, 5);
		EXPECT_EQ(lie_derivative(q, trace_density_0(c)), trace_density_0(lie_derivative(q, c)));
	}
}

TEST(Koszul, ProjectionIgnoresNonlinearWords)
{
	Chain<WAlg> c(WAlg{1, 4, false}, kW, 1);
	Mono sq;
	sq.e[0] = 2;
	c.add({Mono{}, sq}, Rational(1));
	EXPECT_TRUE(koszul_projection(c).is_zero());
}
