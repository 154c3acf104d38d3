#include "dqrr/fundamental.hpp"
#include "dqrr/random.hpp"

#include <gtest/gtest.h>

using namespace dqrr;

namespace {

const Window kW{-6, 6, -6, 6};

} // namespace

TEST(Brodzki, BrOfEtaPowerIsOne)
{
	for (int n = 0; n <= 4; ++n)
		EXPECT_EQ(br(eta_power(n, kW)), TULaurent(kW, 1)) << "n=" << n;
}

TEST(Brodzki, BrOfEtaPowerLandsOnOneN)
{
	for (int n = 0; n <= 4; ++n) {
		KChain b = Br(eta_power(n, kW));
		KChain expect(kW);
		expect.add(n + conv::kBrFactorialShift, TULaurent(kW, 1));
		EXPECT_EQ(b, expect) << "n=" << n;
	}
}

TEST(Brodzki, RhoByHand)
{
	WEtaAlg alg{1, 4};
	WEtaAlg::Key x{Mono::var(0), 0}, xi{Mono::var(1), 0}, eta{Mono{}, 1}, one{Mono{}, 0};
	// rho(eta) = j(d eta) = 1
	EXPECT_EQ(rho(alg, {eta}, kW), TULaurent(kW, 1));
	// rho(x, xi) = u j(x) j(xi) - j(x * xi) = -s t / 2
	EXPECT_EQ(rho(alg, {x, xi}, kW), TULaurent(kW, Rational(-conv::kMoyalSign, 2), 1));
	// rho(1, 1) = u - 1
	EXPECT_EQ(rho(alg, {one, one}, kW), TULaurent(kW, 1, 0, 1) - TULaurent(kW, 1));
	EXPECT_TRUE(rho(alg, {x, x, x}, kW).is_zero());
}

TEST(Brodzki, BrOfTwoGeneratorsByHand)
{
	// br(xi (x) x) = u (rho'(xi, x) - rho'(x, xi)) with rho' = -j(a a'), n = 0
	Chain<WAlg> c(WAlg{1, 4, false}, kW, 0);
	c.add({Mono::var(1), Mono::var(0)}, Rational(1));
	TULaurent expect(kW);
	expect.add_term(1, 1, Rational(conv::kMoyalSign));
	EXPECT_EQ(br(c), expect);
}

TEST(Brodzki, BrVanishesInEvenDegree)
{
	Chain<WAlg> c(WAlg{1, 4, false}, kW, 0);
	c.add({Mono::var(0), Mono::var(1), Mono::var(0)}, Rational(1));
	EXPECT_TRUE(br(c).is_zero());
}

TEST(Brodzki, BrIsAChainMap)
{
	Rng rng(31);
	auto check = [&](auto alg, int budget, const char* name) {
		using Alg = decltype(alg);
		int nontrivial = 0;
		for (int i = 0; i < 150; ++i) {
			Rng r = rng.split(name).split(uint64_t(i));
			auto c = lambda_normalize(random_chain(r, alg, kW, 5, 3, 1, budget));
			Chain<Alg> ub = hochschild_b(c);
			ub *= TULaurent(kW, 1, 0, 1);
			KChain lhs = Br(lambda_normalize(ub + dga_delta(c)));
			EXPECT_TRUE(lhs.is_zero()) << c.to_json().dump();
			nontrivial += !Br(lambda_normalize(ub)).is_zero();
		}
		return nontrivial;
	};
	check(EtaAlg{1}, 1 << 20, "k[eta]");
	// on W_1[eta] the two halves cancel in some trials
	EXPECT_GT(check(WEtaAlg{1, 5}, 5, "W1[eta]"), 0);
}

TEST(Brodzki, BrIsLambdaInvariant)
{
	Rng rng(32);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		auto c = random_chain(r, WEtaAlg{1, 5}, kW, 5, 3, 1, 5);
		EXPECT_EQ(Br(c), Br(lambda_normalize(c)));
		EXPECT_TRUE(Br(c - tau(c)).is_zero());
	}
}

TEST(Brodzki, BrVanishesOnIotaImage)
{
	Rng rng(33);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		auto c = random_chain(r, WEtaAlg{1, 5}, kW, 4, 3, 1, 3);
		EXPECT_TRUE(Br(lambda_normalize(iota_x_partial(c))).is_zero()) << c.to_json().dump();
	}
}

TEST(Brodzki, OnePowerNormalization)
{
	// 1^(n+1) = n! (n+1)! 1^{(x) 2n+1}
	auto c = one_power(2, kW);
	ASSERT_EQ(c.words.size(), 1u);
	EXPECT_EQ(c.words.begin()->first.size(), 5u);
	EXPECT_EQ(c.words.begin()->second, TULaurent(kW, 12));
}
