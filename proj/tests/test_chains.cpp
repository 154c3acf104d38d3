#include "dqrr/cyclic_rank.hpp"
#include "dqrr/random.hpp"

#include <gtest/gtest.h>

using namespace dqrr;

namespace {

const Window kW{-4, 4, -2, 2};
constexpr int kUnreduced = 1 << 20;

template <class Alg>
void check_identities(const Alg& alg, int budget, uint64_t seed)
{
	Rng rng(seed);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		auto c = random_chain(r, alg, kW, 4, 3, 1, budget);
		auto u = random_chain(r, alg, kW, 4, 3, kUnreduced, budget);
		EXPECT_TRUE(hochschild_b(hochschild_b(c)).is_zero());
		EXPECT_TRUE(connes_B(connes_B(c)).is_zero());
		EXPECT_TRUE((hochschild_b(connes_B(c)) + connes_B(hochschild_b(c))).is_zero());
		auto D = [](const Chain<Alg>& x) { return hochschild_b(x) + dga_delta(x); };
		EXPECT_TRUE(D(D(c)).is_zero());
		EXPECT_EQ(hochschild_b(u - tau(u)), b_prime(u) - tau(b_prime(u)));
		EXPECT_EQ(b_prime(N_op(u)), N_op(hochschild_b(u)));
		EXPECT_TRUE(lambda_normalize(u - tau(u)).is_zero());
		auto n = lambda_normalize(u);
		EXPECT_EQ(lambda_normalize(n), n);
	}
}

} // namespace

TEST(Chains, IdentitiesWeyl)
{
	check_identities(WAlg{1, 5, false}, 5, 1);
	check_identities(WAlg{2, 5, false}, 5, 2);
}

TEST(Chains, IdentitiesCommutative) { check_identities(WAlg{1, 5, true}, 5, 3); }

TEST(Chains, IdentitiesEta)
{
	check_identities(EtaAlg{1}, kUnreduced, 4);
	check_identities(EtaAlg{-1}, kUnreduced, 5);
}

TEST(Chains, IdentitiesMatrices) { check_identities(MatAlg{}, kUnreduced, 6); }

TEST(Chains, IdentitiesWeylEta) { check_identities(WEtaAlg{1, 5}, 5, 7); }

TEST(Chains, HochschildOnMatricesByHand)
{
	// b(E12 (x) E21) = E12 E21 - E21 E12 = H
	Chain<MatAlg> c(MatAlg{}, kW, kUnreduced);
	c.add({MatAlg::E12, MatAlg::E21}, Rational(1));
	Chain<MatAlg> h(MatAlg{}, kW, kUnreduced);
	h.add({MatAlg::H}, Rational(1));
	EXPECT_EQ(hochschild_b(c), h);
}

TEST(Chains, RotationSignOnOddWords)
{
	// eta has eps = 2, the unit eps = 1: tau(1, 1) = -(1, 1)
	Chain<EtaAlg> c(EtaAlg{1}, kW, kUnreduced);
	c.add({0, 0}, Rational(1));
	auto neg = c;
	neg *= Rational(-1);
	EXPECT_EQ(tau(c), neg);
	Chain<EtaAlg> e(EtaAlg{1}, kW, kUnreduced);
	e.add({1, 0}, Rational(1));
	Chain<EtaAlg> expect(EtaAlg{1}, kW, kUnreduced);
	expect.add({0, 1}, Rational(1));
	EXPECT_EQ(tau(e), expect);
}

TEST(Chains, ReducedSlotsDropUnits)
{
	Chain<WAlg> c(WAlg{1, 4, false}, kW, 1);
	c.add({Mono::var(0), Mono{}}, Rational(3));
	EXPECT_TRUE(c.is_zero());
}

TEST(Chains, ConnesBOnOneSlot)
{
	// B(a) = 1 (x) a for a single reduced slot
	Chain<WAlg> a(WAlg{1, 4, false}, kW, 1);
	a.add({Mono::var(0)}, Rational(1));
	Chain<WAlg> ba(WAlg{1, 4, false}, kW, 1);
	ba.add({Mono{}, Mono::var(0)}, Rational(1));
	EXPECT_EQ(connes_B(a), ba);
}

TEST(Chains, LambdaComplexOfEtaIsAcyclic)
{
	auto h = lambda_homology(EtaAlg{1}, {0, 1}, 6);
	EXPECT_EQ(h.betti, std::vector<int>(7, 0));
	EXPECT_EQ(h.dims, (std::vector<int>{1, 1, 2, 2, 3, 3, 5}));
}

TEST(Chains, LambdaComplexOfGroundFieldIsPeriodic)
{
	auto h = lambda_homology(EtaAlg{1}, {0}, 6);
	EXPECT_EQ(h.betti, (std::vector<int>{1, 0, 1, 0, 1, 0, 1}));
}

TEST(Chains, LambdaBasisRejectsEvenSuspension)
{
	EXPECT_THROW(lambda_homology(EtaAlg{-1}, {0, 1}, 2), config_error);
}

TEST(Chains, ShuffleIsAChainMapForBPrime)
{
	// b'(x sh y) = b'(x) sh y + (-1)^{|x|} x sh b'(y), |x| the total letter degree
	Rng rng(8);
	int checked = 0;
	for (int i = 0; i < 30; ++i) {
		Rng r = rng.split(uint64_t(i));
		auto x = random_homogeneous_chain(r, WAlg{1, 4, false}, kW, 3, 2, kUnreduced, 3);
		auto y = random_chain(r, MatAlg{}, kW, 3, 2, kUnreduced);
		if (x.is_zero())
			continue;
		++checked;
		long deg = 0;
		for (auto& a : x.words.begin()->first)
			deg += x.eps(a);
		auto r2 = shuffle_external(x, b_prime(y));
		r2 *= Rational(parity_sign(deg));
		EXPECT_EQ(b_prime(shuffle_external(x, y)), shuffle_external(b_prime(x), y) + r2) << "degree " << deg;
	}
	EXPECT_GT(checked, 10);
}
