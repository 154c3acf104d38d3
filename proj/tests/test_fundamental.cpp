#include "dqrr/fundamental.hpp"
#include "dqrr/koszul.hpp"
#include "dqrr/suites.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace dqrr;

namespace {

// coefficient of c^k in 2 sinh(c/2) / c
Rational sinh_ratio_coeff(int k)
{
	if (k % 2)
		return 0;
	Rational p = 1;
	for (int i = 0; i < k; ++i)
		p *= 2;
	return Rational(1) / (p * factorial(k + 1));
}

} // namespace

TEST(Fundamental, BrOfU0IsOne)
{
	for (int d = 1; d <= 2; ++d) {
		Window w = fundamental_window(1, d);
		KChain b = Br(u0(d, w, 2 * d));
		KChain one(w);
		one.add(d - 1 + conv::kBrFactorialShift, TULaurent(w, 1));
		EXPECT_EQ(b, one) << "d=" << d;
	}
}

TEST(Fundamental, U0IsACycle)
{
	for (int d = 1; d <= 2; ++d) {
		Window w = fundamental_window(1, d);
		auto u = u0(d, w, 2 * d);
		EXPECT_TRUE(lambda_normalize(hochschild_b(u)).is_zero()) << "d=" << d;
	}
}

TEST(Fundamental, UD1IsACocycleBelowTruncation)
{
	for (int M = 1; M <= 5; ++M) {
		auto U = u_d1(M);
		EXPECT_FALSE(U.clipped());
		auto D = extended_differential(U);
		for (auto& [e, ch] : D.parts)
			if (e.first < M)
				EXPECT_TRUE(ch.is_zero()) << "M=" << M << " c1^" << e.first;
	}
}

TEST(Fundamental, BrOfUMatchesSinhOracle)
{
	const int M = 6;
	auto B = br_extended(u_d1(M));
	Window w = fundamental_window(M);
	BrTable expect;
	for (int m = 1; m <= M; ++m) {
		Rational c = sinh_ratio_coeff(m - 1);
		if (sgn(c) == 0)
			continue;
		KChain k(w);
		k.add(m, TULaurent(w, c, 0, 1 - m));
		expect[{m - 1, 0}] = k;
	}
	EXPECT_EQ(B, expect);
	EXPECT_EQ(B, br_u_series_side(M));
}

TEST(Fundamental, BrOfUAgreesWithEtaCombination)
{
	for (int M = 1; M <= 5; ++M)
		EXPECT_EQ(br_eta_combination(M), br_extended(u_d1(M))) << "M=" << M;
}

TEST(Fundamental, AhatRecoveredFromBrOfU)
{
	auto a = ahat_from_br(br_extended(u_d1(5)), 5);
	std::vector<Rational> expect{1, 0, rat(-1, 24), 0, rat(7, 5760)};
	EXPECT_EQ(a, expect);
}

TEST(Fundamental, LeadOfUD1IsU0)
{
	auto U = u_d1(3);
	auto lead = lead_part(U);
	Chain<WAlg> lead1 = lead.empty_like();
	for (auto& [wd, k] : lead.words)
		if (wd.size() == 2)
			lead1.add(wd, k);
	EXPECT_EQ(lambda_normalize(lead1), lambda_normalize(u0(1, U.window, U.alg.cap)));
}

TEST(Fundamental, GoldenBrTable)
{
	std::ifstream in(std::string(DQRR_DATA_DIR) + "/br_u_order4.json");
	ASSERT_TRUE(in);
	auto g = nlohmann::json::parse(in);
	EXPECT_EQ(g, detail::br_table_json(br_extended(u_d1(4))));
}

// The trace density of (U.1)_0 has the opposite orientation to the class
// fixed by Br(U_0) = 1; this pins the value so a change is noticed.
TEST(Fundamental, PairingLeadHasPinnedOrientation)
{
	for (int d = 1; d <= 2; ++d) {
		Window w = fundamental_window(1, d);
		auto td = trace_density_0(pairing_unit_lead(u0(d, w, 2 * d)));
		FormalDeRham minus_one(d, w);
		minus_one.add(Mono{}, 0, TULaurent(w, -1));
		EXPECT_EQ(td, minus_one) << "d=" << d;
	}
}

TEST(Fundamental, CrossAssemblyReproducesU0InDimensionTwo)
{
	Window w = fundamental_window(1, 2);
	auto a = Br(cross_assemble(lead_part(u_d1(1)), 2));
	auto b = Br(u0(2, w, 4));
	ASSERT_EQ(a.c.size(), b.c.size());
	for (auto& [n, v] : b.c)
		EXPECT_EQ(a.at(n).terms(), v.terms()) << "n=" << n;
}

TEST(Fundamental, WindowShape)
{
	Window w = fundamental_window(2, 1);
	EXPECT_EQ(w.t_min, -6);
	EXPECT_EQ(w.t_max, 6);
	EXPECT_EQ(w.u_min, -9);
	EXPECT_EQ(w.u_max, 6);
}
