#include "dqrr/random.hpp"
#include "dqrr/suites.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace dqrr;

namespace {

constexpr int kN = 4;
constexpr int kCap = kN + 2;

FKey key(uint8_t mask, Mono z, Mono y, int tpow) { return FKey{mask, z, y, tpow}; }

} // namespace

TEST(Fedosov, KoszulDeltaByHand)
{
	// delta(y^1 y^2) = dz^1 y^2 + y^1 dz^2
	FormalForm f(1, kCap);
	Mono y;
	y.e[0] = y.e[1] = 1;
	f.add(key(0, Mono{}, y, 0), 1);
	FormalForm expect(1, kCap);
	expect.add(key(1, Mono{}, Mono::var(1), 0), 1);
	expect.add(key(2, Mono{}, Mono::var(0), 0), 1);
	EXPECT_EQ(koszul_delta(f), expect);
	EXPECT_TRUE(koszul_delta(FormalForm(1, kCap) + ff_term(1, kCap, 0, Mono::var(0), Mono{}, 0, 1)).is_zero());
}

TEST(Fedosov, DeltaSquaredAndHomotopy)
{
	Rng rng(51);
	for (int i = 0; i < 100; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		auto f = random_formal_form(r, d, kCap, r.uniform(0, 2));
		EXPECT_TRUE(koszul_delta(koszul_delta(f)).is_zero());
		auto g = f.with_cap(kCap + 1);
		auto lhs = (koszul_delta(koszul_homotopy(g)) + koszul_homotopy(koszul_delta(g))).with_cap(kCap);
		EXPECT_EQ(lhs, f - harmonic_part(f));
		EXPECT_TRUE(koszul_homotopy(harmonic_part(f)).is_zero());
	}
}

TEST(Fedosov, TautologicalFormActsAsMinusDelta)
{
	Rng rng(52);
	for (int i = 0; i < 50; ++i) {
		Rng r = rng.split(uint64_t(i));
		int d = 1 + i % 2;
		auto f = random_formal_form(r, d, kCap, r.uniform(0, 2));
		auto ad = ff_bracket(tautological_form(d, kCap + 2), f.with_cap(kCap + 2)).t_shifted(-1).with_cap(kCap - 1);
		EXPECT_TRUE((ad + koszul_delta(f).with_cap(kCap - 1)).is_zero());
	}
}

TEST(Fedosov, ZeroThetaGivesMoyal)
{
	for (int d = 1; d <= 2; ++d) {
		auto c = fedosov_recursion(FormalForm(d, kCap), kN);
		EXPECT_TRUE((c.A_0 + c.higher).is_zero());
		EXPECT_TRUE(curvature_of_lift(c).is_zero());
		Rng rng(53);
		for (int i = 0; i < 5; ++i) {
			Rng r = rng.split(uint64_t(10 * d + i));
			FormalForm F(d, kCap), G(d, kCap);
			F.add(key(0, random_mono(r, d, 3), Mono{}, 0), r.small_rational());
			G.add(key(0, random_mono(r, d, 3), Mono{}, 0), r.small_rational());
			EXPECT_EQ(induced_star(c, F, G), base_moyal(F, G));
		}
	}
}

TEST(Fedosov, BaseMoyalCommutatorOfCoordinates)
{
	// z^1 * z^2 - z^2 * z^1 = s t
	FormalForm x(1, kCap), xi(1, kCap);
	x.add(key(0, Mono::var(0), Mono{}, 0), 1);
	xi.add(key(0, Mono::var(1), Mono{}, 0), 1);
	FormalForm expect(1, kCap);
	expect.add(key(0, Mono{}, Mono{}, 1), conv::kMoyalSign);
	EXPECT_EQ(base_moyal(x, xi) - base_moyal(xi, x), expect);
}

TEST(Fedosov, ThetaRoundTripAndResidual)
{
	for (int d = 1; d <= 2; ++d) {
		auto T = sample_theta(d, kCap);
		auto c = fedosov_recursion(T, kN);
		auto ex = curvature_of_lift(c);
		EXPECT_EQ(ex, T.below(kCap - 2).with_cap(kCap));
		EXPECT_TRUE(ff_d(ex).is_zero());
		int prev = -1;
		for (int n = 1; n <= kN; ++n) {
			int mw = mc_residual(fedosov_recursion(T, n), T).min_weight();
			EXPECT_GE(mw, n + 2);
			EXPECT_GT(mw, prev);
			prev = mw;
		}
	}
}

TEST(Fedosov, ThetaFileParsesWithOrderSign)
{
	std::ifstream in(std::string(DQRR_DATA_DIR) + "/theta_d1.json");
	ASSERT_TRUE(in);
	auto T = theta_from_json(nlohmann::json::parse(in), kCap);
	EXPECT_EQ(T.d, 1);
	EXPECT_EQ(T.terms.size(), 2u);
	auto flipped = theta_from_json(nlohmann::json::parse(R"({"d":1,"terms":[{"dz":[2,1],"c":"3"}]})"), kCap);
	auto plain = theta_from_json(nlohmann::json::parse(R"({"d":1,"terms":[{"dz":[1,2],"c":"3"}]})"), kCap);
	EXPECT_EQ(flipped + plain, FormalForm(1, kCap));
	EXPECT_THROW(theta_from_json(nlohmann::json::parse(R"({"d":1,"terms":[{"dz":[1,1],"c":"1"}]})"), kCap), config_error);
	EXPECT_THROW(theta_from_json(nlohmann::json::parse(R"({"d":1,"terms":[{"dz":[1,3],"c":"1"}]})"), kCap), config_error);
}

TEST(Fedosov, TrivialGaugeIsIdentity)
{
	auto c = fedosov_recursion(sample_theta(1, kCap), kN);
	auto g = gauge_transform(FormalForm(1, kCap), c);
	EXPECT_EQ(g.lift(), c.lift());
	auto cert = gauge_solve(c, c);
	EXPECT_TRUE(cert.ok);
	EXPECT_TRUE(cert.levels.empty());
}

TEST(Fedosov, GaugePreservesTheta)
{
	Rng rng(54);
	for (int d = 1; d <= 2; ++d) {
		auto T = sample_theta(d, kCap);
		auto c = fedosov_recursion(T, kN);
		auto ex = curvature_of_lift(c);
		for (int i = 0; i < 4; ++i) {
			Rng r = rng.split(uint64_t(10 * d + i));
			FormalForm X(d, kCap);
			FKey k{0, random_mono(r, d, 1), random_mono(r, d, 3), 0};
			while (X.weight(k) < 3)
				++k.tpow;
			X.add(k, r.small_rational());
			auto g = gauge_transform(X, c);
			EXPECT_EQ(curvature_of_lift(g), ex);
			EXPECT_GE(mc_residual(g, T).min_weight(), kN + 1);
		}
	}
}

TEST(Fedosov, GaugeSolveRelatesNormalizations)
{
	Rng rng(55);
	for (int d = 1; d <= 2; ++d) {
		auto T = sample_theta(d, kCap);
		auto c = fedosov_recursion(T, kN);
		for (int i = 0; i < 4; ++i) {
			Rng r = rng.split(uint64_t(10 * d + i));
			FormalForm s(d, kCap);
			FKey k{0, random_mono(r, d, 1), random_mono(r, d, 4), 0};
			while (k.y.degree(d) < 2)
				k.y.e[r.uniform(0, 2 * d - 1)]++;
			while (s.weight(k) < 4)
				++k.tpow;
			s.add(k, r.small_rational());
			auto other = fedosov_recursion(T, kN, &s);
			auto cert = gauge_solve(c, other);
			EXPECT_TRUE(cert.ok) << cert.failure;
			EXPECT_EQ(curvature_of_lift(other), curvature_of_lift(c));
		}
	}
}

TEST(Fedosov, InvalidInputsThrow)
{
	auto c = fedosov_recursion(sample_theta(1, kCap), kN);
	FormalForm low(1, kCap);
	low.add(key(0, Mono{}, Mono::var(0), 0), 1);
	EXPECT_THROW(gauge_transform(low, c), config_error);

	FormalForm one_form(1, kCap);
	one_form.add(key(1, Mono::var(1), Mono{}, -1), 1);
	EXPECT_THROW(fedosov_recursion(one_form, kN), config_error);

	FormalForm open(2, kCap);
	open.add(key(2 | 4, Mono::var(0), Mono{}, -1), 1);
	EXPECT_THROW(fedosov_recursion(open, kN), config_error);

	FormalForm linear(1, kCap);
	linear.add(key(0, Mono{}, Mono::var(0), 2), 1);
	EXPECT_THROW(fedosov_recursion(sample_theta(1, kCap), kN, &linear), config_error);

	EXPECT_THROW(fedosov_recursion(sample_theta(1, kCap), 0), config_error);
	EXPECT_THROW(FormalForm(3, kCap), config_error);
}

TEST(Fedosov, InducedStarIsAssociative)
{
	auto c = fedosov_recursion(sample_theta(1, kCap), kN);
	Rng rng(56);
	for (int i = 0; i < 3; ++i) {
		Rng r = rng.split(uint64_t(i));
		FormalForm F(1, kCap), G(1, kCap), H(1, kCap);
		F.add(key(0, random_mono(r, 1, 2), Mono{}, 0), r.small_rational());
		G.add(key(0, random_mono(r, 1, 2), Mono{}, 0), r.small_rational());
		H.add(key(0, random_mono(r, 1, 2), Mono{}, 0), r.small_rational());
		auto lhs = induced_star(c, induced_star(c, F, G), H);
		auto rhs = induced_star(c, F, induced_star(c, G, H));
		EXPECT_TRUE((lhs - rhs).below(kCap).is_zero());
	}
}
