#include "dqrr/rng.hpp"
#include "dqrr/scalars.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dqrr;

namespace {

// Bernoulli numbers from sum_{j<=m} C(m+1, j) B_j = 0
std::vector<Rational> bernoulli(int n)
{
	std::vector<Rational> B(n + 1);
	B[0] = 1;
	for (int m = 1; m <= n; ++m) {
		Rational s = 0;
		Rational binom = 1; // C(m+1, j)
		for (int j = 0; j < m; ++j) {
			s += binom * B[j];
			binom = binom * (m + 1 - j) / (j + 1);
		}
		B[m] = -s / (m + 1);
	}
	return B;
}

TULaurent random_tu(Rng& r, Window w)
{
	TULaurent x(w);
	for (int i = 0; i < 3; ++i)
		x.add_term(r.uniform(-1, 1), r.uniform(-1, 1), r.small_rational());
	return x;
}

} // namespace

TEST(TULaurent, AdditionInsideWindowDoesNotClip)
{
	Window w{0, 1, 0, 0};
	TULaurent a(w, 1, 1);
	TULaurent s = a + a;
	EXPECT_EQ(s.coeff(1, 0), 2);
	EXPECT_FALSE(s.clipped());
}

TEST(TULaurent, ProductOutsideWindowClips)
{
	Window w{0, 1, 0, 0};
	TULaurent a(w, 1, 1);
	TULaurent p = a * a;
	EXPECT_TRUE(p.is_zero());
	EXPECT_TRUE(p.clipped());
}

TEST(TULaurent, RingAxiomsOnRandomTriples)
{
	Window w{-3, 3, -3, 3};
	Rng rng(11);
	int checked = 0;
	for (int i = 0; i < 200; ++i) {
		Rng r = rng.split(uint64_t(i));
		auto a = random_tu(r, w), b = random_tu(r, w), c = random_tu(r, w);
		auto l = (a * b) * c, rr = a * (b * c);
		auto dl = a * (b + c), dr = a * b + a * c;
		if (l.clipped() || rr.clipped() || dl.clipped() || dr.clipped())
			continue;
		++checked;
		EXPECT_EQ(l.terms(), rr.terms());
		EXPECT_EQ(dl.terms(), dr.terms());
		EXPECT_EQ((a * b).terms(), (b * a).terms());
	}
	EXPECT_EQ(checked, 200);
}

TEST(TULaurent, WindowMismatchThrows)
{
	TULaurent a(Window{0, 1, 0, 1}, 1), b(Window{0, 2, 0, 1}, 1);
	EXPECT_THROW(a + b, config_error);
}

TEST(Series, AhatMatchesBernoulliOracle)
{
	// (z/2) / sinh(z/2) = sum_k (2 - 2^{2k}) B_{2k} (z/2)^{2k} / (2k)!
	const int order = 10;
	auto B = bernoulli(order);
	auto ahat = series_expand("AHAT", order);
	for (int k = 0; 2 * k <= order; ++k) {
		Rational p4 = 1;
		for (int i = 0; i < 2 * k; ++i)
			p4 *= 2;
		Rational c = (2 - p4) * B[2 * k] / (p4 * factorial(2 * k));
		EXPECT_EQ(ahat.at(2 * k), c) << "k=" << k;
		EXPECT_EQ(ahat.at(2 * k + 1), 0);
	}
}

TEST(Series, AhatFrozenCoefficients)
{
	auto a = series_expand("AHAT", 4).univariate();
	ASSERT_EQ(a.size(), 5u);
	EXPECT_EQ(a[0], 1);
	EXPECT_EQ(a[1], 0);
	EXPECT_EQ(a[2], rat(-1, 24));
	EXPECT_EQ(a[3], 0);
	EXPECT_EQ(a[4], rat(7, 5760));
}

TEST(Series, SinhRatioAgreesWithFloatingPoint)
{
	auto s = series_expand("SINH_RATIO", 12);
	for (double z : {0.1, 0.3, 0.7}) {
		double sum = 0, zp = 1;
		for (int k = 0; k <= 12; ++k, zp *= z)
			sum += s.at(k).get_d() * zp;
		EXPECT_NEAR(sum, 2 * std::sinh(z / 2) / z, 1e-9);
	}
}

TEST(Series, ExpAgreesWithFloatingPoint)
{
	auto s = series_expand("EXP", 15);
	double sum = 0, zp = 1;
	for (int k = 0; k <= 15; ++k, zp *= 0.5)
		sum += s.at(k).get_d() * zp;
	EXPECT_NEAR(sum, std::exp(0.5), 1e-12);
}

TEST(Series, InverseTimesSeriesIsOne)
{
	auto s = series_expand("SINH_RATIO", 8).univariate();
	auto inv = series_inverse(s);
	for (size_t n = 0; n < s.size(); ++n) {
		Rational c = 0;
		for (size_t k = 0; k <= n; ++k)
			c += s[k] * inv[n - k];
		EXPECT_EQ(c, n == 0 ? 1 : 0);
	}
	EXPECT_THROW(series_inverse({Rational(0), Rational(1)}), config_error);
}

TEST(Series, ThetaFactorIsProductWithExpMinusTheta)
{
	auto f = series_expand("AHAT_INV_ETHETA_FACTOR", 6);
	auto s = series_expand("SINH_RATIO", 6);
	for (int a = 0; a <= 6; ++a)
		for (int b = 0; a + b <= 6; ++b) {
			Rational e = Rational(b % 2 ? -1 : 1) / factorial(b);
			EXPECT_EQ(f.at(a, b), s.at(a) * e);
		}
}

TEST(Series, UnknownNameThrows) { EXPECT_THROW(series_expand("COSH", 3), config_error); }

TEST(Rng, SplitStreamsAreReproducibleAndDistinct)
{
	Rng a(5), b(5);
	Rng x = a.split("alpha"), y = b.split("alpha"), z = a.split("beta");
	uint64_t vx = x.next(), vy = y.next(), vz = z.next();
	EXPECT_EQ(vx, vy);
	EXPECT_NE(vx, vz);
	Rng r(9);
	for (int i = 0; i < 1000; ++i) {
		Rational q = r.small_rational();
		EXPECT_NE(sgn(q), 0);
		EXPECT_LE(abs(q.get_num()), 9);
		EXPECT_LE(q.get_den(), 4);
	}
}
