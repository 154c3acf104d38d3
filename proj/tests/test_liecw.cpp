#include "dqrr/suites.hpp"

#include <gtest/gtest.h>

using namespace dqrr;

TEST(Liecw, AlgebrasSatisfyDglaAxioms)
{
	EXPECT_NO_THROW(validate(sp2_semidirect_V()));
	EXPECT_NO_THROW(validate(epsilon_extension(sp2_semidirect_V())));
	EXPECT_NO_THROW(validate(d1_tilde_eps()));
	EXPECT_NO_THROW(validate(der_w1_depth2()));
	EXPECT_EQ(der_w1_depth2().dim(), 17u);
}

TEST(Liecw, ValidateRejectsBrokenBracket)
{
	auto g = sp2_semidirect_V();
	// break antisymmetry of one bracket
	g.br[0][1] = g.zero();
	g.br[0][1][0] = 1;
	EXPECT_ANY_THROW(validate(g));
}

TEST(Liecw, DifferentialOnGeneratorsIsMinusBracket)
{
	// (d th^k)(e_a, e_b) is the structure constant c^k_ab up to one global sign
	for (auto g : {sp2_semidirect_V(), der_w1_depth2()}) {
		CE ce(g);
		int sign = 0;
		for (size_t k = 0; k < g.dim(); ++k) {
			GElem dk = ce.d(ce.alg.gen(k));
			for (size_t a = 0; a < g.dim(); ++a)
				for (size_t b = 0; b < g.dim(); ++b) {
					Rational v = ce.evaluate(dk, {int(a), int(b)});
					const Rational& c = g.br[a][b][k];
					if (sgn(c) == 0) {
						EXPECT_EQ(v, 0);
						continue;
					}
					int s = v == c ? 1 : v == -c ? -1 : 0;
					ASSERT_NE(s, 0) << g.name << " k=" << k << " a=" << a << " b=" << b;
					if (!sign)
						sign = s;
					EXPECT_EQ(s, sign);
				}
		}
		EXPECT_NE(sign, 0);
	}
}

TEST(Liecw, CartanRelations)
{
	Rng rng(41);
	for (auto g : {sp2_semidirect_V(), epsilon_extension(sp2_semidirect_V()), d1_tilde_eps(), der_w1_depth2()}) {
		CE ce(g);
		for (int i = 0; i < 3; ++i) {
			Rng r = rng.split(g.name).split(uint64_t(i));
			auto f = detail::cartan_failure(ce, r);
			EXPECT_FALSE(f) << g.name << ": " << f.value_or("");
		}
	}
}

TEST(Liecw, ChernWeilIsAChainMap)
{
	EXPECT_FALSE(detail::chern_weil_failure(sp2_semidirect_V(), sp2_trace_poly(2)));
	EXPECT_FALSE(detail::chern_weil_failure(der_w1_depth2(), sp2_trace_poly(2)));
	EXPECT_FALSE(detail::chern_weil_failure(d1_tilde_eps(), coordinate_poly(0)));
}

TEST(Liecw, TracePolynomialIsInvariant)
{
	auto g = sp2_semidirect_V();
	HData h(g);
	EXPECT_TRUE(is_invariant(h, sp2_trace_poly(2)));
}

TEST(Liecw, BasicWeilDegreeFourIsOneDimensional)
{
	Weil w(sp2_semidirect_V());
	EXPECT_EQ(basic_filter_weil(w, 4).size(), 1u);
}

TEST(Liecw, ChernCochainIndependentOfDecomposition)
{
	CE a(der_w1_depth2()), b(der_w1_depth2(3));
	auto diff = gc_sub(chern_cochain(b, sp2_trace_poly(2)), chern_cochain(a, sp2_trace_poly(2)));
	ASSERT_FALSE(diff.empty());
	auto beta = solve_coboundary(a, diff, 4);
	ASSERT_TRUE(beta.has_value());
	EXPECT_EQ(a.d(*beta), diff);
	EXPECT_TRUE(is_basic(basic_ops_ce(a), *beta));
}

TEST(Liecw, ChernCochainIsClosedAndBasic)
{
	// the complement twisted by lambda = 3 is not a subalgebra, so the curvature is nonzero
	CE ce(der_w1_depth2(3));
	auto c = chern_cochain(ce, sp2_trace_poly(2));
	EXPECT_FALSE(c.empty());
	EXPECT_TRUE(ce.d(c).empty());
	EXPECT_TRUE(is_basic(basic_ops_ce(ce), c));
}
