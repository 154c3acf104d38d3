#pragma once

#include "dqrr/gcalg.hpp"
#include "dqrr/linalg.hpp"
#include "dqrr/weyl.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <map>
#include <string>
#include <vector>

// Relative Lie algebra cochains of finite-dimensional DG Lie algebras,
// Cartan calculus, connection and curvature, c_P, the Weil algebra and
// the Chern-Weil map with coefficients in homotopically constant modules.
//
// Cochains are elements of the free graded-commutative algebra on the
// dual basis th^a, deg th^a = 1 - deg e_a. Evaluation:
//   c(X_1, .., X_p) = iota_{X_p} .. iota_{X_1} c.

namespace dqrr {

struct FinDGLA {
	std::string name;
	std::vector<std::string> names;
	std::vector<int> deg;
	std::vector<std::vector<RVec>> br; // br[a][b] = [e_a, e_b]
	std::vector<RVec> dif;             // dif[a] = delta e_a
	std::vector<int> h;                // basis indices spanning the subalgebra h
	RMat complement;                   // vectors spanning an h-stable complement V
	std::vector<std::vector<int>> grading; // optional additive gradings per basis element

	size_t dim() const { return names.size(); }
	RVec zero() const { return RVec(dim()); }
	RVec basis(size_t a) const
	{
		RVec v = zero();
		v[a] = 1;
		return v;
	}
	RVec bracket(const RVec& x, const RVec& y) const
	{
		RVec r = zero();
		for (size_t a = 0; a < dim(); ++a) {
			if (sgn(x[a]) == 0)
				continue;
			for (size_t b = 0; b < dim(); ++b) {
				if (sgn(y[b]) == 0)
					continue;
				Rational s = x[a] * y[b];
				for (size_t k = 0; k < dim(); ++k)
					if (sgn(br[a][b][k]))
						r[k] += s * br[a][b][k];
			}
		}
		return r;
	}
	RVec delta(const RVec& x) const
	{
		RVec r = zero();
		for (size_t a = 0; a < dim(); ++a)
			if (sgn(x[a]))
				for (size_t k = 0; k < dim(); ++k)
					r[k] += x[a] * dif[a][k];
		return r;
	}
	bool ungraded() const
	{
		for (size_t a = 0; a < dim(); ++a)
			if (deg[a] != 0)
				return false;
		return true;
	}
};

namespace detail {

inline int pm(long e) { return e % 2 ? -1 : 1; }

inline RVec axpy(RVec y, const Rational& s, const RVec& x)
{
	for (size_t i = 0; i < y.size(); ++i)
		y[i] += s * x[i];
	return y;
}

inline bool is_zero(const RVec& v)
{
	for (auto& c : v)
		if (sgn(c))
			return false;
	return true;
}

// degree of a homogeneous vector, or the degree of its first entry
inline int vdeg(const FinDGLA& g, const RVec& v)
{
	for (size_t a = 0; a < v.size(); ++a)
		if (sgn(v[a]))
			return g.deg[a];
	return 0;
}

inline RMat h_and_complement(const FinDGLA& g)
{
	RMat cols;
	for (int i : g.h)
		cols.push_back(g.basis(i));
	for (auto& v : g.complement)
		cols.push_back(v);
	return cols;
}

} // namespace detail

// Structural checks; throws config_error naming the first failure.
inline void validate(const FinDGLA& g)
{
	const size_t n = g.dim();
	if (g.deg.size() != n || g.br.size() != n || g.dif.size() != n)
		throw config_error(g.name + ": inconsistent sizes");
	for (size_t a = 0; a < n; ++a)
		for (size_t b = 0; b < n; ++b) {
			RVec ab = g.br[a][b], ba = g.br[b][a];
			for (size_t k = 0; k < n; ++k) {
				if (sgn(ab[k]) && g.deg[k] != g.deg[a] + g.deg[b])
					throw config_error(g.name + ": bracket not homogeneous");
				if (ab[k] != -detail::pm(long(g.deg[a]) * g.deg[b]) * ba[k])
					throw config_error(g.name + ": bracket not graded antisymmetric");
			}
		}
	for (size_t a = 0; a < n; ++a)
		for (size_t k = 0; k < n; ++k)
			if (sgn(g.dif[a][k]) && g.deg[k] != g.deg[a] + 1)
				throw config_error(g.name + ": differential not of degree 1");
	for (size_t a = 0; a < n; ++a) {
		if (!detail::is_zero(g.delta(g.dif[a])))
			throw config_error(g.name + ": delta^2 != 0");
		for (size_t b = 0; b < n; ++b) {
			RVec x = g.basis(a), y = g.basis(b);
			RVec lhs = g.delta(g.br[a][b]);
			RVec rhs = detail::axpy(g.bracket(g.dif[a], y), detail::pm(g.deg[a]), g.bracket(x, g.dif[b]));
			if (lhs != rhs)
				throw config_error(g.name + ": delta is not a derivation");
			for (size_t c = 0; c < n; ++c) {
				RVec z = g.basis(c);
				RVec l = g.bracket(x, g.br[b][c]);
				RVec r = detail::axpy(g.bracket(g.br[a][b], z), detail::pm(long(g.deg[a]) * g.deg[b]), g.bracket(y, g.bracket(x, z)));
				if (l != r)
					throw config_error(g.name + ": Jacobi fails");
			}
		}
	}
	// h is a DG subalgebra, V is h-stable, h + V = g
	auto in_span = [&](const RMat& span, const RVec& v) {
		RMat m = span;
		int r0 = rank(m);
		m.push_back(v);
		return rank(m) == r0;
	};
	RMat hs;
	for (int i : g.h)
		hs.push_back(g.basis(i));
	for (int i : g.h) {
		if (!hs.empty() && !in_span(hs, g.dif[i]) && !detail::is_zero(g.dif[i]))
			throw config_error(g.name + ": h not closed under delta");
		for (int j : g.h)
			if (!detail::is_zero(g.br[i][j]) && !in_span(hs, g.br[i][j]))
				throw config_error(g.name + ": h not a subalgebra");
		for (auto& v : g.complement)
			if (!detail::is_zero(g.bracket(g.basis(i), v)) && !in_span(g.complement, g.bracket(g.basis(i), v)))
				throw config_error(g.name + ": complement not h-stable");
	}
	if (rank(detail::h_and_complement(g)) != int(n) || g.h.size() + g.complement.size() != n)
		throw config_error(g.name + ": h + V is not a decomposition");
	for (auto& gr : g.grading) {
		if (gr.size() != n)
			throw config_error(g.name + ": grading size");
		for (size_t a = 0; a < n; ++a)
			for (size_t b = 0; b < n; ++b)
				for (size_t k = 0; k < n; ++k)
					if (sgn(g.br[a][b][k]) && gr[k] != gr[a] + gr[b])
						throw config_error(g.name + ": grading not additive");
	}
}

// ---- Chevalley-Eilenberg cochains with trivial coefficients ----

inline GCAlg cochain_alg(const FinDGLA& g)
{
	GCAlg c;
	for (size_t a = 0; a < g.dim(); ++a) {
		c.deg.push_back(1 - g.deg[a]);
		c.names.push_back("th_" + g.names[a]);
	}
	return c;
}

// Q th^k = -1/2 sum (-1)^{|a| deg th^b} c^k_ab th^a th^b + sum (-1)^{deg th^a} d^k_a th^a.
// In the graded case the Cartan relations read
//   [Q, iota_a] = L_a - iota_{delta a},  [Q, L_a] = L_{delta a},  [L_a, iota_b] = (-1)^{|a|} iota_{[a,b]}.
struct CE {
	FinDGLA g;
	GCAlg alg;
	std::vector<GElem> q_img;                // Q on generators
	std::vector<std::vector<GElem>> lie_img; // L_a on generators

	explicit CE(FinDGLA gg) : g(std::move(gg)), alg(cochain_alg(g))
	{
		const size_t n = g.dim();
		q_img.assign(n, {});
		lie_img.assign(n, std::vector<GElem>(n));
		for (size_t a = 0; a < n; ++a)
			for (size_t b = 0; b < n; ++b) {
				GElem ab = gc_mul(alg, alg.gen(a), alg.gen(b));
				for (size_t k = 0; k < n; ++k) {
					const Rational& c = g.br[a][b][k];
					if (sgn(c) == 0)
						continue;
					gc_add(q_img[k], ab, Rational(-1, 2) * c * detail::pm(long(g.deg[a]) * alg.deg[b]));
					gc_add(lie_img[a][k], alg.gen(b), -c * detail::pm(long(g.deg[a]) * (alg.deg[b] + 1)));
				}
			}
		for (size_t a = 0; a < n; ++a)
			for (size_t k = 0; k < n; ++k)
				if (sgn(g.dif[a][k]))
					gc_add(q_img[k], alg.gen(a), g.dif[a][k] * detail::pm(alg.deg[a]));
	}

	GElem d(const GElem& x) const { return gc_derivation(alg, 1, q_img, x); }
	GElem iota(size_t a, const GElem& x) const { return gc_partial(alg, a, x); }
	GElem lie(size_t a, const GElem& x) const { return gc_derivation(alg, g.deg[a], lie_img[a], x); }
	// c(X_1..X_p) for basis elements
	Rational evaluate(const GElem& c, const std::vector<int>& args) const
	{
		GElem x = c;
		for (int a : args)
			x = iota(a, x);
		auto it = x.find(alg.one());
		return it == x.end() ? Rational(0) : it->second;
	}
	// iota and L for a general element of g
	GElem iota_v(const RVec& v, const GElem& x) const
	{
		GElem r;
		for (size_t a = 0; a < g.dim(); ++a)
			if (sgn(v[a]))
				gc_add(r, iota(a, x), v[a]);
		return r;
	}
	GElem lie_v(const RVec& v, const GElem& x) const
	{
		GElem r;
		for (size_t a = 0; a < g.dim(); ++a)
			if (sgn(v[a]))
				gc_add(r, lie(a, x), v[a]);
		return r;
	}
};

// Graded commutator [P, Q] of two operators of degrees p, q.
inline GElem gc_commutator(const std::function<GElem(const GElem&)>& P, int p,
                           const std::function<GElem(const GElem&)>& Q, int q, const GElem& x)
{
	GElem r = P(Q(x));
	gc_add(r, Q(P(x)), -detail::pm(long(p) * q));
	return r;
}

// ---- h-valued cochains ----

// index of each h basis element inside g, and h structure constants in the h basis
struct HData {
	std::vector<int> idx;
	std::vector<std::vector<RVec>> c; // c[i][j] = [h_i, h_j] in h coordinates

	explicit HData(const FinDGLA& g) : idx(g.h)
	{
		const size_t m = idx.size();
		c.assign(m, std::vector<RVec>(m, RVec(m)));
		for (size_t i = 0; i < m; ++i)
			for (size_t j = 0; j < m; ++j)
				for (size_t k = 0; k < m; ++k)
					c[i][j][k] = g.br[idx[i]][idx[j]][idx[k]];
	}
	size_t size() const { return idx.size(); }
};

using HCochain = std::vector<GElem>; // component k is the coefficient of h_k

// [phi (x) h_i, psi (x) h_j] = phi psi (x) [h_i, h_j]
inline HCochain h_bracket(const GCAlg& alg, const HData& h, const HCochain& x, const HCochain& y)
{
	HCochain r(h.size());
	for (size_t i = 0; i < h.size(); ++i)
		for (size_t j = 0; j < h.size(); ++j) {
			if (x[i].empty() || y[j].empty())
				continue;
			GElem p = gc_mul(alg, x[i], y[j]);
			for (size_t k = 0; k < h.size(); ++k)
				if (sgn(h.c[i][j][k]))
					gc_add(r[k], p, h.c[i][j][k]);
		}
	return r;
}

// A(X) = projection of X to h along V
inline HCochain connection_A(const CE& ce)
{
	const FinDGLA& g = ce.g;
	HData h(g);
	RMat cols = detail::h_and_complement(g);
	// solve sum_j y_j cols_j = e_b
	RMat m(g.dim(), RVec(g.dim()));
	for (size_t j = 0; j < cols.size(); ++j)
		for (size_t i = 0; i < g.dim(); ++i)
			m[i][j] = cols[j][i];
	HCochain A(h.size());
	for (size_t b = 0; b < g.dim(); ++b) {
		auto y = solve(m, g.basis(b));
		if (!y)
			throw config_error(g.name + ": decomposition not invertible");
		for (size_t k = 0; k < h.size(); ++k)
			if (sgn((*y)[k]))
				gc_add(A[k], ce.alg.gen(b), (*y)[k]);
	}
	return A;
}

// R = dA + 1/2 [A, A]
inline HCochain curvature_R(const CE& ce)
{
	HData h(ce.g);
	HCochain A = connection_A(ce);
	HCochain AA = h_bracket(ce.alg, h, A, A);
	HCochain R(h.size());
	for (size_t k = 0; k < h.size(); ++k) {
		R[k] = ce.d(A[k]);
		gc_add(R[k], AA[k], Rational(1, 2));
	}
	return R;
}

// Symmetric multilinear form on h: values on sorted index tuples.
struct InvPoly {
	int m = 0;
	std::map<std::vector<int>, Rational> val;

	Rational at(std::vector<int> k) const
	{
		std::sort(k.begin(), k.end());
		auto it = val.find(k);
		return it == val.end() ? Rational(0) : it->second;
	}
};

inline bool is_invariant(const HData& h, const InvPoly& P)
{
	const int n = int(h.size());
	std::vector<int> k(P.m);
	std::function<bool(int)> rec = [&](int pos) -> bool {
		if (pos == P.m) {
			for (int x = 0; x < n; ++x) {
				Rational s = 0;
				for (int i = 0; i < P.m; ++i)
					for (int j = 0; j < n; ++j) {
						const Rational& c = h.c[x][k[i]][j];
						if (sgn(c) == 0)
							continue;
						auto kk = k;
						kk[i] = j;
						s += c * P.at(kk);
					}
				if (sgn(s))
					return false;
			}
			return true;
		}
		for (int v = 0; v < n; ++v) {
			k[pos] = v;
			if (!rec(pos + 1))
				return false;
		}
		return true;
	};
	return rec(0);
}

// c_P = P(R, .., R)
inline GElem chern_cochain(const CE& ce, const InvPoly& P)
{
	HData h(ce.g);
	if (!is_invariant(h, P))
		throw config_error("chern_cochain: P is not h-invariant");
	HCochain R = curvature_R(ce);
	GElem r;
	const int n = int(h.size());
	std::vector<int> k(P.m);
	std::function<void(int, GElem)> rec = [&](int pos, GElem acc) {
		if (pos == P.m) {
			Rational v = P.at(k);
			if (sgn(v))
				gc_add(r, acc, v);
			return;
		}
		for (int j = 0; j < n; ++j) {
			if (R[j].empty())
				continue;
			k[pos] = j;
			rec(pos + 1, gc_mul(ce.alg, acc, R[j]));
		}
	};
	rec(0, ce.alg.unit());
	return r;
}

// ---- Weil algebra of h: generators A^k (deg 1), R^k (deg 2) ----

struct Weil {
	HData h;
	GCAlg alg;
	std::vector<GElem> d_img;

	explicit Weil(const FinDGLA& g) : h(g)
	{
		const size_t m = h.size();
		for (size_t k = 0; k < m; ++k) {
			alg.deg.push_back(1);
			alg.names.push_back("A_" + g.names[h.idx[k]]);
		}
		for (size_t k = 0; k < m; ++k) {
			alg.deg.push_back(2);
			alg.names.push_back("R_" + g.names[h.idx[k]]);
		}
		d_img.assign(2 * m, {});
		// dA = R - 1/2 [A, A];  dR = -[A, R]
		for (size_t k = 0; k < m; ++k)
			gc_add(d_img[k], alg.gen(m + k));
		for (size_t i = 0; i < m; ++i)
			for (size_t j = 0; j < m; ++j)
				for (size_t k = 0; k < m; ++k) {
					const Rational& c = h.c[i][j][k];
					if (sgn(c) == 0)
						continue;
					gc_add(d_img[k], gc_mul(alg, alg.gen(i), alg.gen(j)), Rational(-1, 2) * c);
					gc_add(d_img[m + k], gc_mul(alg, alg.gen(i), alg.gen(m + j)), -c);
				}
	}
	size_t A(size_t k) const { return k; }
	size_t R(size_t k) const { return h.size() + k; }

	GElem d(const GElem& x) const { return gc_derivation(alg, 1, d_img, x); }
	GElem iota(size_t a, const GElem& x) const
	{
		std::vector<GElem> img(alg.size());
		img[A(a)] = alg.unit();
		return gc_derivation(alg, -1, img, x);
	}
	GElem lie(size_t a, const GElem& x) const
	{
		// coadjoint: L_a A^k = -c^k_{ab} A^b, same on R
		std::vector<GElem> img(alg.size());
		for (size_t b = 0; b < h.size(); ++b)
			for (size_t k = 0; k < h.size(); ++k) {
				const Rational& c = h.c[a][b][k];
				if (sgn(c) == 0)
					continue;
				gc_add(img[A(k)], alg.gen(A(b)), -c);
				gc_add(img[R(k)], alg.gen(R(b)), -c);
			}
		return gc_derivation(alg, 0, img, x);
	}
	// R-monomial for a symmetric form: P(R, .., R)
	GElem polynomial(const InvPoly& P) const
	{
		GElem r;
		const int n = int(h.size());
		std::vector<int> k(P.m);
		std::function<void(int, GElem)> rec = [&](int pos, GElem acc) {
			if (pos == P.m) {
				Rational v = P.at(k);
				if (sgn(v))
					gc_add(r, acc, v);
				return;
			}
			for (int j = 0; j < n; ++j) {
				k[pos] = j;
				rec(pos + 1, gc_mul(alg, acc, alg.gen(R(j))));
			}
		};
		rec(0, alg.unit());
		return r;
	}
};

// Chern-Weil: the algebra map W(h) -> C(g), A -> A, R -> R.
inline std::vector<GElem> cw_images(const CE& ce, const Weil& w)
{
	HCochain A = connection_A(ce), R = curvature_R(ce);
	std::vector<GElem> img(w.alg.size());
	for (size_t k = 0; k < w.h.size(); ++k) {
		img[w.A(k)] = A[k];
		img[w.R(k)] = R[k];
	}
	return img;
}

inline GElem chern_weil(const CE& ce, const Weil& w, const std::vector<GElem>& img, const GElem& x)
{
	return gc_substitute(w.alg, ce.alg, img, x);
}

// ---- basic elements ----

using LinOp = std::function<GElem(const GElem&)>;

// Basis of the common kernel of `ops` on the span of `monos`.
inline std::vector<GElem> kernel_span(const std::vector<GMono>& monos, const std::vector<LinOp>& ops)
{
	std::map<GMono, size_t> row_of;
	RMat rows;
	std::vector<std::vector<std::pair<size_t, Rational>>> cols(monos.size());
	size_t nrows = 0;
	for (size_t j = 0; j < monos.size(); ++j) {
		GElem e = {{monos[j], Rational(1)}};
		for (size_t o = 0; o < ops.size(); ++o)
			for (auto& [m, c] : ops[o](e)) {
				GMono key = m;
				key.push_back(uint8_t(o));
				auto [it, fresh] = row_of.try_emplace(key, nrows);
				if (fresh)
					++nrows;
				cols[j].push_back({it->second, c});
			}
	}
	RMat mat(nrows, RVec(monos.size()));
	for (size_t j = 0; j < monos.size(); ++j)
		for (auto& [i, c] : cols[j])
			mat[i][j] += c;
	std::vector<GElem> out;
	for (auto& v : nullspace(mat, monos.size())) {
		GElem e;
		for (size_t j = 0; j < monos.size(); ++j)
			gc_add(e, monos[j], v[j]);
		out.push_back(e);
	}
	return out;
}

inline std::vector<LinOp> basic_ops_weil(const Weil& w)
{
	std::vector<LinOp> ops;
	for (size_t a = 0; a < w.h.size(); ++a) {
		ops.push_back([&w, a](const GElem& x) { return w.iota(a, x); });
		ops.push_back([&w, a](const GElem& x) { return w.lie(a, x); });
	}
	return ops;
}

inline std::vector<LinOp> basic_ops_ce(const CE& ce)
{
	std::vector<LinOp> ops;
	for (int a : ce.g.h) {
		ops.push_back([&ce, a](const GElem& x) { return ce.iota(a, x); });
		ops.push_back([&ce, a](const GElem& x) { return ce.lie(a, x); });
	}
	return ops;
}

inline bool is_basic(const std::vector<LinOp>& ops, const GElem& x)
{
	for (auto& op : ops)
		if (!op(x).empty())
			return false;
	return true;
}

inline std::vector<GElem> basic_filter_weil(const Weil& w, int degree)
{
	return kernel_span(gc_monomials(w.alg, degree), basic_ops_weil(w));
}

// Monomials of C^n(g) whose multigrading equals `target` (all gradings if empty).
inline std::vector<GMono> graded_monomials(const CE& ce, int n, const std::vector<int>& target)
{
	auto all = gc_monomials(ce.alg, n);
	if (target.empty() || ce.g.grading.empty())
		return all;
	std::vector<GMono> out;
	for (auto& m : all) {
		bool ok = true;
		for (size_t gi = 0; gi < ce.g.grading.size() && ok; ++gi) {
			int s = 0;
			for (size_t a = 0; a < m.size(); ++a)
				s -= m[a] * ce.g.grading[gi][a];
			ok = s == target[gi];
		}
		if (ok)
			out.push_back(m);
	}
	return out;
}

// multigrading of a cochain monomial (dual gradings are negated)
inline std::vector<int> cochain_grading(const CE& ce, const GMono& m)
{
	std::vector<int> r;
	for (auto& gr : ce.g.grading) {
		int s = 0;
		for (size_t a = 0; a < m.size(); ++a)
			s -= m[a] * gr[a];
		r.push_back(s);
	}
	return r;
}

// Relative cochains C^n(g, h), optionally restricted to one multigrading.
inline std::vector<GElem> relative_cochains(const CE& ce, int n, const std::vector<int>& target = {})
{
	return kernel_span(graded_monomials(ce, n, target), basic_ops_ce(ce));
}

namespace detail {

inline std::optional<GElem> solve_homogeneous(const CE& ce, const GElem& c, int n, const std::vector<int>& target)
{
	auto basis = relative_cochains(ce, n - 1, target);
	std::map<GMono, size_t> row;
	std::vector<GElem> images;
	for (auto& b : basis)
		images.push_back(ce.d(b));
	for (auto& [m, v] : c)
		row.try_emplace(m, row.size());
	for (auto& im : images)
		for (auto& [m, v] : im)
			row.try_emplace(m, row.size());
	RMat mat(row.size(), RVec(basis.size()));
	RVec rhs(row.size());
	for (size_t j = 0; j < images.size(); ++j)
		for (auto& [m, v] : images[j])
			mat[row[m]][j] = v;
	for (auto& [m, v] : c)
		rhs[row[m]] = v;
	auto x = solve(mat, rhs);
	if (!x)
		return std::nullopt;
	GElem beta;
	for (size_t j = 0; j < basis.size(); ++j)
		if (sgn((*x)[j]))
			gc_add(beta, basis[j], (*x)[j]);
	return beta;
}

} // namespace detail

// Some relative (n-1)-cochain beta with d beta = c, or nothing. Solved one
// multigraded piece at a time.
inline std::optional<GElem> solve_coboundary(const CE& ce, const GElem& c, int n)
{
	std::map<std::vector<int>, GElem> pieces;
	for (auto& [m, v] : c)
		gc_add(pieces[cochain_grading(ce, m)], m, v);
	GElem beta;
	for (auto& [gr, piece] : pieces) {
		auto b = detail::solve_homogeneous(ce, piece, n, gr);
		if (!b)
			return std::nullopt;
		gc_add(beta, *b);
	}
	return beta;
}

// ---- cochains with coefficients in a DG module ----

// A DG module over the DG Lie algebra g: act(a, l) is the action of e_a
// (degree deg e_a), d the module differential. For a homotopically
// constant g-module, `iota` supplies iota_a.
template <class E>
struct DGModule {
	std::function<E(size_t, const E&)> act;
	std::function<E(const E&)> d;
	std::function<E(size_t, const E&)> iota;
	std::function<E(const E&, const Rational&)> scale;
	std::function<void(E&, const E&)> add;
	std::function<bool(const E&)> is_zero;
};

template <class E>
using MCochain = std::map<GMono, E>;

template <class E>
void mc_add(const DGModule<E>& M, MCochain<E>& c, const GMono& m, const E& v)
{
	if (M.is_zero(v))
		return;
	auto [it, fresh] = c.try_emplace(m, v);
	if (!fresh) {
		M.add(it->second, v);
		if (M.is_zero(it->second))
			c.erase(it);
	}
}

template <class E>
void mc_add(const DGModule<E>& M, MCochain<E>& c, const MCochain<E>& o, const Rational& s = 1)
{
	for (auto& [m, v] : o)
		mc_add(M, c, m, M.scale(v, s));
}

// phi (x) x for a scalar cochain phi, placed on the left
template <class E>
MCochain<E> mc_cup(const DGModule<E>& M, const GCAlg& alg, const GElem& phi, const MCochain<E>& x)
{
	MCochain<E> r;
	for (auto& [p, cp] : phi)
		for (auto& [m, v] : x) {
			int s = gc_mono_sign(alg, p, m);
			if (!s)
				continue;
			GMono n(m.size());
			for (size_t i = 0; i < n.size(); ++i)
				n[i] = p[i] + m[i];
			mc_add(M, r, n, M.scale(v, cp * s));
		}
	return r;
}

// D(th^m (x) l) = Q th^m (x) l + sum_a (-1)^{|m|+|e_a|} th^m th^a (x) e_a l + (-1)^|m| th^m (x) dl
template <class E>
MCochain<E> mc_d(const CE& ce, const DGModule<E>& M, const MCochain<E>& c)
{
	MCochain<E> r;
	for (auto& [m, l] : c) {
		GElem one = {{m, Rational(1)}};
		for (auto& [n, q] : ce.d(one))
			mc_add(M, r, n, M.scale(l, q));
		int sm = detail::pm(ce.alg.degree(m));
		for (size_t a = 0; a < ce.g.dim(); ++a) {
			E al = M.act(a, l);
			if (M.is_zero(al))
				continue;
			for (auto& [n, q] : gc_mul(ce.alg, one, ce.alg.gen(a)))
				mc_add(M, r, n, M.scale(al, q * sm * detail::pm(ce.g.deg[a])));
		}
		E dl = M.d(l);
		if (!M.is_zero(dl))
			mc_add(M, r, m, M.scale(dl, sm));
	}
	return r;
}

template <class E>
MCochain<E> mc_iota(const CE& ce, const DGModule<E>& M, size_t a, const MCochain<E>& c)
{
	MCochain<E> r;
	for (auto& [m, l] : c)
		for (auto& [n, q] : ce.iota(a, {{m, Rational(1)}}))
			mc_add(M, r, n, M.scale(l, q));
	return r;
}

template <class E>
MCochain<E> mc_lie(const CE& ce, const DGModule<E>& M, size_t a, const MCochain<E>& c)
{
	MCochain<E> r;
	for (auto& [m, l] : c) {
		for (auto& [n, q] : ce.lie(a, {{m, Rational(1)}}))
			mc_add(M, r, n, M.scale(l, q));
		E al = M.act(a, l);
		mc_add(M, r, m, M.scale(al, detail::pm(long(ce.g.deg[a]) * ce.alg.degree(m))));
	}
	return r;
}

template <class E>
bool mc_equal(const DGModule<E>& M, const MCochain<E>& x, const MCochain<E>& y)
{
	MCochain<E> d = x;
	mc_add(M, d, y, -1);
	return d.empty();
}

// phi_l = sum_p lambda^p, lambda^p(X_1..X_p) = iota_{X_p} .. iota_{X_1} l
template <class E>
MCochain<E> phi_l(const CE& ce, const DGModule<E>& M, const E& l, int max_p)
{
	if (!M.iota)
		throw config_error("phi_l: module has no iota");
	if (!ce.g.ungraded())
		throw config_error("phi_l: g must be concentrated in degree 0");
	MCochain<E> cur;
	mc_add(M, cur, ce.alg.one(), l);
	MCochain<E> total = cur;
	for (int p = 1; p <= max_p && !cur.empty(); ++p) {
		MCochain<E> next;
		for (auto& [m, v] : cur)
			for (size_t a = 0; a < ce.g.dim(); ++a) {
				E iv = M.iota(a, v);
				if (M.is_zero(iv))
					continue;
				for (auto& [n, q] : gc_mul(ce.alg, {{m, Rational(1)}}, ce.alg.gen(a)))
					mc_add(M, next, n, M.scale(iv, q / p));
			}
		mc_add(M, total, next);
		cur = std::move(next);
	}
	return total;
}

// w (x) l -> CW(w) cup phi_l
template <class E>
MCochain<E> cw_with_coefficients(const CE& ce, const Weil& w, const DGModule<E>& M, const GElem& x, const E& l, int max_p)
{
	auto img = cw_images(ce, w);
	return mc_cup(M, ce.alg, chern_weil(ce, w, img, x), phi_l(ce, M, l, max_p));
}

// The cochain algebra C(g) as a homotopically constant g-module.
inline DGModule<GElem> self_module(const CE& ce)
{
	DGModule<GElem> M;
	M.act = [&ce](size_t a, const GElem& x) { return ce.lie(a, x); };
	M.d = [&ce](const GElem& x) { return ce.d(x); };
	M.iota = [&ce](size_t a, const GElem& x) { return ce.iota(a, x); };
	M.scale = [](const GElem& x, const Rational& s) { return gc_scaled(x, s); };
	M.add = [](GElem& x, const GElem& y) { gc_add(x, y); };
	M.is_zero = [](const GElem& x) { return x.empty(); };
	return M;
}

// ---- constructions ----

// g[eps] = (g, delta) (x) (k[eps]/eps^2, d/deps), deg eps = -1. Basis: e_a, then eps e_a.
// The module extension lets eps e_a act by iota_a.
inline FinDGLA epsilon_extension(const FinDGLA& g)
{
	const size_t n = g.dim();
	FinDGLA r;
	r.name = g.name + "[eps]";
	for (size_t a = 0; a < n; ++a) {
		r.names.push_back(g.names[a]);
		r.deg.push_back(g.deg[a]);
	}
	for (size_t a = 0; a < n; ++a) {
		r.names.push_back("eps" + g.names[a]);
		r.deg.push_back(g.deg[a] - 1);
	}
	r.br.assign(2 * n, std::vector<RVec>(2 * n, RVec(2 * n)));
	r.dif.assign(2 * n, RVec(2 * n));
	for (size_t a = 0; a < n; ++a)
		for (size_t b = 0; b < n; ++b)
			for (size_t k = 0; k < n; ++k) {
				const Rational& c = g.br[a][b][k];
				if (sgn(c) == 0)
					continue;
				r.br[a][b][k] = c;
				// [X, eps Y] = (-1)^|X| eps [X, Y];  [eps X, Y] = eps [X, Y]
				r.br[a][n + b][n + k] = c * detail::pm(g.deg[a]);
				r.br[n + a][b][n + k] = c;
			}
	// d(eps X) = X - eps delta X
	for (size_t a = 0; a < n; ++a) {
		for (size_t k = 0; k < n; ++k) {
			r.dif[a][k] = g.dif[a][k];
			r.dif[n + a][n + k] = -g.dif[a][k];
		}
		r.dif[n + a][a] += 1;
	}
	r.h = g.h;
	for (auto& v : g.complement) {
		RVec w(2 * n);
		std::copy(v.begin(), v.end(), w.begin());
		r.complement.push_back(w);
	}
	for (size_t a = 0; a < n; ++a) {
		RVec w(2 * n);
		w[n + a] = 1;
		r.complement.push_back(w);
	}
	for (auto& gr : g.grading) {
		auto x = gr;
		x.insert(x.end(), gr.begin(), gr.end());
		r.grading.push_back(x);
	}
	return r;
}

template <class E>
DGModule<E> epsilon_module(const DGModule<E>& M, size_t n)
{
	DGModule<E> r = M;
	r.act = [M, n](size_t a, const E& l) { return a < n ? M.act(a, l) : M.iota(a - n, l); };
	r.iota = nullptr;
	return r;
}

// Lie algebra spanned by monomials f/t of W_1, bracket (1/t)[f, g] with
// constants (central) dropped and terms outside the basis discarded. The
// caller picks a basis for which this is a genuine quotient.
struct WeylBasisElem {
	Mono m;
	int tpow;
	std::string name;
};

inline FinDGLA weyl_lie(const std::string& name, const std::vector<WeylBasisElem>& basis, std::vector<int> h, RMat complement)
{
	const size_t n = basis.size();
	FinDGLA g;
	g.name = name;
	for (auto& b : basis) {
		g.names.push_back(b.name);
		g.deg.push_back(0);
	}
	g.br.assign(n, std::vector<RVec>(n, RVec(n)));
	g.dif.assign(n, RVec(n));
	auto find = [&](const Mono& m, int tp) -> int {
		for (size_t k = 0; k < n; ++k)
			if (basis[k].m == m && basis[k].tpow == tp)
				return int(k);
		return -1;
	};
	for (size_t a = 0; a < n; ++a)
		for (size_t b = 0; b < n; ++b) {
			std::map<std::pair<Mono, int>, Rational> acc;
			for (auto& t : moyal_monomials(1, basis[a].m, basis[b].m))
				acc[{t.m, t.tpow + basis[a].tpow + basis[b].tpow - 1}] += t.c;
			for (auto& t : moyal_monomials(1, basis[b].m, basis[a].m))
				acc[{t.m, t.tpow + basis[a].tpow + basis[b].tpow - 1}] -= t.c;
			for (auto& [key, c] : acc) {
				if (sgn(c) == 0 || key.first.is_one())
					continue;
				int k = find(key.first, key.second);
				if (k >= 0)
					g.br[a][b][k] = c;
			}
		}
	// gradings: weight - 2 and (x-exponent - xi-exponent)
	std::vector<int> wgt, hw;
	for (auto& b : basis) {
		wgt.push_back(b.m.e[0] + b.m.e[1] + 2 * b.tpow - 2);
		hw.push_back(b.m.e[0] - b.m.e[1]);
	}
	g.grading = {wgt, hw};
	g.h = std::move(h);
	g.complement = std::move(complement);
	return g;
}

inline Mono mono_xxi(int i, int j)
{
	Mono m;
	m.e[0] = int8_t(i);
	m.e[1] = int8_t(j);
	return m;
}

// sp(2) (quadratics) acting on V (linear functions); [V, V] is central and dropped.
inline FinDGLA sp2_semidirect_V()
{
	std::vector<WeylBasisElem> b = {
		{mono_xxi(2, 0), 0, "xx"}, {mono_xxi(1, 1), 0, "xp"}, {mono_xxi(0, 2), 0, "pp"},
		{mono_xxi(1, 0), 0, "x"}, {mono_xxi(0, 1), 0, "p"}};
	RMat V = {{0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}};
	auto g = weyl_lie("sp2|V", b, {0, 1, 2}, V);
	validate(g);
	return g;
}

// F_0 Der(W_1) / F_-3: quadratics (h = sp(2)), weight 3 (cubics, t x, t xi),
// weight 4 (quartics, t * quadratics). The complement is twisted by
// t q -> t q + lambda q on the t * quadratic part.
inline FinDGLA der_w1_depth2(const Rational& lambda = 0)
{
	std::vector<WeylBasisElem> b;
	auto add = [&](int i, int j, int tp) {
		b.push_back({mono_xxi(i, j), tp, (tp ? "t" : "") + std::string(i, 'x') + std::string(j, 'p')});
	};
	for (int i = 2; i >= 0; --i)
		add(i, 2 - i, 0);
	for (int i = 3; i >= 0; --i)
		add(i, 3 - i, 0);
	add(1, 0, 1);
	add(0, 1, 1);
	for (int i = 4; i >= 0; --i)
		add(i, 4 - i, 0);
	for (int i = 2; i >= 0; --i)
		add(i, 2 - i, 1);
	const size_t n = b.size();
	RMat V;
	for (size_t a = 3; a < n; ++a) {
		RVec v(n);
		v[a] = 1;
		if (a >= n - 3)
			v[a - (n - 3)] = lambda;
		V.push_back(v);
	}
	auto g = weyl_lie(lambda == 0 ? "DerW1/F-3" : "DerW1/F-3(twisted)", b, {0, 1, 2}, V);
	validate(g);
	return g;
}

// The truncated d~_1 = Q H + Q Z: H the split sp(2) diagonal generator, Z central.
inline FinDGLA d1_tilde()
{
	FinDGLA g;
	g.name = "d1";
	g.names = {"H", "Z"};
	g.deg = {0, 0};
	g.br.assign(2, std::vector<RVec>(2, RVec(2)));
	g.dif.assign(2, RVec(2));
	g.h = {0, 1};
	validate(g);
	return g;
}

// d~_1[eps] relative to d~_1: cochains are polynomials in the even symbols
// s_H = c1 and s_Z = theta.
inline FinDGLA d1_tilde_eps()
{
	auto g = epsilon_extension(d1_tilde());
	validate(g);
	return g;
}

// P(X_1..X_m) = (1/m!) tr of the symmetrized product, for h = sp(2) spanned
// by the quadratics x^2, x xi, xi^2 (in that order) acting on (x, xi).
inline InvPoly sp2_trace_poly(int m)
{
	using M2 = std::array<Rational, 4>;
	std::vector<M2> mats;
	for (int i = 2; i >= 0; --i) {
		WeylElement q(1, 4, Window{});
		q.add(mono_xxi(i, 2 - i), 0, Rational(1));
		auto sm = sp_matrix_of_quadratic(q);
		M2 a;
		for (int r = 0; r < 2; ++r)
			for (int c = 0; c < 2; ++c) {
				auto& t = sm[r][c].terms();
				a[2 * r + c] = t.empty() ? Rational(0) : t.begin()->second;
			}
		mats.push_back(a);
	}
	auto mul = [](const M2& a, const M2& b) {
		return M2{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
	};
	InvPoly P;
	P.m = m;
	std::vector<int> k(m, 0);
	std::function<void(int, int)> rec = [&](int pos, int lo) {
		if (pos == m) {
			auto perm = k;
			Rational s = 0, cnt = 0;
			do {
				M2 acc{1, 0, 0, 1};
				for (int j : perm)
					acc = mul(acc, mats[j]);
				s += acc[0] + acc[3];
				cnt += 1;
			} while (std::next_permutation(perm.begin(), perm.end()));
			Rational v = s / cnt / factorial(m);
			if (sgn(v))
				P.val[k] = v;
			return;
		}
		for (int v = lo; v < 3; ++v) {
			k[pos] = v;
			rec(pos + 1, v);
		}
	};
	rec(0, 0);
	return P;
}

// Linear functional on h picking coordinate i.
inline InvPoly coordinate_poly(int i)
{
	InvPoly P;
	P.m = 1;
	P.val[{i}] = 1;
	return P;
}

} // namespace dqrr
