#pragma once

#include "dqrr/scalars.hpp"

#include <optional>
#include <vector>

// Dense exact linear algebra over Q. Sizes here stay in the low thousands,
// so plain row reduction is enough.

namespace dqrr {

using RVec = std::vector<Rational>;
using RMat = std::vector<RVec>;

struct RowEchelon {
	RMat m;
	std::vector<int> pivots; // pivot column per nonzero row
};

inline RowEchelon row_reduce(RMat m)
{
	RowEchelon e;
	if (m.empty())
		return e;
	const size_t rows = m.size(), cols = m[0].size();
	size_t r = 0;
	for (size_t c = 0; c < cols && r < rows; ++c) {
		size_t p = r;
		while (p < rows && sgn(m[p][c]) == 0)
			++p;
		if (p == rows)
			continue;
		std::swap(m[p], m[r]);
		Rational inv = 1 / m[r][c];
		for (size_t j = c; j < cols; ++j)
			m[r][j] *= inv;
		for (size_t i = 0; i < rows; ++i) {
			if (i == r || sgn(m[i][c]) == 0)
				continue;
			Rational f = m[i][c];
			for (size_t j = c; j < cols; ++j)
				if (sgn(m[r][j]))
					m[i][j] -= f * m[r][j];
		}
		e.pivots.push_back(int(c));
		++r;
	}
	m.resize(r);
	e.m = std::move(m);
	return e;
}

inline int rank(const RMat& m) { return int(row_reduce(m).pivots.size()); }

// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
inline RMat nullspace(const RMat& m, size_t cols)
{
	RowEchelon e = row_reduce(m);
	std::vector<int> is_pivot(cols, -1);
	for (size_t i = 0; i < e.pivots.size(); ++i)
		is_pivot[e.pivots[i]] = int(i);
	RMat basis;
	for (size_t f = 0; f < cols; ++f) {
		if (is_pivot[f] >= 0)
			continue;
		RVec v(cols);
		v[f] = 1;
		for (size_t i = 0; i < e.pivots.size(); ++i)
			v[e.pivots[i]] = -e.m[i][f];
		basis.push_back(std::move(v));
	}
	return basis;
}

// Some x with m x = b, or nothing when inconsistent.
inline std::optional<RVec> solve(const RMat& m, const RVec& b)
{
	const size_t cols = m.empty() ? 0 : m[0].size();
	RMat aug = m;
	for (size_t i = 0; i < aug.size(); ++i)
		aug[i].push_back(b[i]);
	RowEchelon e = row_reduce(aug);
	RVec x(cols);
	for (size_t i = 0; i < e.pivots.size(); ++i) {
		if (size_t(e.pivots[i]) == cols)
			return std::nullopt;
		x[e.pivots[i]] = e.m[i][cols];
	}
	return x;
}

} // namespace dqrr
