#pragma once

#include "dqrr/chains.hpp"
#include "dqrr/linalg.hpp"

#include <functional>
#include <map>
#include <vector>

// Exact homology of the cyclic lambda complex (b + delta) for an algebra with
// a finite key basis, by rank-nullity of the assembled differential matrices.

namespace dqrr {

struct LambdaHomology {
	std::vector<int> dims;  // dim C^lambda_n
	std::vector<int> ranks; // rank of D_n : C_n -> C_{n-1}
	std::vector<int> betti; // dim H_n
};

namespace detail {

// lambda-normalized basis words of homological degree n
template <class Alg>
std::vector<typename Chain<Alg>::Word> lambda_basis(const Alg& alg, const std::vector<typename Alg::Key>& keys, int n,
                                                    int reduced_from)
{
	using Word = typename Chain<Alg>::Word;
	Chain<Alg> all(alg, Window{-1, 1, -1, 1}, reduced_from);
	Word w;
	std::function<void(int)> rec = [&](int deg) {
		// deg = word degree of w so far
		if (!w.empty() && deg == n) {
			Chain<Alg> one(alg, all.window, reduced_from);
			one.add(w, Rational(1));
			for (auto& [nw, c] : lambda_normalize(one).words)
				all.add(nw, Rational(1));
		}
		for (auto& k : keys) {
			int e = all.eps(k);
			int next = (w.empty() ? -1 : deg) + e;
			if (e <= 0)
				throw config_error("lambda_basis: keys must have eps > 0");
			if (next > n)
				continue;
			w.push_back(k);
			rec(next);
			w.pop_back();
		}
	};
	rec(-1);
	std::vector<Word> out;
	for (auto& [nw, c] : all.words)
		out.push_back(nw);
	return out;
}

} // namespace detail

// Homology in degrees 0..max_degree; the matrix of D_{max+1} is built as well.
template <class Alg>
LambdaHomology lambda_homology(const Alg& alg, const std::vector<typename Alg::Key>& keys, int max_degree,
                               int reduced_from = 1 << 20)
{
	using Word = typename Chain<Alg>::Word;
	const Window win{-1, 1, -1, 1};
	std::vector<std::vector<Word>> basis;
	for (int n = 0; n <= max_degree + 1; ++n)
		basis.push_back(detail::lambda_basis(alg, keys, n, reduced_from));
	LambdaHomology h;
	h.ranks.assign(max_degree + 2, 0);
	for (int n = 1; n <= max_degree + 1; ++n) {
		std::map<Word, size_t> index;
		for (size_t i = 0; i < basis[n - 1].size(); ++i)
			index[basis[n - 1][i]] = i;
		// rows are images of basis words
		RMat m;
		for (auto& w : basis[n]) {
			Chain<Alg> c(alg, win, reduced_from);
			c.add(w, Rational(1));
			Chain<Alg> img = hochschild_b(c) + dga_delta(c);
			RVec row(basis[n - 1].size());
			for (auto& [iw, v] : lambda_normalize(img).words) {
				auto it = index.find(iw);
				if (it == index.end())
					throw config_error("lambda_homology: image outside the basis");
				row[it->second] = v.terms().at({0, 0});
			}
			m.push_back(std::move(row));
		}
		h.ranks[n] = basis[n - 1].empty() ? 0 : rank(m);
	}
	for (int n = 0; n <= max_degree; ++n) {
		h.dims.push_back(int(basis[n].size()));
		h.betti.push_back(h.dims[n] - h.ranks[n] - h.ranks[n + 1]);
	}
	return h;
}

} // namespace dqrr
