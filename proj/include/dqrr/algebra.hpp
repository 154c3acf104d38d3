#pragma once

#include "dqrr/weyl.hpp"

#include "json.hpp"

#include <string>
#include <utility>
#include <vector>

// Graded algebras used as coefficients of tensor words. Every instance
// exposes a basis of keys that contains the unit, so reduction mod k is
// just dropping the unit key.
//
//   Key, name(), degree(k), unit(), is_unit(k),
//   mul(a, b, out) -> bool clipped,  delta(a, out),  key_json(k)

namespace dqrr {

template <class Key>
struct KTerm {
	Key key;
	int tpow;
	Rational c;
};

// Truncated Weyl algebra, or its symbol algebra O (commutative product).
struct WAlg {
	using Key = Mono;
	int d = 1;
	int cap = 5;
	bool commutative = false;

	std::string name() const { return (commutative ? "O" : "W") + std::to_string(d); }
	int degree(const Key&) const { return 0; }
	Key unit() const { return Mono{}; }
	bool is_unit(const Key& k) const { return k.is_one(); }
	bool mul(const Key& a, const Key& b, std::vector<KTerm<Key>>& out) const
	{
		bool clip = false;
		auto terms = commutative ? commutative_monomials(d, a, b) : moyal_monomials(d, a, b);
		for (auto& t : terms) {
			if (t.m.degree(d) > cap) {
				clip = true;
				continue;
			}
			out.push_back({t.m, t.tpow, t.c});
		}
		return clip;
	}
	void delta(const Key&, std::vector<KTerm<Key>>&) const {}
	nlohmann::json key_json(const Key& k) const
	{
		std::vector<int> v(k.e.begin(), k.e.begin() + 2 * d);
		return v;
	}
};

// k[eta] with deg eta = +1 or -1 and delta = d/d eta. Key 0 is 1, key 1 is eta.
struct EtaAlg {
	using Key = int;
	int eta_degree = 1;

	std::string name() const { return eta_degree > 0 ? "k[eta+]" : "k[eta-]"; }
	int degree(Key k) const { return k ? eta_degree : 0; }
	Key unit() const { return 0; }
	bool is_unit(Key k) const { return k == 0; }
	bool mul(Key a, Key b, std::vector<KTerm<Key>>& out) const
	{
		if (a + b <= 1)
			out.push_back({a + b, 0, Rational(1)});
		return false;
	}
	void delta(Key a, std::vector<KTerm<Key>>& out) const
	{
		if (a == 1)
			out.push_back({0, 0, Rational(1)});
	}
	nlohmann::json key_json(Key k) const { return k ? "eta" : "1"; }
};

// 2x2 matrices over Q in the basis I, E12, E21, H = E11 - E22.
struct MatAlg {
	using Key = int;
	enum { I = 0, E12 = 1, E21 = 2, H = 3 };

	std::string name() const { return "Mat2"; }
	int degree(Key) const { return 0; }
	Key unit() const { return I; }
	bool is_unit(Key k) const { return k == I; }
	bool mul(Key a, Key b, std::vector<KTerm<Key>>& out) const
	{
		auto put = [&](Key k, Rational c) { out.push_back({k, 0, c}); };
		if (a == I) {
			put(b, 1);
			return false;
		}
		if (b == I) {
			put(a, 1);
			return false;
		}
		switch (a * 4 + b) {
		case E12 * 4 + E21: put(I, rat(1, 2)); put(H, rat(1, 2)); break;
		case E21 * 4 + E12: put(I, rat(1, 2)); put(H, rat(-1, 2)); break;
		case E12 * 4 + H: put(E12, -1); break;
		case E21 * 4 + H: put(E21, 1); break;
		case H * 4 + E12: put(E12, 1); break;
		case H * 4 + E21: put(E21, -1); break;
		case H * 4 + H: put(I, 1); break;
		default: break; // E12^2 = E21^2 = 0
		}
		return false;
	}
	void delta(Key, std::vector<KTerm<Key>>&) const {}
	nlohmann::json key_json(Key k) const
	{
		static const char* n[] = {"I", "E12", "E21", "H"};
		return n[k];
	}
};

// W_d[eta], deg eta = 1, delta = d/d eta.
struct WEtaAlg {
	using Key = std::pair<Mono, int>;
	int d = 1;
	int cap = 5;

	std::string name() const { return "W" + std::to_string(d) + "[eta]"; }
	int degree(const Key& k) const { return k.second; }
	Key unit() const { return {Mono{}, 0}; }
	bool is_unit(const Key& k) const { return k.second == 0 && k.first.is_one(); }
	bool mul(const Key& a, const Key& b, std::vector<KTerm<Key>>& out) const
	{
		if (a.second + b.second > 1)
			return false;
		bool clip = false;
		for (auto& t : moyal_monomials(d, a.first, b.first)) {
			if (t.m.degree(d) > cap) {
				clip = true;
				continue;
			}
			out.push_back({{t.m, a.second + b.second}, t.tpow, t.c});
		}
		return clip;
	}
	void delta(const Key& a, std::vector<KTerm<Key>>& out) const
	{
		if (a.second == 1)
			out.push_back({{a.first, 0}, 0, Rational(1)});
	}
	nlohmann::json key_json(const Key& k) const
	{
		std::vector<int> v(k.first.e.begin(), k.first.e.begin() + 2 * d);
		return nlohmann::json{{"mono", v}, {"eta", k.second}};
	}
};

// Graded tensor product with the Koszul sign rule.
template <class A, class B>
struct TensorAlg {
	using Key = std::pair<typename A::Key, typename B::Key>;
	A a;
	B b;

	std::string name() const { return a.name() + "(x)" + b.name(); }
	int degree(const Key& k) const { return a.degree(k.first) + b.degree(k.second); }
	Key unit() const { return {a.unit(), b.unit()}; }
	bool is_unit(const Key& k) const { return a.is_unit(k.first) && b.is_unit(k.second); }
	bool mul(const Key& x, const Key& y, std::vector<KTerm<Key>>& out) const
	{
		std::vector<KTerm<typename A::Key>> pa;
		std::vector<KTerm<typename B::Key>> pb;
		bool clip = a.mul(x.first, y.first, pa);
		clip = b.mul(x.second, y.second, pb) || clip;
		int s = (b.degree(x.second) * a.degree(y.first)) % 2 ? -1 : 1;
		for (auto& ta : pa)
			for (auto& tb : pb)
				out.push_back({{ta.key, tb.key}, ta.tpow + tb.tpow, ta.c * tb.c * s});
		return clip;
	}
	void delta(const Key& x, std::vector<KTerm<Key>>& out) const
	{
		std::vector<KTerm<typename A::Key>> da;
		std::vector<KTerm<typename B::Key>> db;
		a.delta(x.first, da);
		b.delta(x.second, db);
		for (auto& t : da)
			out.push_back({{t.key, x.second}, t.tpow, t.c});
		int s = a.degree(x.first) % 2 ? -1 : 1;
		for (auto& t : db)
			out.push_back({{x.first, t.key}, t.tpow, t.c * s});
	}
	nlohmann::json key_json(const Key& k) const { return nlohmann::json::array({a.key_json(k.first), b.key_json(k.second)}); }
};

} // namespace dqrr
