#pragma once

#include "dqrr/scalars.hpp"

#include <cstdint>
#include <string_view>

// Counter-based splittable generator: the n-th draw of stream s is
// splitmix64(seed ^ mix(s) + n * golden). Splitting hashes a label into a
// fresh stream, so results do not depend on the order checks run in.

namespace dqrr {

inline uint64_t splitmix64(uint64_t x)
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

class Rng {
public:
	explicit Rng(uint64_t seed = 0, uint64_t stream = 0) : seed_(seed), stream_(splitmix64(stream)) {}

	uint64_t next() { return splitmix64(seed_ ^ stream_ ^ (counter_++ * 0xd1b54a32d192ed03ULL)); }

	Rng split(std::string_view label) const
	{
		uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
		for (char c : label)
			h = (h ^ uint8_t(c)) * 0x100000001b3ULL;
		return Rng(seed_, stream_ ^ h);
	}
	Rng split(uint64_t index) const { return Rng(seed_, stream_ ^ splitmix64(index + 0x632be59bd9b4e019ULL)); }

	// uniform in [lo, hi]
	int uniform(int lo, int hi) { return lo + int(next() % uint64_t(hi - lo + 1)); }
	bool coin() { return next() & 1; }

	// nonzero, |num| <= 9, den <= 4
	Rational small_rational()
	{
		int num = uniform(1, 9) * (coin() ? 1 : -1);
		return rat(num, uniform(1, 4));
	}

private:
	uint64_t seed_;
	uint64_t stream_;
	uint64_t counter_ = 0;
};

} // namespace dqrr
