#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace spikeforge
{
// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless: the output is a pure
// function of (counter, key), which is what makes edge generation and per-neuron randomness
// independent of how work is partitioned.
struct philox4x32
{
	using counter_type = std::array<std::uint32_t, 4>;
	using key_type = std::array<std::uint32_t, 2>;

	static constexpr counter_type apply(counter_type ctr, key_type key)
	{
		for (int round = 0; round < 10; ++round) {
			if (round > 0) {
				key[0] += 0x9E3779B9u;
				key[1] += 0xBB67AE85u;
			}
			std::uint64_t const p0 = std::uint64_t{ 0xD2511F53u } * ctr[0];
			std::uint64_t const p1 = std::uint64_t{ 0xCD9E8D57u } * ctr[2];
			ctr = { static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
				    static_cast<std::uint32_t>(p1),
				    static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
				    static_cast<std::uint32_t>(p0) };
		}
		return ctr;
	}
};

// Stream domains keep draws for different purposes from ever sharing a counter.
enum class rng_domain : std::uint32_t
{
	edge_dense = 1,
	edge_skip = 2,
	neuron_init = 3,
	neuron_step = 4,
	synapse_init = 5,
};

// A sequence of random numbers keyed by (seed, domain, a, b, c). Draws are consumed four words
// per Philox block; the block index lives in the low 24 bits of the last counter word.
class keyed_rng
{
public:
	constexpr keyed_rng(std::uint64_t seed, rng_domain domain, std::uint32_t a, std::uint32_t b, std::uint32_t c = 0)
	    : _ctr{ a, b, c, static_cast<std::uint32_t>(domain) << 24 }
	    , _key{ static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32) }
	{
	}

	constexpr std::uint32_t next_u32()
	{
		if (_used == 4) {
			_block = philox4x32::apply(_ctr, _key);
			++_ctr[3];
			_used = 0;
		}
		return _block[_used++];
	}

	// [0, 1) with 24 bits of resolution.
	float uniform() { return static_cast<float>(next_u32() >> 8) * 0x1.0p-24f; }

	// [0, 1) with 32 bits of resolution.
	double uniform_double() { return next_u32() * 0x1.0p-32; }

	// (0, 1), safe to pass to log().
	double uniform_open() { return (next_u32() + 0.5) * 0x1.0p-32; }

	double normal()
	{
		double const r = std::sqrt(-2.0 * std::log(uniform_open()));
		return r * std::cos(6.283185307179586 * uniform_double());
	}

	// Inversion by sequential search; intended for small lambda (a handful of events per step).
	std::uint32_t poisson(double lambda)
	{
		double const u = uniform_double();
		double p = std::exp(-lambda);
		double cdf = p;
		std::uint32_t k = 0;
		while (u >= cdf && k < 1000) {
			++k;
			p *= lambda / k;
			cdf += p;
		}
		return k;
	}

private:
	philox4x32::counter_type _ctr;
	philox4x32::key_type _key;
	philox4x32::counter_type _block{};
	int _used = 4;
};
} // namespace spikeforge
