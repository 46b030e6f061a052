#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace spikeforge
{
using neuron_id = std::uint32_t;

// Pads adjacency rows. Being the largest representable ID, sentinels sort after every valid entry.
inline constexpr neuron_id pad_sentinel = std::numeric_limits<neuron_id>::max();

// Simulation step index. Steps before the start of a run are negative.
using step_t = std::int64_t;
inline constexpr step_t never = std::numeric_limits<step_t>::min() / 2;

// Half-open range of neuron IDs.
struct id_range
{
	neuron_id first = 0;
	neuron_id last = 0;

	constexpr std::size_t size() const { return last > first ? last - first : 0; }
	constexpr bool empty() const { return last <= first; }
	constexpr bool contains(neuron_id i) const { return i >= first && i < last; }

	constexpr id_range intersect(id_range o) const
	{
		id_range r{ std::max(first, o.first), std::min(last, o.last) };
		if (r.last < r.first)
			r.last = r.first;
		return r;
	}

	friend constexpr bool operator==(id_range, id_range) = default;
};

// "Connect every neuron in src with every neuron in dst with probability p."
struct connect_rule
{
	id_range src;
	id_range dst;
	double p = 0.0;
	// Identity of the rule's random stream. Unset: the rule's index in its descriptor. Splitting a
	// descriptor pins it so the halves regenerate exactly the original edges.
	std::optional<std::uint32_t> stream;

	friend bool operator==(connect_rule const &, connect_rule const &) = default;
};

struct topology_descriptor
{
	neuron_id neurons = 0;
	std::vector<connect_rule> rules;

	// Throws construction_error on inverted ranges, out-of-range IDs or p outside [0,1].
	void validate() const;

	std::uint32_t stream_of(std::size_t rule) const
	{
		return rules[rule].stream.value_or(static_cast<std::uint32_t>(rule));
	}

	friend bool operator==(topology_descriptor const &, topology_descriptor const &) = default;
};
} // namespace spikeforge
