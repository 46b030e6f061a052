#pragma once

#include <spikeforge/core/types.hpp>

#include <cstddef>
#include <cstdint>
#include <limits>

namespace spikeforge::topology
{
// Filter on target neuron IDs: the intersection of an ID range with an optional strided slice
// pattern (slices of `slice_width` IDs dealt round-robin to `workers`, keeping those of `worker`).
struct target_scope
{
	id_range range{ 0, std::numeric_limits<neuron_id>::max() };
	std::uint32_t slice_width = 0; // 0: no slicing
	int workers = 1;
	int worker = 0;

	static target_scope all() { return {}; }
	static target_scope ids(id_range r) { return { r }; }
	static target_scope strided(std::uint32_t slice_width, int workers, int worker)
	{
		return { { 0, std::numeric_limits<neuron_id>::max() }, slice_width, workers, worker };
	}

	bool contains(neuron_id t) const
	{
		if (!range.contains(t))
			return false;
		return slice_width == 0 || static_cast<int>((t / slice_width) % static_cast<std::uint32_t>(workers)) == worker;
	}

	// Smallest ID >= t inside the scope, or pad_sentinel.
	neuron_id next(neuron_id t) const;
	// Number of in-scope IDs within r.
	std::size_t count(id_range r) const;
};
} // namespace spikeforge::topology
