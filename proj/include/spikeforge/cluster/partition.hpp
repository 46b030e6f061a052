#pragma once

#include <spikeforge/core/types.hpp>
#include <spikeforge/engine/slices.hpp>
#include <spikeforge/topology/scope.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace spikeforge::cluster
{
// Strided ownership: neuron j belongs to worker floor(j / slice_width) mod workers.
struct partition
{
	neuron_id neurons = 0;
	int workers = 1;
	std::uint32_t slice_width = 1;

	int owner(neuron_id j) const { return static_cast<int>((j / slice_width) % static_cast<std::uint32_t>(workers)); }
	engine::slice_layout layout(int worker) const { return { neurons, slice_width, workers, worker }; }
	topology::target_scope scope(int worker) const
	{
		auto s = topology::target_scope::strided(slice_width, workers, worker);
		s.range = { 0, neurons };
		return s;
	}
	std::size_t slices() const { return (std::size_t{ neurons } + slice_width - 1) / slice_width; }
	std::vector<std::size_t> owned_counts() const;
};

// max(1, floor(N / (256 G))), rounded down to a multiple of 32 once it reaches 32. Aims for
// a few hundred slices per worker.
std::uint32_t default_slice_width(neuron_id neurons, int workers);

// Throws usage_error unless neurons, workers and slice_width are all >= 1.
partition make_partition(neuron_id neurons, int workers, std::optional<std::uint32_t> slice_width = std::nullopt);
} // namespace spikeforge::cluster
