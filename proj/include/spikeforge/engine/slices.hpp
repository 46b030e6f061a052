#pragma once

#include <spikeforge/core/types.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>

namespace spikeforge::engine
{
// Loop-index manipulation that walks worker `worker`'s strided slices: the i-th owned neuron of a
// worker is (i / S * G + worker) * S + i % S.
constexpr std::uint64_t strided_index(std::uint64_t i, std::uint32_t slice_width, int workers, int worker)
{
	return (i / slice_width * static_cast<std::uint64_t>(workers) + static_cast<std::uint64_t>(worker)) * slice_width +
	       i % slice_width;
}

// Which neurons a worker owns: slices of `slice_width` IDs dealt round-robin to `workers`.
struct slice_layout
{
	neuron_id neurons = 0;
	std::uint32_t slice_width = 1;
	int workers = 1;
	int worker = 0;

	int owner(neuron_id j) const { return static_cast<int>((j / slice_width) % static_cast<std::uint32_t>(workers)); }
	bool owns(neuron_id j) const { return owner(j) == worker; }

	// Number of slices (of any owner) and of slices owned by this worker.
	std::size_t slices() const { return (std::size_t{ neurons } + slice_width - 1) / slice_width; }
	std::size_t owned_slices() const
	{
		std::size_t const n = slices();
		auto const w = static_cast<std::size_t>(worker);
		return n > w ? (n - w + static_cast<std::size_t>(workers) - 1) / static_cast<std::size_t>(workers) : 0;
	}

	// IDs of this worker's k-th owned slice.
	id_range owned_slice(std::size_t k) const
	{
		std::uint64_t const first =
		    (k * static_cast<std::uint64_t>(workers) + static_cast<std::uint64_t>(worker)) * slice_width;
		std::uint64_t const last = std::min<std::uint64_t>(first + slice_width, neurons);
		return { static_cast<neuron_id>(first), static_cast<neuron_id>(last) };
	}

	std::size_t owned_count() const
	{
		std::size_t n = 0;
		for (std::size_t k = 0; k < owned_slices(); ++k)
			n += owned_slice(k).size();
		return n;
	}
};
} // namespace spikeforge::engine
