#include <spikeforge/cluster/partition.hpp>
#include <spikeforge/core/error.hpp>

#include <string>

namespace spikeforge::cluster
{
std::vector<std::size_t> partition::owned_counts() const
{
	std::vector<std::size_t> counts(static_cast<std::size_t>(workers));
	for (int g = 0; g < workers; ++g)
		counts[static_cast<std::size_t>(g)] = layout(g).owned_count();
	return counts;
}

std::uint32_t default_slice_width(neuron_id neurons, int workers)
{
	std::uint64_t const s = std::uint64_t{ neurons } / (256u * static_cast<std::uint64_t>(std::max(workers, 1)));
	if (s >= 32)
		return static_cast<std::uint32_t>(s / 32 * 32);
	return static_cast<std::uint32_t>(std::max<std::uint64_t>(1, s));
}

partition make_partition(neuron_id neurons, int workers, std::optional<std::uint32_t> slice_width)
{
	if (neurons < 1)
		throw usage_error("partition needs at least one neuron");
	if (workers < 1)
		throw usage_error("worker count must be at least 1, got " + std::to_string(workers));
	std::uint32_t const s = slice_width.value_or(default_slice_width(neurons, workers));
	if (s < 1)
		throw usage_error("slice width must be at least 1");
	return { neurons, workers, s };
}
} // namespace spikeforge::cluster
