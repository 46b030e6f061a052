#pragma once

#include <spikeforge/core/adjacency.hpp>
#include <spikeforge/core/soa_pool.hpp>
#include <spikeforge/core/types.hpp>
#include <spikeforge/topology/scope.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace spikeforge::topology
{
// Per-source out-degree moments under a target scope, and the padded row width derived from them:
// width = align32(ceil(max_i(mean_i + 3 * sqrt(variance_i)))).
struct width_estimate
{
	std::vector<double> mean;
	std::vector<double> variance;
	double bound = 0.0; // max_i(mean_i + 3 sigma_i) before alignment
	std::size_t width = 0;
};

width_estimate estimate_width(topology_descriptor const & desc, target_scope const & scope = target_scope::all());

enum class overflow_policy
{
	drop, // keep the smallest `width` targets of a row, count the rest
	grow, // widen the list to fit the longest row
};

struct build_options
{
	target_scope scope = target_scope::all();
	overflow_policy overflow = overflow_policy::drop;
	// Unset: estimate_width(desc, scope).width
	std::optional<std::size_t> width;
	int threads = 1;
};

struct build_result
{
	adjacency_list adjacency;
	std::uint64_t edges = 0;         // stored
	std::uint64_t dropped_edges = 0; // generated but beyond row capacity
	std::uint64_t overflow_rows = 0; // rows that generated more edges than the estimated width
	std::size_t estimated_width = 0;
	std::size_t peak_bytes = 0; // tracked high-water mark of construction allocations
};

// Edge s -> t of rule r exists iff a draw from a Philox stream keyed by (seed, r, s, ...) falls
// below p. Dense rules (p >= dense_threshold) draw once per (s, t); sparse rules skip
// geometrically inside fixed 256-ID target blocks keyed by (s, block). Either way the edge set
// depends only on (desc, seed); a scope merely filters it.
inline constexpr double dense_threshold = 0.15;
inline constexpr neuron_id skip_block = 256;

build_result build_adjacency(topology_descriptor const & desc, std::uint64_t seed, build_options const & opts = {});

// Restrict every rule's dst to [0, pivot) and [pivot, N) respectively; rules with an empty
// intersection are dropped. Random streams are pinned so both halves keep their original edges.
std::pair<topology_descriptor, topology_descriptor> split_descriptor(topology_descriptor const & desc, neuron_id pivot);

struct adjacency_split
{
	adjacency_list left;  // targets < pivot
	adjacency_list right; // targets >= pivot
	std::vector<std::uint32_t> left_count;
};

// Split every row at the pivot (binary search). Both halves are re-padded to their own aligned
// widths. left_count[i] is the number of row i's entries that went left; use it to split the
// synapse pool in sync (split_synapses).
adjacency_split split_adjacency(adjacency_list const & adj, neuron_id pivot);

template <typename Fields>
std::pair<soa_pool<Fields>, soa_pool<Fields>>
split_synapses(soa_pool<Fields> const & pool, adjacency_list const & original, adjacency_split const & split)
{
	soa_pool<Fields> left(split.left.capacity());
	soa_pool<Fields> right(split.right.capacity());
	auto const copy = [&]<std::size_t... I>(std::index_sequence<I...>) {
		for (std::size_t i = 0; i < original.rows(); ++i) {
			std::size_t const degree = original.degree(i);
			std::size_t const nl = split.left_count[i];
			for (std::size_t j = 0; j < degree; ++j) {
				std::size_t const src = i * original.width() + j;
				if (j < nl)
					((left.template at<I>(i * split.left.width() + j) = pool.template at<I>(src)), ...);
				else
					((right.template at<I>(i * split.right.width() + j - nl) = pool.template at<I>(src)), ...);
			}
		}
	};
	copy(std::make_index_sequence<soa_pool<Fields>::field_count>{});
	return { std::move(left), std::move(right) };
}
} // namespace spikeforge::topology
