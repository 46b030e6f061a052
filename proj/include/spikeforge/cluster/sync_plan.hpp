#pragma once

#include <spikeforge/core/types.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace spikeforge::cluster
{
// Spikes of a contiguous run of steps, one sorted ID array per step (CSR layout).
struct spike_batch
{
	step_t first = 0;
	std::vector<std::uint64_t> offsets{ 0 };
	std::vector<neuron_id> ids;

	std::size_t steps() const { return offsets.size() - 1; }
	std::size_t count() const { return ids.size(); }
	std::span<neuron_id const> at(std::size_t k) const
	{
		return { ids.data() + offsets[k], static_cast<std::size_t>(offsets[k + 1] - offsets[k]) };
	}
	void append(std::span<neuron_id const> step_ids)
	{
		ids.insert(ids.end(), step_ids.begin(), step_ids.end());
		offsets.push_back(ids.size());
	}

	friend bool operator==(spike_batch const &, spike_batch const &) = default;
};

// Per-step sorted union. Both batches must cover the same steps.
spike_batch merge(spike_batch const & a, spike_batch const & b);

// Flat little-endian byte image: first step, step count, per-step counts, IDs.
std::vector<std::byte> serialize(spike_batch const & batch);
spike_batch deserialize(std::span<std::byte const> bytes);

// One directed transfer: dst merges src's current set into its own.
struct copy_op
{
	int src;
	int dst;
	friend bool operator==(copy_op, copy_op) = default;
};

// Copies of a round read the state from before the round, so a pair of opposite copies in the
// same round is a full-duplex exchange.
struct sync_round
{
	std::vector<copy_op> copies;
};

struct sync_plan
{
	int workers = 1;
	std::vector<sync_round> rounds;

	std::size_t copy_count() const;
};

// Hierarchical gather towards workers 0 and P/2 (P = G rounded up to a power of two), one
// full-duplex exchange between them, then the mirrored scatter: 2 ceil(log2 G) - 1 rounds.
// Copies touching the phantom workers G..P-1 are left out.
sync_plan build_sync_plan(int workers);

struct sync_stats
{
	std::size_t copies = 0;
	std::size_t bytes = 0;
};

// Runs the plan over serialized per-worker sets, each copy being serialize -> transfer ->
// deserialize -> merge. On return every entry holds the union.
sync_stats execute(sync_plan const & plan, std::vector<spike_batch> & sets);
} // namespace spikeforge::cluster
