#pragma once

#include <spikeforge/core/types.hpp>

#include <span>
#include <vector>

namespace spikeforge
{
// Delay-indexed circular set of spike arrays. Spikes pushed during step t are committed to
// buffer t mod delay once step t has consumed that buffer's previous contents (spikes from
// t - delay), so every spike is consumed exactly `delay` steps after it was pushed.
class spike_ring
{
public:
	explicit spike_ring(int delay);

	int delay() const { return static_cast<int>(_buffers.size()); }

	// Stage a spike fired during step t.
	void push(step_t t, neuron_id id);
	// Spikes fired during step t - delay, sorted ascending and deduplicated in place.
	std::span<neuron_id const> consume(step_t t);
	// Move the spikes staged during step t into buffer t mod delay. Call after consume(t).
	void commit(step_t t);

	// Committed, not yet consumed spikes fired during step t (unsorted, may hold duplicates).
	std::span<neuron_id const> committed(step_t t) const;
	// Replace the committed spikes of step t, e.g. with the union of all workers' spikes.
	void assign(step_t t, std::vector<neuron_id> ids);

	std::span<neuron_id const> staged() const { return _staging; }

private:
	std::vector<neuron_id> & buffer(step_t t);
	std::vector<neuron_id> const & buffer(step_t t) const;

	std::vector<std::vector<neuron_id>> _buffers;
	std::vector<neuron_id> _staging;
	step_t _staging_step = never;
};
} // namespace spikeforge
