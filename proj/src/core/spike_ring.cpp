#include <spikeforge/core/error.hpp>
#include <spikeforge/core/spike_ring.hpp>

#include <algorithm>
#include <cassert>

namespace spikeforge
{
spike_ring::spike_ring(int delay)
{
	if (delay < 1)
		throw construction_error("delay must be at least one step");
	_buffers.resize(static_cast<std::size_t>(delay));
}

std::vector<neuron_id> & spike_ring::buffer(step_t t)
{
	auto const d = static_cast<step_t>(_buffers.size());
	return _buffers[static_cast<std::size_t>(((t % d) + d) % d)];
}

std::vector<neuron_id> const & spike_ring::buffer(step_t t) const
{
	auto const d = static_cast<step_t>(_buffers.size());
	return _buffers[static_cast<std::size_t>(((t % d) + d) % d)];
}

void spike_ring::push(step_t t, neuron_id id)
{
	if (t != _staging_step) {
		assert(_staging.empty());
		_staging_step = t;
	}
	_staging.push_back(id);
}

std::span<neuron_id const> spike_ring::consume(step_t t)
{
	auto & b = buffer(t);
	std::sort(b.begin(), b.end());
	b.erase(std::unique(b.begin(), b.end()), b.end());
	return b;
}

void spike_ring::commit(step_t t)
{
	auto & b = buffer(t);
	if (_staging_step == t) {
		b.swap(_staging);
		_staging.clear();
	} else {
		b.clear();
	}
	_staging_step = never;
}

std::span<neuron_id const> spike_ring::committed(step_t t) const
{
	return buffer(t);
}

void spike_ring::assign(step_t t, std::vector<neuron_id> ids)
{
	buffer(t) = std::move(ids);
}
} // namespace spikeforge
