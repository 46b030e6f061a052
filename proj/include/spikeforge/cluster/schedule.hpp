#pragma once

#include <spikeforge/core/error.hpp>
#include <spikeforge/core/types.hpp>

#include <cstdint>

namespace spikeforge::cluster
{
// A batch is `delay` steps split into halves of floor(d/2) and ceil(d/2) steps. Half h is
// half h % 2 of batch h / 2. Spikes of half h are synchronized while half h + 1 runs and are
// merged before half h + 2, the first half that can consume them.
struct batch_schedule
{
	int delay = 1;

	explicit batch_schedule(int d)
	    : delay(d)
	{
		if (d < 1)
			throw construction_error("delay must be at least one step");
	}

	int first() const { return delay / 2; }
	int second() const { return delay - delay / 2; }

	step_t half_begin(std::int64_t h) const { return h / 2 * delay + (h % 2 == 0 ? 0 : first()); }
	step_t half_end(std::int64_t h) const { return h / 2 * delay + (h % 2 == 0 ? first() : delay); }
	std::int64_t batch_of(std::int64_t h) const { return h / 2; }

	// Halves needed to cover steps [0, steps).
	std::int64_t halves(step_t steps) const { return 2 * ((steps + delay - 1) / delay); }
};
} // namespace spikeforge::cluster
