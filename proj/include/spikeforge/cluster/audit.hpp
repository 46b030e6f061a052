#pragma once

#include <spikeforge/cluster/schedule.hpp>

#include <chrono>
#include <cstdint>
#include <mutex>
#include <string_view>
#include <vector>

namespace spikeforge::cluster
{
enum class event_kind
{
	half_begin,     // worker starts stepping half `half`
	half_end,       // worker finished stepping half `half` and published its spikes
	barrier,        // every participant finished half `half`; logged once, at release
	count_read,     // coordinator downloaded the spike counts of half `half`
	payload_skip,   // total count was zero, no payload copies
	transfer_begin, // coordinator starts the payload sync of half `half`
	transfer_end,   // union of half `half` uploaded to every inbox
	payload_read,   // worker merges the synchronized spikes of half `half` into its ring
};

std::string_view to_string(event_kind kind);

struct audit_event
{
	std::uint64_t seq;
	double time; // seconds since the log was created
	event_kind kind;
	int worker; // -1: coordinator
	std::int64_t half;
};

// Happens-before log. Sequence numbers are assigned under a lock, so seq order is consistent
// with the order in which the synchronizing operations took place.
class audit_log
{
public:
	explicit audit_log(bool enabled = true)
	    : _enabled(enabled)
	    , _origin(std::chrono::steady_clock::now())
	{
	}

	bool enabled() const { return _enabled; }
	void record(event_kind kind, int worker, std::int64_t half);
	double now() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - _origin).count(); }
	std::vector<audit_event> const & events() const { return _events; }
	void clear() { _events.clear(); }

private:
	bool _enabled;
	std::chrono::steady_clock::time_point _origin;
	std::mutex _mutex;
	std::vector<audit_event> _events;
};

struct overlap_report
{
	// Payload reads that precede the end barrier of the batch that produced them, or precede
	// the end of their own transfer.
	std::size_t early_reads = 0;
	std::size_t payload_reads = 0;
	// Batches whose first-half payload was transferred, and how many of those transfers overlap
	// the stepping of the batch's second half (from its starting barrier to the last worker's end).
	std::size_t transferred_batches = 0;
	std::size_t overlapped_batches = 0;

	double overlap_fraction() const
	{
		return transferred_batches == 0 ? 0.0 : static_cast<double>(overlapped_batches) / transferred_batches;
	}
};

overlap_report audit_overlap(std::vector<audit_event> const & events, batch_schedule const & schedule);
} // namespace spikeforge::cluster
