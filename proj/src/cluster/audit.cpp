#include <spikeforge/cluster/audit.hpp>

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace spikeforge::cluster
{
std::string_view to_string(event_kind kind)
{
	switch (kind) {
	case event_kind::half_begin: return "half_begin";
	case event_kind::half_end: return "half_end";
	case event_kind::barrier: return "barrier";
	case event_kind::count_read: return "count_read";
	case event_kind::payload_skip: return "payload_skip";
	case event_kind::transfer_begin: return "transfer_begin";
	case event_kind::transfer_end: return "transfer_end";
	case event_kind::payload_read: return "payload_read";
	}
	return "?";
}

void audit_log::record(event_kind kind, int worker, std::int64_t half)
{
	if (!_enabled)
		return;
	std::lock_guard lock(_mutex);
	_events.push_back({ _events.size(), now(), kind, worker, half });
}

overlap_report audit_overlap(std::vector<audit_event> const & events, batch_schedule const & schedule)
{
	struct half_info
	{
		audit_event const * barrier = nullptr;
		audit_event const * transfer_begin = nullptr;
		audit_event const * transfer_end = nullptr;
		audit_event const * skip = nullptr;
		double last_end = -std::numeric_limits<double>::infinity();
	};
	std::unordered_map<std::int64_t, half_info> halves;
	for (auto const & e : events) {
		auto & h = halves[e.half];
		switch (e.kind) {
		case event_kind::barrier: h.barrier = &e; break;
		case event_kind::transfer_begin: h.transfer_begin = &e; break;
		case event_kind::transfer_end: h.transfer_end = &e; break;
		case event_kind::payload_skip: h.skip = &e; break;
		case event_kind::half_end: h.last_end = std::max(h.last_end, e.time); break;
		default: break;
		}
	}

	overlap_report report;
	for (auto const & e : events) {
		if (e.kind != event_kind::payload_read)
			continue;
		++report.payload_reads;
		std::int64_t const batch_end_half = 2 * schedule.batch_of(e.half) + 1;
		auto const & own = halves[e.half];
		auto const it = halves.find(batch_end_half);
		bool const after_barrier = it != halves.end() && it->second.barrier && it->second.barrier->seq < e.seq;
		auto const * done = own.transfer_end ? own.transfer_end : own.skip;
		bool const after_transfer = done && done->seq < e.seq;
		if (!after_barrier || !after_transfer)
			++report.early_reads;
	}

	for (auto const & [h, info] : halves) {
		if (h % 2 != 0 || !info.transfer_begin || !info.transfer_end || !info.barrier)
			continue;
		auto const second = halves.find(h + 1);
		if (second == halves.end() || !second->second.barrier)
			continue;
		++report.transferred_batches;
		// The second half starts when the barrier ending the first half releases everyone.
		double const start = info.barrier->time;
		double const end = second->second.last_end;
		if (info.transfer_begin->time < end && info.transfer_end->time > start)
			++report.overlapped_batches;
	}
	return report;
}
} // namespace spikeforge::cluster
