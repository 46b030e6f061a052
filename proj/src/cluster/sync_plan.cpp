#include <spikeforge/cluster/sync_plan.hpp>
#include <spikeforge/core/error.hpp>

#include <algorithm>
#include <bit>
#include <cstring>
#include <iterator>

namespace spikeforge::cluster
{
namespace
{
	template <typename T>
	void put(std::vector<std::byte> & out, T value)
	{
		auto const * p = reinterpret_cast<std::byte const *>(&value);
		out.insert(out.end(), p, p + sizeof(T));
	}

	template <typename T>
	T take(std::span<std::byte const> bytes, std::size_t & pos)
	{
		if (pos + sizeof(T) > bytes.size())
			throw error("truncated spike batch");
		T value;
		std::memcpy(&value, bytes.data() + pos, sizeof(T));
		pos += sizeof(T);
		return value;
	}
} // namespace

spike_batch merge(spike_batch const & a, spike_batch const & b)
{
	if (a.first != b.first || a.steps() != b.steps())
		throw error("merging spike batches of different step ranges");
	spike_batch out;
	out.first = a.first;
	out.offsets.reserve(a.offsets.size());
	out.ids.reserve(a.count() + b.count());
	for (std::size_t k = 0; k < a.steps(); ++k) {
		auto const x = a.at(k);
		auto const y = b.at(k);
		std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out.ids));
		out.offsets.push_back(out.ids.size());
	}
	return out;
}

std::vector<std::byte> serialize(spike_batch const & batch)
{
	std::vector<std::byte> out;
	out.reserve(16 + 4 * (batch.steps() + batch.count()));
	put<std::int64_t>(out, batch.first);
	put<std::uint64_t>(out, batch.steps());
	for (std::size_t k = 0; k < batch.steps(); ++k)
		put<std::uint32_t>(out, static_cast<std::uint32_t>(batch.offsets[k + 1] - batch.offsets[k]));
	auto const * p = reinterpret_cast<std::byte const *>(batch.ids.data());
	out.insert(out.end(), p, p + batch.ids.size() * sizeof(neuron_id));
	return out;
}

spike_batch deserialize(std::span<std::byte const> bytes)
{
	std::size_t pos = 0;
	spike_batch batch;
	batch.first = take<std::int64_t>(bytes, pos);
	auto const steps = take<std::uint64_t>(bytes, pos);
	if (steps > bytes.size())
		throw error("corrupt spike batch header");
	batch.offsets.reserve(steps + 1);
	for (std::uint64_t k = 0; k < steps; ++k)
		batch.offsets.push_back(batch.offsets.back() + take<std::uint32_t>(bytes, pos));
	std::size_t const n = batch.offsets.back();
	if (bytes.size() - pos != n * sizeof(neuron_id))
		throw error("spike batch payload size mismatch");
	batch.ids.resize(n);
	std::memcpy(batch.ids.data(), bytes.data() + pos, n * sizeof(neuron_id));
	return batch;
}

std::size_t sync_plan::copy_count() const
{
	std::size_t n = 0;
	for (auto const & r : rounds)
		n += r.copies.size();
	return n;
}

sync_plan build_sync_plan(int workers)
{
	if (workers < 1)
		throw usage_error("sync plan needs at least one worker");
	sync_plan plan;
	plan.workers = workers;
	if (workers == 1)
		return plan;

	int const padded = static_cast<int>(std::bit_ceil(static_cast<unsigned>(workers)));
	int const levels = std::countr_zero(static_cast<unsigned>(padded));
	auto const add = [&](sync_round & round, int src, int dst) {
		if (src < workers && dst < workers)
			round.copies.push_back({ src, dst });
	};

	for (int r = 0; r < levels - 1; ++r) {
		sync_round round;
		int const dist = 1 << r;
		for (int i = 0; i < padded; i += 2 * dist)
			add(round, i + dist, i);
		plan.rounds.push_back(std::move(round));
	}
	{
		sync_round round;
		add(round, 0, padded / 2);
		add(round, padded / 2, 0);
		plan.rounds.push_back(std::move(round));
	}
	for (int r = levels - 2; r >= 0; --r) {
		sync_round round;
		int const dist = 1 << r;
		for (int i = 0; i < padded; i += 2 * dist)
			add(round, i, i + dist);
		plan.rounds.push_back(std::move(round));
	}
	return plan;
}

sync_stats execute(sync_plan const & plan, std::vector<spike_batch> & sets)
{
	if (sets.size() != static_cast<std::size_t>(plan.workers))
		throw error("sync plan and spike sets disagree on the worker count");
	sync_stats stats;
	std::vector<std::vector<std::byte>> wire;
	for (auto const & round : plan.rounds) {
		wire.clear();
		for (auto const & c : round.copies)
			wire.push_back(serialize(sets[static_cast<std::size_t>(c.src)]));
		for (std::size_t k = 0; k < round.copies.size(); ++k) {
			auto & dst = sets[static_cast<std::size_t>(round.copies[k].dst)];
			dst = merge(dst, deserialize(wire[k]));
			stats.bytes += wire[k].size();
			++stats.copies;
		}
	}
	return stats;
}
} // namespace spikeforge::cluster
