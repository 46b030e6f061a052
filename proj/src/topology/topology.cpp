#include <spikeforge/core/error.hpp>
#include <spikeforge/core/rng.hpp>
#include <spikeforge/topology/topology.hpp>

#include <tbb/blocked_range.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

namespace spikeforge::topology
{
namespace
{
template <typename Fn>
void for_row_chunks(std::size_t rows, int threads, Fn && fn)
{
	threads = std::min(threads, tbb::info::default_concurrency());
	if (threads <= 1 || rows < 2) {
		fn(std::size_t{ 0 }, rows);
		return;
	}
	tbb::task_arena arena(threads);
	arena.execute([&] {
		tbb::parallel_for(tbb::blocked_range<std::size_t>(0, rows, 64),
		                  [&](tbb::blocked_range<std::size_t> const & r) { fn(r.begin(), r.end()); });
	});
}

// Appends the targets of source s under rule r (ascending).
void generate(topology_descriptor const & desc,
              std::size_t r,
              neuron_id s,
              std::uint64_t seed,
              target_scope const & scope,
              std::vector<neuron_id> & out)
{
	connect_rule const & rule = desc.rules[r];
	id_range const dst = rule.dst.intersect(scope.range);
	if (rule.p <= 0.0 || dst.empty())
		return;
	std::uint32_t const stream = desc.stream_of(r);

	if (rule.p >= dense_threshold) {
		// One 32-bit draw per (s, t); four consecutive targets share a Philox block.
		bool const always = rule.p >= 1.0;
		double const scaled = rule.p * 0x1.0p32;
		neuron_id t = scope.next(dst.first);
		while (t < dst.last) {
			neuron_id run_end = dst.last;
			if (scope.slice_width != 0)
				run_end = static_cast<neuron_id>(
				    std::min<std::uint64_t>(dst.last, (std::uint64_t{ t } / scope.slice_width + 1) * scope.slice_width));
			philox4x32::counter_type block{};
			std::uint32_t cached = pad_sentinel;
			for (neuron_id u = t; u < run_end; ++u) {
				if ((u >> 2) != cached) {
					cached = u >> 2;
					block = philox4x32::apply(
					    { s, cached, stream, static_cast<std::uint32_t>(rng_domain::edge_dense) << 24 },
					    { static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32) });
				}
				if (always || static_cast<double>(block[u & 3]) < scaled)
					out.push_back(u);
			}
			if (run_end >= dst.last)
				break;
			t = scope.next(run_end);
		}
		return;
	}

	double const log_q = std::log1p(-rule.p);
	for (std::uint64_t b = dst.first / skip_block; b * skip_block < dst.last; ++b) {
		std::uint64_t const block_lo = b * skip_block;
		std::uint64_t const block_hi = block_lo + skip_block;
		std::uint64_t const lo = std::max<std::uint64_t>(block_lo, dst.first);
		std::uint64_t const hi = std::min<std::uint64_t>(block_hi, dst.last);
		if (scope.next(static_cast<neuron_id>(lo)) >= hi)
			continue;

		keyed_rng rng(seed, rng_domain::edge_skip, s, static_cast<std::uint32_t>(b), stream);
		std::uint64_t pos = block_lo;
		bool first = true;
		for (;;) {
			double const skip = std::floor(std::log(rng.uniform_open()) / log_q);
			if (skip >= static_cast<double>(skip_block))
				break;
			pos += static_cast<std::uint64_t>(skip) + (first ? 0 : 1);
			first = false;
			if (pos >= block_hi)
				break;
			if (pos >= lo && pos < hi && scope.contains(static_cast<neuron_id>(pos)))
				out.push_back(static_cast<neuron_id>(pos));
		}
	}
}
} // namespace

width_estimate estimate_width(topology_descriptor const & desc, target_scope const & scope)
{
	desc.validate();
	width_estimate est;
	est.mean.assign(desc.neurons, 0.0);
	est.variance.assign(desc.neurons, 0.0);

	for (auto const & rule : desc.rules) {
		double const n = static_cast<double>(scope.count(rule.dst));
		double const mu = n * rule.p;
		double const var = n * rule.p * (1.0 - rule.p);
		for (neuron_id i = rule.src.first; i < rule.src.last; ++i) {
			est.mean[i] += mu;
			est.variance[i] += var;
		}
	}

	for (std::size_t i = 0; i < desc.neurons; ++i)
		est.bound = std::max(est.bound, est.mean[i] + 3.0 * std::sqrt(est.variance[i]));
	est.width = align_width(static_cast<std::size_t>(std::ceil(est.bound)));
	return est;
}

build_result build_adjacency(topology_descriptor const & desc, std::uint64_t seed, build_options const & opts)
{
	desc.validate();
	build_result res;

	std::size_t width = 0;
	std::size_t estimate_bytes = 0;
	if (opts.width) {
		width = *opts.width;
	} else {
		auto const est = estimate_width(desc, opts.scope);
		width = est.width;
		estimate_bytes = (est.mean.capacity() + est.variance.capacity()) * sizeof(double);
	}
	res.estimated_width = width;
	res.adjacency = adjacency_list(desc.neurons, width);

	struct spill
	{
		neuron_id row;
		std::vector<neuron_id> extra;
	};
	std::vector<spill> spills;
	std::mutex spill_mutex;
	std::atomic<std::uint64_t> edges{ 0 }, dropped{ 0 }, overflow_rows{ 0 };
	std::atomic<std::size_t> scratch_bytes{ 0 }, spill_bytes{ 0 };

	for_row_chunks(desc.neurons, opts.threads, [&](std::size_t begin, std::size_t end) {
		std::vector<neuron_id> scratch;
		std::uint64_t local_edges = 0, local_dropped = 0, local_overflow = 0;
		for (std::size_t s = begin; s < end; ++s) {
			scratch.clear();
			int contributing = 0;
			for (std::size_t r = 0; r < desc.rules.size(); ++r) {
				if (!desc.rules[r].src.contains(static_cast<neuron_id>(s)))
					continue;
				std::size_t const before = scratch.size();
				generate(desc, r, static_cast<neuron_id>(s), seed, opts.scope, scratch);
				contributing += scratch.size() > before;
			}
			if (contributing > 1)
				std::stable_sort(scratch.begin(), scratch.end());

			auto row = res.adjacency.row(s);
			std::size_t const kept = std::min(scratch.size(), width);
			std::copy_n(scratch.begin(), kept, row.begin());
			local_edges += kept;
			if (scratch.size() > width) {
				++local_overflow;
				if (opts.overflow == overflow_policy::grow) {
					std::lock_guard lock(spill_mutex);
					spills.push_back({ static_cast<neuron_id>(s), { scratch.begin() + kept, scratch.end() } });
					spill_bytes += spills.back().extra.capacity() * sizeof(neuron_id);
				} else {
					local_dropped += scratch.size() - width;
				}
			}
		}
		scratch_bytes += scratch.capacity() * sizeof(neuron_id);
		edges += local_edges;
		dropped += local_dropped;
		overflow_rows += local_overflow;
	});

	// Chunks run concurrently with at most `threads` live scratch buffers; summing all of them
	// over-approximates that.
	res.peak_bytes = res.adjacency.size_bytes() + estimate_bytes + scratch_bytes.load() + spill_bytes.load();
	res.edges = edges;
	res.dropped_edges = dropped;
	res.overflow_rows = overflow_rows;

	if (!spills.empty()) {
		std::size_t longest = 0;
		for (auto const & sp : spills)
			longest = std::max(longest, width + sp.extra.size());
		adjacency_list grown(desc.neurons, align_width(longest));
		res.peak_bytes = std::max(res.peak_bytes, res.adjacency.size_bytes() + grown.size_bytes() + spill_bytes.load());
		for (std::size_t s = 0; s < desc.neurons; ++s)
			std::copy(res.adjacency.row(s).begin(), res.adjacency.row(s).end(), grown.row(s).begin());
		for (auto const & sp : spills) {
			auto row = grown.row(sp.row);
			std::copy(sp.extra.begin(), sp.extra.end(), row.begin() + static_cast<std::ptrdiff_t>(width));
			res.edges += sp.extra.size();
		}
		res.adjacency = std::move(grown);
	}
	return res;
}

std::pair<topology_descriptor, topology_descriptor> split_descriptor(topology_descriptor const & desc, neuron_id pivot)
{
	if (pivot > desc.neurons)
		throw construction_error("pivot exceeds neuron count");
	topology_descriptor left{ desc.neurons, {} }, right{ desc.neurons, {} };
	for (std::size_t r = 0; r < desc.rules.size(); ++r) {
		connect_rule rule = desc.rules[r];
		rule.stream = desc.stream_of(r);
		connect_rule l = rule, h = rule;
		l.dst = rule.dst.intersect({ 0, pivot });
		h.dst = rule.dst.intersect({ pivot, desc.neurons });
		if (!l.dst.empty())
			left.rules.push_back(l);
		if (!h.dst.empty())
			right.rules.push_back(h);
	}
	return { std::move(left), std::move(right) };
}

adjacency_split split_adjacency(adjacency_list const & adj, neuron_id pivot)
{
	adjacency_split out;
	out.left_count.resize(adj.rows());
	std::size_t left_max = 0, right_max = 0;
	for (std::size_t i = 0; i < adj.rows(); ++i) {
		auto const row = adj.row(i);
		auto const valid_end = std::lower_bound(row.begin(), row.end(), pad_sentinel);
		auto const mid = std::lower_bound(row.begin(), valid_end, pivot);
		out.left_count[i] = static_cast<std::uint32_t>(mid - row.begin());
		left_max = std::max<std::size_t>(left_max, mid - row.begin());
		right_max = std::max<std::size_t>(right_max, valid_end - mid);
	}
	out.left = adjacency_list(adj.rows(), align_width(left_max));
	out.right = adjacency_list(adj.rows(), align_width(right_max));
	for (std::size_t i = 0; i < adj.rows(); ++i) {
		auto const row = adj.row(i);
		auto const valid_end = std::lower_bound(row.begin(), row.end(), pad_sentinel);
		auto const mid = row.begin() + out.left_count[i];
		std::copy(row.begin(), mid, out.left.row(i).begin());
		std::copy(mid, valid_end, out.right.row(i).begin());
	}
	return out;
}
} // namespace spikeforge::topology
