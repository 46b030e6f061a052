#pragma once

#include <spikeforge/core/adjacency.hpp>
#include <spikeforge/core/model.hpp>
#include <spikeforge/core/spike_ring.hpp>
#include <spikeforge/engine/slices.hpp>

#include <tbb/info.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace spikeforge::engine
{
enum class traversal
{
	column_major, // lane blocks visited column by column (default)
	row_major,    // one spike's whole row after another; baseline for comparison
};

struct worker_options
{
	std::uint32_t lane_width = 32;
	int threads = 1;
	traversal order = traversal::column_major;
	bool record_spikes = true;
};

// Logical work grid of spike transmission: `spikes` rows by `columns` lane blocks, enumerated
// column-major. Block k delivers spike k % spikes, column k / spikes.
struct lane_grid
{
	std::size_t spikes = 0;
	std::size_t columns = 0;

	struct block
	{
		std::size_t spike;
		std::size_t column;
		friend bool operator==(block, block) = default;
	};

	static lane_grid make(std::size_t spikes, std::size_t width, std::uint32_t lane_width)
	{
		return { spikes, (width + lane_width - 1) / lane_width };
	}

	std::size_t size() const { return spikes * columns; }
	block at(std::size_t k) const { return { k % spikes, k / spikes }; }
};

struct step_stats
{
	std::size_t fired = 0;
	std::size_t delivered = 0;
};

// One worker's share of a simulation: the replicated neuron pool, the incoming edges of its owned
// neurons, and the spike ring. Driven by a single control flow; internally data-parallel over
// disjoint target ranges.
template <neuron_model Model>
class worker
{
public:
	worker(Model model,
	       slice_layout layout,
	       std::uint64_t seed,
	       int delay,
	       float dt,
	       adjacency_list adjacency,
	       worker_options opts = {})
	    : _model(std::move(model))
	    , _layout(layout)
	    , _seed(seed)
	    , _dt(dt)
	    , _adj(std::move(adjacency))
	    , _pools(make_pools(_model, layout.neurons, _adj, seed))
	    , _ring(delay)
	    , _opts(opts)
	{
		if (_opts.lane_width == 0)
			throw construction_error("lane width must be positive");
		int const concurrency = std::min(_opts.threads, tbb::info::default_concurrency());
		if (concurrency > 1)
			_arena = std::make_unique<tbb::task_arena>(concurrency);
		if constexpr (plastic_model<Model>) {
			_last_fire.assign(layout.neurons, never);
			_last_arrival.assign(layout.neurons, never);
		}
		_fired_offsets.push_back(0);
	}

	// Advance every owned neuron by one step. Fired IDs (ascending) are staged in the ring.
	std::size_t update_neurons()
	{
		std::size_t const slices = _layout.owned_slices();
		int const tasks = std::max(1, std::min<int>(_opts.threads, static_cast<int>(slices)));
		if (tasks == 1) {
			_task_fired.resize(1);
			_task_fired[0].clear();
			update_slices(0, slices, _task_fired[0]);
		} else {
			_task_fired.resize(static_cast<std::size_t>(tasks));
			run_tasks(tasks, [&](int k) {
				auto & out = _task_fired[static_cast<std::size_t>(k)];
				out.clear();
				update_slices(slices * k / tasks, slices * (k + 1) / tasks, out);
			});
		}

		std::size_t fired = 0;
		for (auto const & list : _task_fired) {
			for (neuron_id j : list) {
				_ring.push(_t, j);
				if constexpr (plastic_model<Model>)
					_last_fire[j] = _t;
			}
			fired += list.size();
			if (_opts.record_spikes)
				_fired_ids.insert(_fired_ids.end(), list.begin(), list.end());
		}
		if (_opts.record_spikes)
			_fired_offsets.push_back(_fired_ids.size());
		return fired;
	}

	// Deliver sorted, deduplicated spikes over the local adjacency list at the current step.
	// Targets are split into bands of ceil(N / columns) IDs, one band per lane-block column; a
	// task owns a range of whole bands, so every target's contributions arrive serially in
	// ascending source order regardless of task count or traversal order.
	std::size_t transmit(std::span<neuron_id const> spikes)
	{
		if (spikes.empty() || _adj.width() == 0)
			return 0;
		if (_opts.order == traversal::row_major)
			return transmit_row_major(spikes);

		lane_grid const grid = lane_grid::make(spikes.size(), _adj.width(), _opts.lane_width);
		std::uint64_t const band = (std::uint64_t{ _layout.neurons } + grid.columns - 1) / grid.columns;
		int const tasks = std::max(1, std::min<int>(_opts.threads, static_cast<int>(grid.columns)));
		_task_cursors.resize(static_cast<std::size_t>(tasks));
		_task_delivered.assign(static_cast<std::size_t>(tasks), 0);

		auto const run = [&](int k) {
			std::size_t const c0 = grid.columns * k / tasks;
			std::size_t const c1 = grid.columns * (k + 1) / tasks;
			auto & cursors = _task_cursors[static_cast<std::size_t>(k)];
			cursors.resize(spikes.size());
			for (std::size_t i = 0; i < spikes.size(); ++i) {
				auto const row = _adj.row(spikes[i]);
				cursors[i] = c0 == 0 ? 0
				                     : static_cast<std::uint32_t>(
				                           std::lower_bound(row.begin(), row.end(), static_cast<neuron_id>(c0 * band)) -
				                           row.begin());
			}
			std::size_t delivered = 0;
			for (std::size_t b = c0 * grid.spikes; b < c1 * grid.spikes; ++b) {
				auto const [i, column] = grid.at(b);
				// The last band is open-ended so the sentinel is the only stop.
				std::uint64_t const hi = column + 1 == grid.columns ? pad_sentinel : (column + 1) * band;
				neuron_id const src = spikes[i];
				auto const row = _adj.row(src);
				std::uint32_t cur = cursors[i];
				while (cur < row.size() && row[cur] < hi) {
					deliver(src, row[cur], std::size_t{ src } * _adj.width() + cur);
					++cur;
				}
				delivered += cur - cursors[i];
				cursors[i] = cur;
			}
			_task_delivered[static_cast<std::size_t>(k)] = delivered;
		};

		if (tasks == 1)
			run(0);
		else
			run_tasks(tasks, run);

		std::size_t delivered = 0;
		for (auto d : _task_delivered)
			delivered += d;
		after_transmit(spikes);
		return delivered;
	}

	// update_neurons, then transmit the spikes fired `delay` steps ago.
	step_stats step()
	{
		step_stats s;
		s.fired = update_neurons();
		auto const due = _ring.consume(_t);
		s.delivered = transmit(due);
		_ring.commit(_t);
		++_t;
		return s;
	}

	step_t time() const { return _t; }
	int delay() const { return _ring.delay(); }
	float dt() const { return _dt; }
	slice_layout const & layout() const { return _layout; }
	Model const & model() const { return _model; }
	adjacency_list const & adjacency() const { return _adj; }
	neuron_pool<Model> const & neurons() const { return _pools.neurons; }
	neuron_pool<Model> & neurons() { return _pools.neurons; }
	synapse_pool<Model> const & synapses() const { return _pools.synapses; }
	spike_ring & ring() { return _ring; }
	spike_ring const & ring() const { return _ring; }

	// Own spikes fired during each step so far (CSR layout; step t spans offsets[t]..offsets[t+1]).
	std::span<neuron_id const> recorded_ids() const { return _fired_ids; }
	std::span<std::uint64_t const> recorded_offsets() const { return _fired_offsets; }

	std::size_t synapse_bytes() const { return _pools.synapses.size_bytes(); }
	std::size_t neuron_bytes() const { return _pools.neurons.size_bytes(); }

private:
	template <typename Fn>
	void run_tasks(int tasks, Fn && fn)
	{
		if (!_arena) {
			for (int k = 0; k < tasks; ++k)
				fn(k);
			return;
		}
		_arena->execute([&] {
			tbb::parallel_for(0, tasks, [&](int k) { fn(k); }, tbb::static_partitioner{});
		});
	}

	void update_slices(std::size_t first, std::size_t last, std::vector<neuron_id> & fired)
	{
		auto const t = static_cast<std::uint64_t>(_t);
		for (std::size_t k = first; k < last; ++k) {
			id_range const slice = _layout.owned_slice(k);
			for (neuron_id j = slice.first; j < slice.last; ++j) {
				keyed_rng rng(_seed,
				              rng_domain::neuron_step,
				              j,
				              static_cast<std::uint32_t>(t),
				              static_cast<std::uint32_t>(t >> 32));
				if (_model.update_neuron(neuron_view<Model>(_pools.neurons, j), _dt, rng))
					fired.push_back(j);
			}
		}
	}

	void deliver(neuron_id src, neuron_id dst, std::size_t synapse)
	{
		delivery const d{ src, dst, _t };
		synapse_view<Model> syn(_pools.synapses, synapse);
		if constexpr (plastic_model<Model>) {
			step_t const post = _last_fire[dst];
			step_t const prev = _last_arrival[src];
			if (post != never && prev != never && post > prev)
				_model.on_post_spike(syn, d, static_cast<float>(post - prev) * _dt);
			if (post != never)
				_model.on_pre_spike(syn, d, static_cast<float>(_t - post) * _dt);
		}
		_model.receive_spike(syn, neuron_view<Model>(_pools.neurons, dst), d);
	}

	std::size_t transmit_row_major(std::span<neuron_id const> spikes)
	{
		std::size_t delivered = 0;
		for (neuron_id src : spikes) {
			auto const row = _adj.row(src);
			for (std::size_t j = 0; j < row.size() && row[j] != pad_sentinel; ++j, ++delivered)
				deliver(src, row[j], std::size_t{ src } * _adj.width() + j);
		}
		after_transmit(spikes);
		return delivered;
	}

	void after_transmit(std::span<neuron_id const> spikes)
	{
		if constexpr (plastic_model<Model>)
			for (neuron_id s : spikes)
				_last_arrival[s] = _t;
	}

	Model _model;
	slice_layout _layout;
	std::uint64_t _seed;
	float _dt;
	adjacency_list _adj;
	pools<Model> _pools;
	spike_ring _ring;
	worker_options _opts;
	step_t _t = 0;
	std::unique_ptr<tbb::task_arena> _arena;

	std::vector<step_t> _last_fire;
	std::vector<step_t> _last_arrival;

	std::vector<std::vector<neuron_id>> _task_fired;
	std::vector<std::vector<std::uint32_t>> _task_cursors;
	std::vector<std::size_t> _task_delivered;

	std::vector<neuron_id> _fired_ids;
	std::vector<std::uint64_t> _fired_offsets;
};
} // namespace spikeforge::engine
