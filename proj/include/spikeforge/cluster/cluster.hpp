#pragma once

#include <spikeforge/cluster/audit.hpp>
#include <spikeforge/cluster/partition.hpp>
#include <spikeforge/cluster/schedule.hpp>
#include <spikeforge/cluster/sync_plan.hpp>
#include <spikeforge/core/error.hpp>
#include <spikeforge/engine/worker.hpp>
#include <spikeforge/models/models.hpp>
#include <spikeforge/topology/topology.hpp>

#include <algorithm>
#include <atomic>
#include <barrier>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <new>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace spikeforge::cluster
{
// Global spike train: the sorted IDs fired during each step (CSR layout).
struct spike_train
{
	std::vector<std::uint64_t> offsets{ 0 };
	std::vector<neuron_id> ids;

	std::size_t steps() const { return offsets.size() - 1; }
	std::size_t count() const { return ids.size(); }
	std::span<neuron_id const> at(std::size_t t) const
	{
		return { ids.data() + offsets[t], static_cast<std::size_t>(offsets[t + 1] - offsets[t]) };
	}

	friend bool operator==(spike_train const &, spike_train const &) = default;
};

// Number of (step, id) pairs present in exactly one of the trains; steps beyond the shorter
// train count in full.
std::size_t differing_spikes(spike_train const & a, spike_train const & b);

struct cluster_options
{
	int workers = 1;
	std::optional<std::uint32_t> slice_width;
	int threads = 0; // per worker; 0: default_threads(workers)
	std::uint32_t lane_width = 32;
	engine::traversal order = engine::traversal::column_major;
	// grow keeps every generated edge so results cannot depend on how the network is split.
	topology::overflow_policy overflow = topology::overflow_policy::grow;
	bool audit = false;
	bool record_spikes = true;
};

// hardware threads / workers, at least 1, capped by SPIKEFORGE_THREADS when set.
int default_threads(int workers);

struct worker_report
{
	std::size_t owned = 0;
	std::uint64_t synapses = 0;
	std::size_t rows = 0;
	std::size_t width = 0;
	std::size_t estimated_width = 0;
	std::size_t adjacency_bytes = 0;
	std::size_t synapse_bytes = 0;
	std::size_t neuron_bytes = 0;
	std::uint64_t dropped_edges = 0;
	std::uint64_t overflow_rows = 0;
	std::size_t peak_bytes = 0;
	double setup_seconds = 0.0;
};

// One synchronization of a half batch.
struct sync_timing
{
	std::int64_t half = 0;
	double seconds = 0.0;        // count download + payload transfer
	double hidden_fraction = 0.0; // share of `seconds` that overlapped stepping of the next half
	std::size_t spikes = 0;
	std::size_t copies = 0;
	std::size_t bytes = 0;
};

struct batch_timing
{
	double step_seconds = 0.0; // wall time of the batch, barrier to barrier
	double sync_seconds = 0.0;
	double hidden_fraction = 0.0;
	std::size_t copies = 0;
};

struct timing_stats
{
	std::vector<batch_timing> batches;
	std::vector<sync_timing> syncs;
	double run_seconds = 0.0;

	// Totals over batches [skip, end); used to leave warm-up batches out.
	double step_seconds(std::size_t skip = 0) const;
	double sync_seconds(std::size_t skip = 0) const;
};

// G in-process workers plus a coordinator (the calling thread). Each worker generates only the
// incoming edges of its own neurons. A run proceeds in half batches separated by barriers:
// while the workers step half h, the coordinator synchronizes the spikes of half h - 1.
template <neuron_model Model>
class cluster
{
public:
	cluster(models::model_setup<Model> const & setup, std::uint64_t seed, cluster_options opts = {})
	    : _desc(setup.topology)
	    , _schedule(setup.delay)
	    , _dt(setup.dt)
	    , _part(make_partition(setup.topology.neurons, opts.workers, opts.slice_width))
	    , _plan(build_sync_plan(opts.workers))
	    , _opts(opts)
	    , _log(opts.audit)
	{
		if (_opts.threads <= 0)
			_opts.threads = default_threads(_opts.workers);
		engine::worker_options const wopts{ _opts.lane_width, _opts.threads, _opts.order, _opts.record_spikes };
		for (int g = 0; g < _part.workers; ++g) {
			auto const t0 = std::chrono::steady_clock::now();
			try {
				auto built = topology::build_adjacency(
				    _desc, seed, { _part.scope(g), _opts.overflow, std::nullopt, _opts.threads });
				worker_report r;
				r.synapses = built.edges;
				r.dropped_edges = built.dropped_edges;
				r.overflow_rows = built.overflow_rows;
				r.estimated_width = built.estimated_width;
				r.peak_bytes = built.peak_bytes;
				r.rows = built.adjacency.rows();
				r.width = built.adjacency.width();
				r.adjacency_bytes = built.adjacency.size_bytes();
				_workers.push_back(std::make_unique<engine::worker<Model>>(
				    setup.model, _part.layout(g), seed, setup.delay, setup.dt, std::move(built.adjacency), wopts));
				r.owned = _part.layout(g).owned_count();
				r.synapse_bytes = _workers.back()->synapse_bytes();
				r.neuron_bytes = _workers.back()->neuron_bytes();
				r.setup_seconds = seconds_since(t0);
				_reports.push_back(r);
			} catch (std::bad_alloc const &) {
				throw worker_failure(g, 0, "out of memory while constructing the sub-network");
			} catch (construction_error const & e) {
				throw worker_failure(g, 0, e.what());
			}
		}
		_outbox.assign(2, std::vector<std::vector<std::byte>>(static_cast<std::size_t>(_part.workers)));
		_inbox = _outbox;
	}

	// Advance every worker by `steps` steps. A run must start on a batch boundary; all spikes
	// are synchronized before it returns.
	void run(step_t steps)
	{
		if (steps <= 0)
			return;
		if (_t % _schedule.delay != 0)
			throw usage_error("a run must start on a batch boundary");
		step_t const t0 = _t;
		step_t const t1 = t0 + steps;
		std::int64_t const h0 = 2 * (t0 / _schedule.delay);
		std::int64_t const halves = _schedule.halves(t1);
		std::size_t const first_sync = _timing.syncs.size();
		std::size_t const participants = static_cast<std::size_t>(_part.workers) + 1;

		_release.assign(static_cast<std::size_t>(halves - h0 + 2), 0.0);
		_worker_end.assign(static_cast<std::size_t>((halves - h0 + 1) * _part.workers), 0.0);
		_stop = false;
		_failed = false;
		_failure = nullptr;
		std::int64_t current = h0;
		double const origin = _log.now();
		_release[0] = origin;

		auto on_release = [&]() noexcept {
			_log.record(event_kind::barrier, -1, current);
			++current;
			_release[static_cast<std::size_t>(current - h0)] = _log.now();
			_stop = _failed.load();
		};
		std::barrier sync_point(static_cast<std::ptrdiff_t>(participants), on_release);

		auto range = [&](std::int64_t h) {
			return std::pair{ std::clamp(_schedule.half_begin(h), t0, t1), std::clamp(_schedule.half_end(h), t0, t1) };
		};

		auto worker_loop = [&](int g) {
			auto & w = *_workers[static_cast<std::size_t>(g)];
			bool healthy = true;
			for (std::int64_t h = h0; h < halves + 2; ++h) {
				if (healthy) {
					try {
						if (h - 2 >= h0)
							merge_inbox(g, h - 2, range(h - 2));
						if (h < halves) {
							_log.record(event_kind::half_begin, g, h);
							auto const [b, e] = range(h);
							for (step_t t = b; t < e; ++t)
								w.step();
							publish(g, h, b, e);
							_log.record(event_kind::half_end, g, h);
							_worker_end[static_cast<std::size_t>((h - h0) * _part.workers + g)] = _log.now();
						}
					} catch (std::exception const & ex) {
						fail(g, w.time(), ex.what());
						healthy = false;
					}
				}
				if (h + 1 < halves + 2)
					sync_point.arrive_and_wait();
				if (_stop)
					return;
			}
		};

		{
			std::vector<std::jthread> threads;
			threads.reserve(static_cast<std::size_t>(_part.workers));
			for (int g = 0; g < _part.workers; ++g)
				threads.emplace_back(worker_loop, g);

			for (std::int64_t h = h0; h < halves + 1; ++h) {
				if (h - 1 >= h0) {
					try {
						synchronize(h - 1, range(h - 1));
					} catch (std::exception const & ex) {
						fail(-1, _t, ex.what());
					}
				}
				sync_point.arrive_and_wait();
				if (_stop)
					break;
			}
		}

		if (_failure)
			std::rethrow_exception(_failure);

		for (std::size_t k = first_sync; k < _timing.syncs.size(); ++k) {
			auto & s = _timing.syncs[k];
			std::size_t const next = static_cast<std::size_t>(s.half + 1 - h0);
			double end = _release[next];
			for (int g = 0; g < _part.workers; ++g)
				end = std::max(end, _worker_end[next * _part.workers + g]);
			double const begin = _sync_begin[k - first_sync];
			double const finish = begin + s.seconds;
			double const hidden = std::max(0.0, std::min(finish, end) - std::max(begin, _release[next]));
			s.hidden_fraction = s.seconds > 0.0 ? std::min(1.0, hidden / s.seconds) : 1.0;
		}
		for (std::int64_t h = h0; h < halves; h += 2) {
			batch_timing b;
			std::size_t const i = static_cast<std::size_t>(h - h0);
			b.step_seconds = _release[i + 2] - _release[i];
			double hidden = 0.0;
			for (std::size_t k = first_sync; k < _timing.syncs.size(); ++k) {
				auto const & s = _timing.syncs[k];
				if (s.half == h || s.half == h + 1) {
					b.sync_seconds += s.seconds;
					b.copies += s.copies;
					hidden += s.hidden_fraction * s.seconds;
				}
			}
			b.hidden_fraction = b.sync_seconds > 0.0 ? hidden / b.sync_seconds : 1.0;
			_timing.batches.push_back(b);
		}
		_sync_begin.clear();
		_timing.run_seconds += _release.back() - origin;
		_t = t1;
	}

	// run() for ceil(seconds / dt) steps.
	void run_for(double seconds) { run(steps_for(seconds, _dt)); }

	static step_t steps_for(double seconds, float dt)
	{
		if (!(seconds > 0.0))
			return 0;
		double const steps = seconds / static_cast<double>(dt);
		return static_cast<step_t>(std::ceil(steps - 1e-6 * std::max(1.0, steps)));
	}

	step_t time() const { return _t; }
	float dt() const { return _dt; }
	batch_schedule const & schedule() const { return _schedule; }
	partition const & layout() const { return _part; }
	sync_plan const & plan() const { return _plan; }
	cluster_options const & options() const { return _opts; }
	std::vector<worker_report> const & reports() const { return _reports; }
	timing_stats const & timing() const { return _timing; }
	audit_log const & log() const { return _log; }
	engine::worker<Model> const & worker(int g) const { return *_workers[static_cast<std::size_t>(g)]; }

	// Union of every worker's recorded spikes.
	spike_train train() const
	{
		spike_train out;
		std::size_t const steps = static_cast<std::size_t>(_t);
		std::vector<neuron_id> scratch;
		for (std::size_t t = 0; t < steps; ++t) {
			scratch.clear();
			for (auto const & w : _workers) {
				auto const off = w->recorded_offsets();
				if (t + 1 >= off.size())
					continue;
				auto const ids = w->recorded_ids();
				scratch.insert(scratch.end(), ids.begin() + off[t], ids.begin() + off[t + 1]);
			}
			std::sort(scratch.begin(), scratch.end());
			out.ids.insert(out.ids.end(), scratch.begin(), scratch.end());
			out.offsets.push_back(out.ids.size());
		}
		return out;
	}

private:
	static double seconds_since(std::chrono::steady_clock::time_point t0)
	{
		return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	}

	void fail(int g, step_t t, char const * what)
	{
		std::lock_guard lock(_failure_mutex);
		if (!_failure)
			_failure = std::make_exception_ptr(worker_failure(g, t, what));
		_failed = true;
	}

	// Own spikes of steps [b, e), still unmerged in the ring, serialized for the coordinator.
	void publish(int g, std::int64_t h, step_t b, step_t e)
	{
		auto const & w = *_workers[static_cast<std::size_t>(g)];
		spike_batch batch;
		batch.first = b;
		for (step_t t = b; t < e; ++t) {
			auto const ids = w.ring().committed(t);
			std::vector<neuron_id> sorted(ids.begin(), ids.end());
			std::sort(sorted.begin(), sorted.end());
			batch.append(sorted);
		}
		_outbox[static_cast<std::size_t>(h % 2)][static_cast<std::size_t>(g)] = serialize(batch);
	}

	void merge_inbox(int g, std::int64_t h, std::pair<step_t, step_t> steps)
	{
		auto & bytes = _inbox[static_cast<std::size_t>(h % 2)][static_cast<std::size_t>(g)];
		_log.record(event_kind::payload_read, g, h);
		if (bytes.empty())
			return;
		spike_batch const batch = deserialize(bytes);
		bytes.clear();
		if (batch.first != steps.first || batch.steps() != static_cast<std::size_t>(steps.second - steps.first))
			throw error("synchronized spikes cover the wrong steps");
		auto & ring = _workers[static_cast<std::size_t>(g)]->ring();
		for (std::size_t k = 0; k < batch.steps(); ++k) {
			auto const ids = batch.at(k);
			ring.assign(batch.first + static_cast<step_t>(k), { ids.begin(), ids.end() });
		}
	}

	void synchronize(std::int64_t h, std::pair<step_t, step_t> steps)
	{
		double const begin = _log.now();
		auto & out = _outbox[static_cast<std::size_t>(h % 2)];
		auto & in = _inbox[static_cast<std::size_t>(h % 2)];

		// Count download, kept separate from the payload.
		std::size_t total = 0;
		for (auto const & bytes : out) {
			std::size_t const header = 16 + 4 * static_cast<std::size_t>(steps.second - steps.first);
			total += bytes.size() >= header ? (bytes.size() - header) / sizeof(neuron_id) : 0;
		}
		_log.record(event_kind::count_read, -1, h);

		sync_timing s;
		s.half = h;
		s.spikes = total;
		if (total == 0) {
			_log.record(event_kind::payload_skip, -1, h);
			for (auto & bytes : in)
				bytes.clear();
		} else {
			_log.record(event_kind::transfer_begin, -1, h);
			std::vector<spike_batch> sets;
			sets.reserve(out.size());
			for (auto const & bytes : out)
				sets.push_back(deserialize(bytes));
			auto const stats = execute(_plan, sets);
			s.copies = stats.copies;
			s.bytes = stats.bytes;
			for (std::size_t g = 0; g < in.size(); ++g)
				in[g] = serialize(sets[g]);
			_log.record(event_kind::transfer_end, -1, h);
		}
		s.seconds = _log.now() - begin;
		_sync_begin.push_back(begin);
		_timing.syncs.push_back(s);
	}

	topology_descriptor _desc;
	batch_schedule _schedule;
	float _dt;
	partition _part;
	sync_plan _plan;
	cluster_options _opts;
	audit_log _log;
	std::vector<std::unique_ptr<engine::worker<Model>>> _workers;
	std::vector<worker_report> _reports;
	timing_stats _timing;
	step_t _t = 0;

	// [parity][worker] serialized spike batches; parity = half % 2.
	std::vector<std::vector<std::vector<std::byte>>> _outbox;
	std::vector<std::vector<std::vector<std::byte>>> _inbox;

	std::vector<double> _release;
	std::vector<double> _worker_end;
	std::vector<double> _sync_begin;
	std::atomic<bool> _stop{ false };
	std::atomic<bool> _failed{ false };
	std::mutex _failure_mutex;
	std::exception_ptr _failure;
};

struct simulation_result
{
	spike_train train;
	timing_stats timing;
	std::vector<worker_report> workers;
	std::vector<audit_event> audit;
	double setup_seconds = 0.0;
	double wall_seconds = 0.0;
	double bio_seconds = 0.0;
	std::uint32_t slice_width = 0;

	double ratio() const { return bio_seconds > 0.0 ? wall_seconds / bio_seconds : 0.0; }
};

// Build a cluster for `setup`, simulate `seconds` of biological time and collect the result.
template <neuron_model Model>
simulation_result simulate(models::model_setup<Model> const & setup,
                           std::uint64_t seed,
                           double seconds,
                           cluster_options const & opts = {})
{
	auto const t0 = std::chrono::steady_clock::now();
	cluster<Model> c(setup, seed, opts);
	auto const t1 = std::chrono::steady_clock::now();
	c.run_for(seconds);
	auto const t2 = std::chrono::steady_clock::now();

	simulation_result r;
	r.train = c.train();
	r.timing = c.timing();
	r.workers = c.reports();
	r.audit = c.log().events();
	r.setup_seconds = std::chrono::duration<double>(t1 - t0).count();
	r.wall_seconds = std::chrono::duration<double>(t2 - t1).count();
	r.bio_seconds = static_cast<double>(c.time()) * setup.dt;
	r.slice_width = c.layout().slice_width;
	return r;
}
} // namespace spikeforge::cluster
