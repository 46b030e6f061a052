#include <doctest.h>

#include "support.hpp"

#include <spikeforge/engine/worker.hpp>
#include <spikeforge/models/models.hpp>
#include <spikeforge/topology/topology.hpp>

#include <algorithm>
#include <random>

using namespace spikeforge;
using namespace spikeforge::engine;

namespace
{
// Records every delivery in the order it happens.
struct tracer
{
	using neuron_fields = field_list<float>;
	using synapse_fields = field_list<>;
	std::vector<delivery> * log;

	void init_neuron(neuron_view<tracer> n, keyed_rng &) const { n.get<0>() = 0.0f; }
	bool update_neuron(neuron_view<tracer>, float, keyed_rng &) const { return false; }
	void receive_spike(synapse_view<tracer>, neuron_view<tracer> n, delivery const & d) const
	{
		log->push_back(d);
		n.get<0>() += 1.0f;
	}
};

slice_layout single(neuron_id n) { return { n, 1, 1, 0 }; }
} // namespace

TEST_CASE("strided loop index")
{
	CHECK(strided_index(0, 4, 2, 1) == 4);
	CHECK(strided_index(3, 4, 2, 1) == 7);
	CHECK(strided_index(4, 4, 2, 1) == 12);
	for (std::uint64_t i = 0; i < 100; ++i)
		CHECK(strided_index(i, 7, 1, 0) == i);
}

TEST_CASE("slice layout ownership matches the strided index")
{
	for (neuron_id n : { 1u, 10u, 97u, 1000u })
		for (std::uint32_t s : { 1u, 3u, 32u })
			for (int g : { 1, 2, 3, 8 }) {
				std::size_t smallest = n, largest = 0;
				for (int w = 0; w < g; ++w) {
					slice_layout const l{ n, s, g, w };
					std::vector<neuron_id> walked;
					for (std::uint64_t i = 0;; ++i) {
						auto const j = strided_index(i, s, g, w);
						if (j >= n)
							break;
						walked.push_back(static_cast<neuron_id>(j));
					}
					std::vector<neuron_id> owned;
					for (std::size_t k = 0; k < l.owned_slices(); ++k)
						for (neuron_id j = l.owned_slice(k).first; j < l.owned_slice(k).last; ++j)
							owned.push_back(j);
					CHECK(walked == owned);
					for (neuron_id j : owned)
						CHECK(l.owns(j));
					CHECK(l.owned_count() == owned.size());
					smallest = std::min(smallest, owned.size());
					largest = std::max(largest, owned.size());
				}
				CHECK(largest - smallest <= s);
			}
}

TEST_CASE("lane grid enumerates blocks column-major")
{
	auto const grid = lane_grid::make(2, 64, 32);
	REQUIRE(grid.size() == 4);
	CHECK(grid.at(0) == lane_grid::block{ 0, 0 });
	CHECK(grid.at(1) == lane_grid::block{ 1, 0 });
	CHECK(grid.at(2) == lane_grid::block{ 0, 1 });
	CHECK(grid.at(3) == lane_grid::block{ 1, 1 });
}

TEST_CASE("transmit delivers each valid entry once, per target in ascending source order")
{
	topology_descriptor desc{ 300, { { { 0, 300 }, { 0, 300 }, 0.3, std::nullopt } } };
	auto adj = topology::build_adjacency(desc, 4).adjacency;
	std::vector<neuron_id> spikes{ 3, 17, 18, 150, 299 };
	std::size_t expected = 0;
	for (neuron_id s : spikes)
		expected += adj.degree(s);

	for (int threads : { 1, 3 })
		for (std::uint32_t lanes : { 32u, 64u })
			for (auto order : { traversal::column_major, traversal::row_major }) {
				std::vector<delivery> log;
				worker<tracer> w(tracer{ &log }, single(300), 1, 1, 1e-4f, adj, { lanes, threads, order, false });
				CHECK(w.transmit(spikes) == expected);
				CHECK(log.size() == expected);
				std::vector<std::pair<neuron_id, neuron_id>> pairs;
				for (auto const & d : log)
					pairs.emplace_back(d.target, d.source);
				// For each target, sources must arrive ascending.
				std::stable_sort(pairs.begin(), pairs.end(),
				                 [](auto const & a, auto const & b) { return a.first < b.first; });
				CHECK(std::is_sorted(pairs.begin(), pairs.end()));
				CHECK(std::adjacent_find(pairs.begin(), pairs.end()) == pairs.end());
			}
}

TEST_CASE("empty spike array triggers no callbacks")
{
	std::vector<delivery> log;
	auto adj = topology::build_adjacency({ 50, { { { 0, 50 }, { 0, 50 }, 0.5, std::nullopt } } }, 1).adjacency;
	worker<tracer> w(tracer{ &log }, single(50), 1, 1, 1e-4f, adj);
	CHECK(w.transmit({}) == 0);
	CHECK(log.empty());
}

TEST_CASE("column-major equals the sorted row-major reference on a 4K-neuron Brunel network")
{
	auto const setup = models::make_brunel(4000.0 / 12500.0);
	REQUIRE(setup.topology.neurons == 4000);
	auto const adj = topology::build_adjacency(setup.topology, 77, { topology::target_scope::all(),
	                                                                 topology::overflow_policy::grow })
	                     .adjacency;
	testing::reference_simulation<models::brunel> ref(setup.model, 4000, adj, 77, setup.delay, setup.dt);
	worker<models::brunel> w(setup.model, single(4000), 77, setup.delay, setup.dt, adj, { 32, 2 });
	std::size_t fired = 0;
	for (int t = 0; t < 1000; ++t) {
		ref.step();
		fired += w.step().fired;
	}
	CHECK(fired > 1000);
	CHECK(w.neurons() == ref.state.neurons);
}

TEST_CASE("column-major equals the reference on an order-sensitive model, any task count")
{
	std::mt19937_64 gen(5);
	for (int instance = 0; instance < 6; ++instance) {
		neuron_id const n = 200 + static_cast<neuron_id>(gen() % 800);
		double const p = 0.01 + 0.2 * std::uniform_real_distribution<double>()(gen);
		int const delay = 1 + static_cast<int>(gen() % 4);
		topology_descriptor desc{ n, { { { 0, n }, { 0, n }, p, std::nullopt } } };
		auto const adj = topology::build_adjacency(desc, instance, { topology::target_scope::all(),
		                                                             topology::overflow_policy::grow })
		                     .adjacency;
		testing::reference_simulation<testing::order_probe> ref({}, n, adj, 9, delay, 1e-4f);
		worker<testing::order_probe> a({}, single(n), 9, delay, 1e-4f, adj, { 32, 1 });
		worker<testing::order_probe> b({}, single(n), 9, delay, 1e-4f, adj, { 32, 4 });
		worker<testing::order_probe> c({}, single(n), 9, delay, 1e-4f, adj, { 64, 3, traversal::row_major });
		for (int t = 0; t < 60; ++t) {
			ref.step();
			a.step();
			b.step();
			c.step();
		}
		CHECK(a.neurons() == ref.state.neurons);
		CHECK(b.neurons() == ref.state.neurons);
		CHECK(c.neurons() == ref.state.neurons);
	}
}

TEST_CASE("step: fired at t=0 with d=4 is delivered during step 4")
{
	std::vector<delivery> log;
	struct at_zero
	{
		using neuron_fields = field_list<std::int32_t>;
		using synapse_fields = field_list<>;
		std::vector<delivery> * log;
		void init_neuron(neuron_view<at_zero> n, keyed_rng &) const { n.get<0>() = 0; }
		bool update_neuron(neuron_view<at_zero> n, float, keyed_rng &) const
		{
			bool const fire = n.index() == 2 && n.get<0>() == 0;
			++n.get<0>();
			return fire;
		}
		void receive_spike(synapse_view<at_zero>, neuron_view<at_zero>, delivery const & d) const { log->push_back(d); }
	};
	auto adj = topology::build_adjacency({ 8, { { { 0, 8 }, { 0, 8 }, 1.0, std::nullopt } } }, 1).adjacency;
	worker<at_zero> w(at_zero{ &log }, single(8), 1, 4, 1e-4f, adj);
	for (int t = 0; t < 9; ++t) {
		auto const s = w.step();
		CHECK(s.delivered == (t == 4 ? 8u : 0u));
	}
	REQUIRE(log.size() == 8);
	for (auto const & d : log) {
		CHECK(d.step == 4);
		CHECK(d.source == 2);
	}
}

TEST_CASE("synth: per-step fired count for N=1e5 at 0.5% activity")
{
	auto const setup = models::make_synth({ 100000, 0.0, 0.005, 1 });
	auto adj = topology::build_adjacency(setup.topology, 3).adjacency;
	worker<models::synth> w(setup.model, single(100000), 3, 1, setup.dt, std::move(adj), { 32, 1, traversal::column_major, false });
	for (int t = 0; t < 1000; ++t) {
		auto const s = w.step();
		CHECK(s.fired >= 300);
		CHECK(s.fired <= 700);
	}
}

TEST_CASE("zero activity delivers nothing; delivered count equals the sum of row degrees")
{
	auto const quiet = models::make_synth({ 500, 0.1, 0.0, 1 });
	auto adj = topology::build_adjacency(quiet.topology, 3).adjacency;
	worker<models::synth> w(quiet.model, single(500), 3, 1, quiet.dt, adj);
	for (int t = 0; t < 50; ++t)
		CHECK(w.step().delivered == 0);

	auto const busy = models::make_synth({ 500, 0.1, 0.2, 2 });
	auto adj2 = topology::build_adjacency(busy.topology, 3).adjacency;
	worker<models::synth> v(busy.model, single(500), 3, 2, busy.dt, adj2);
	std::vector<std::size_t> fired_degrees;
	for (int t = 0; t < 20; ++t) {
		auto const before = v.recorded_ids().size();
		auto const s = v.step();
		std::size_t deg = 0;
		for (std::size_t k = before; k < v.recorded_ids().size(); ++k)
			deg += adj2.degree(v.recorded_ids()[k]);
		fired_degrees.push_back(deg);
		if (t >= 2)
			CHECK(s.delivered == fired_degrees[static_cast<std::size_t>(t - 2)]);
	}
}

TEST_CASE("a worker only updates the neurons it owns")
{
	auto const setup = models::make_synth({ 1000, 0.05, 0.1, 1 });
	for (int g = 0; g < 3; ++g) {
		slice_layout const l{ 1000, 16, 3, g };
		auto adj = topology::build_adjacency(setup.topology, 2, { topology::target_scope::strided(16, 3, g) }).adjacency;
		worker<models::synth> w(setup.model, l, 2, 1, setup.dt, adj);
		for (int t = 0; t < 30; ++t)
			w.step();
		for (neuron_id j : w.recorded_ids())
			CHECK(l.owns(j));
		for (neuron_id j = 0; j < 1000; ++j)
			if (!l.owns(j))
				CHECK(w.neurons().at<models::synth::acc>(j) == 0.0f);
	}
}
