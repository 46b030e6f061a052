#pragma once

// Independent reference implementations used as test oracles.

#include <spikeforge/core/adjacency.hpp>
#include <spikeforge/core/model.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <utility>
#include <vector>

namespace spikeforge::testing
{
using edge = std::pair<neuron_id, neuron_id>;

inline std::vector<edge> edges_of(adjacency_list const & adj)
{
	std::vector<edge> out;
	for (std::size_t i = 0; i < adj.rows(); ++i)
		for (neuron_id t : adj.row(i))
			if (t != pad_sentinel)
				out.emplace_back(static_cast<neuron_id>(i), t);
	std::sort(out.begin(), out.end());
	return out;
}

// Order-sensitive toy model: receive_spike is not commutative, and firing feeds back on the
// accumulated state, so any change in delivery order shows up in the final states.
struct order_probe
{
	using neuron_fields = field_list<float, std::int32_t>;
	using synapse_fields = field_list<float>;

	float base_rate = 0.03f;

	void init_neuron(neuron_view<order_probe> n, keyed_rng & rng) const
	{
		n.get<0>() = rng.uniform();
		n.get<1>() = 0;
	}
	void init_synapse(synapse_view<order_probe> s, neuron_id src, neuron_id dst) const
	{
		s.get<0>() = 0.001f * static_cast<float>((src * 7u + dst * 13u) % 101u);
	}
	bool update_neuron(neuron_view<order_probe> n, float, keyed_rng & rng) const
	{
		auto & x = n.get<0>();
		x = x * 0.97f;
		bool const fire = rng.uniform() < base_rate || x > 0.9f;
		if (fire) {
			x -= 0.5f;
			++n.get<1>();
		}
		return fire;
	}
	void receive_spike(synapse_view<order_probe> s, neuron_view<order_probe> post, delivery const & d) const
	{
		auto & x = post.get<0>();
		x = x * 0.75f + s.get<0>() + 1e-4f * static_cast<float>(d.source % 17u);
	}
};

// Brute-force single-worker simulation: every neuron updated each step, then every due spike's
// contributions gathered into one list, sorted by (target, source) and applied in that order.
template <neuron_model Model>
struct reference_simulation
{
	Model model;
	adjacency_list adj;
	pools<Model> state;
	std::uint64_t seed;
	int delay;
	float dt;
	step_t t = 0;
	std::vector<std::vector<neuron_id>> fired;

	reference_simulation(Model m, neuron_id n, adjacency_list a, std::uint64_t s, int d, float step)
	    : model(std::move(m))
	    , adj(std::move(a))
	    , state(make_pools(model, n, adj, s))
	    , seed(s)
	    , delay(d)
	    , dt(step)
	{
	}

	void step()
	{
		std::vector<neuron_id> now;
		for (std::size_t j = 0; j < state.neurons.size(); ++j) {
			keyed_rng rng(seed,
			              rng_domain::neuron_step,
			              static_cast<std::uint32_t>(j),
			              static_cast<std::uint32_t>(t),
			              static_cast<std::uint32_t>(static_cast<std::uint64_t>(t) >> 32));
			if (model.update_neuron(neuron_view<Model>(state.neurons, j), dt, rng))
				now.push_back(static_cast<neuron_id>(j));
		}
		if (t >= delay) {
			std::vector<std::tuple<neuron_id, neuron_id, std::size_t>> contributions;
			for (neuron_id src : fired[static_cast<std::size_t>(t - delay)]) {
				for (std::size_t k = 0; k < adj.width(); ++k) {
					neuron_id const dst = adj.row(src)[k];
					if (dst != pad_sentinel)
						contributions.emplace_back(dst, src, std::size_t{ src } * adj.width() + k);
				}
			}
			std::sort(contributions.begin(), contributions.end());
			for (auto const & [dst, src, syn] : contributions)
				model.receive_spike(synapse_view<Model>(state.synapses, syn),
				                    neuron_view<Model>(state.neurons, dst),
				                    delivery{ src, dst, t });
		}
		fired.push_back(std::move(now));
		++t;
	}
};
} // namespace spikeforge::testing
