#pragma once

#include <spikeforge/core/adjacency.hpp>
#include <spikeforge/core/error.hpp>
#include <spikeforge/core/rng.hpp>
#include <spikeforge/core/soa_pool.hpp>
#include <spikeforge/core/types.hpp>

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

namespace spikeforge
{
// A model declares its per-neuron and per-synapse state as field_lists and implements the
// callbacks below. Callbacks may only touch the views and rng they are handed.
template <typename Model>
using neuron_pool = soa_pool<typename Model::neuron_fields>;
template <typename Model>
using synapse_pool = soa_pool<typename Model::synapse_fields>;
template <typename Model>
using neuron_view = element_ref<neuron_pool<Model>>;
template <typename Model>
using synapse_view = element_ref<synapse_pool<Model>>;

// Passed to receive_spike and the plasticity hooks.
struct delivery
{
	neuron_id source;
	neuron_id target;
	step_t step;
};

template <typename Model>
concept neuron_model = requires(Model const & m,
                                neuron_view<Model> n,
                                synapse_view<Model> s,
                                keyed_rng & rng,
                                delivery const & d,
                                float dt) {
	typename Model::neuron_fields;
	typename Model::synapse_fields;
	{ m.init_neuron(n, rng) };
	{ m.update_neuron(n, dt, rng) } -> std::same_as<bool>;
	{ m.receive_spike(s, n, d) };
};

// Optional: per-synapse initial state, keyed by the edge (never by its position in a row).
template <typename Model>
concept has_synapse_init = requires(Model const & m, synapse_view<Model> s, neuron_id a, neuron_id b) {
	{ m.init_synapse(s, a, b) };
};

// Optional pair-based plasticity. dt_since_* is in seconds and never negative.
//   on_post_spike: the post neuron fired dt_since_pre after the previous presynaptic arrival.
//   on_pre_spike:  a presynaptic spike arrives dt_since_post after the post neuron last fired.
template <typename Model>
concept plastic_model = requires(Model const & m, synapse_view<Model> s, delivery const & d, float x) {
	{ m.on_pre_spike(s, d, x) };
	{ m.on_post_spike(s, d, x) };
};

template <typename Model>
struct pools
{
	neuron_pool<Model> neurons;
	synapse_pool<Model> synapses;
};

// Allocates field-major pools for n neurons and rows x width synapses and runs the model's
// initializers. Neuron state is seeded per neuron ID, synapse state per (source, target).
template <neuron_model Model>
pools<Model> make_pools(Model const & model, std::size_t n, std::size_t rows, std::size_t width, std::uint64_t seed = 0)
{
	if (n == 0)
		throw construction_error("neuron pool must hold at least one neuron");
	if (width != 0 && rows > std::numeric_limits<std::size_t>::max() / width)
		throw construction_error("synapse pool capacity overflows the address space");
	std::size_t const capacity = rows * width;
	std::size_t const per_synapse = std::max<std::size_t>(1, synapse_pool<Model>::bytes_per_element);
	if (capacity > std::numeric_limits<std::ptrdiff_t>::max() / per_synapse)
		throw construction_error("synapse pool capacity overflows the address space");

	pools<Model> p{ neuron_pool<Model>(n), synapse_pool<Model>(capacity) };
	for (std::size_t i = 0; i < n; ++i) {
		keyed_rng rng(seed, rng_domain::neuron_init, static_cast<std::uint32_t>(i), 0);
		model.init_neuron(neuron_view<Model>(p.neurons, i), rng);
	}
	return p;
}

template <neuron_model Model>
pools<Model> make_pools(Model const & model, std::size_t n, adjacency_list const & adjacency, std::uint64_t seed = 0)
{
	if (adjacency.rows() != n)
		throw construction_error("adjacency row count " + std::to_string(adjacency.rows()) +
		                         " does not match neuron count " + std::to_string(n));
	auto p = make_pools(model, n, adjacency.rows(), adjacency.width(), seed);
	if constexpr (has_synapse_init<Model>) {
		for (std::size_t i = 0; i < adjacency.rows(); ++i) {
			auto const row = adjacency.row(i);
			for (std::size_t j = 0; j < row.size() && row[j] != pad_sentinel; ++j)
				model.init_synapse(synapse_view<Model>(p.synapses, i * adjacency.width() + j),
				                   static_cast<neuron_id>(i),
				                   row[j]);
		}
	}
	return p;
}
} // namespace spikeforge
