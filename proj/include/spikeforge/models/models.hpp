#pragma once

#include <spikeforge/core/model.hpp>
#include <spikeforge/core/types.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace spikeforge::models
{
// What a factory hands to the cluster: topology, model callbacks and integration settings.
template <typename Model>
struct model_setup
{
	topology_descriptor topology;
	Model model;
	int delay = 1;
	float dt = 1e-4f;
};

struct lif_params
{
	float tau_m;
	float v_rest;
	float v_reset;
	float v_thresh;
	float t_ref;

	// Requires v_rest < v_thresh, v_reset < v_thresh and positive time constants.
	void validate() const;
	std::int32_t refractory_steps(float dt) const { return static_cast<std::int32_t>(std::lround(t_ref / dt)); }
};

struct stdp_params
{
	float a_plus;
	float a_minus;
	float tau_plus;
	float tau_minus;
	float w_min;
	float w_max;

	void validate() const;
};

// Pair-based STDP with exponential windows; every update is clamped to [w_min, w_max].
struct stdp_rule
{
	stdp_params params;

	// Post spike dt_since_pre seconds after a presynaptic arrival.
	float potentiate(float w, float dt_since_pre) const
	{
		return std::clamp(w + params.a_plus * std::exp(-dt_since_pre / params.tau_plus), params.w_min, params.w_max);
	}
	// Presynaptic arrival dt_since_post seconds after a post spike.
	float depress(float w, float dt_since_post) const
	{
		return std::clamp(w - params.a_minus * std::exp(-dt_since_post / params.tau_minus), params.w_min, params.w_max);
	}
};

stdp_rule stdp_hooks(stdp_params const & params);

// Current-based LIF with delta synapses and Poisson background input.
class brunel
{
public:
	using neuron_fields = field_list<float, std::int32_t>;
	using synapse_fields = field_list<>;
	using neuron_ref = element_ref<soa_pool<neuron_fields>>;
	using synapse_ref = element_ref<soa_pool<synapse_fields>>;
	enum field : std::size_t
	{
		v,
		ref,
	};

	struct params
	{
		neuron_id excitatory;
		neuron_id inhibitory;
		lif_params lif;
		float j_exc;        // recurrent excitatory weight (scaled)
		float j_inh;        // recurrent inhibitory weight (scaled, negative)
		float j_ext;        // external PSP amplitude
		double ext_lambda;  // expected external spikes per neuron per step
		std::int32_t ref_steps;
	};

	explicit brunel(params p)
	    : _p(p)
	{
	}

	params const & parameters() const { return _p; }

	void init_neuron(neuron_ref n, keyed_rng & rng) const
	{
		n.get<v>() = _p.lif.v_rest + (_p.lif.v_thresh - _p.lif.v_rest) * rng.uniform();
		n.get<ref>() = 0;
	}

	bool update_neuron(neuron_ref n, float dt, keyed_rng & rng) const
	{
		auto & vm = n.get<v>();
		auto & r = n.get<ref>();
		if (r > 0) {
			--r;
			return false;
		}
		vm += (_p.lif.v_rest - vm) * (dt / _p.lif.tau_m) + _p.j_ext * static_cast<float>(rng.poisson(_p.ext_lambda));
		if (vm >= _p.lif.v_thresh) {
			vm = _p.lif.v_reset;
			r = _p.ref_steps;
			return true;
		}
		return false;
	}

	void receive_spike(synapse_ref, neuron_ref post, delivery const & d) const
	{
		if (post.get<ref>() == 0)
			post.get<v>() += d.source < _p.excitatory ? _p.j_exc : _p.j_inh;
	}

protected:
	params _p;
};

// Brunel with STDP on excitatory->excitatory synapses. Each synapse carries its weight.
class brunel_plus
{
public:
	using neuron_fields = brunel::neuron_fields;
	using synapse_fields = field_list<float>;
	using neuron_ref = element_ref<soa_pool<neuron_fields>>;
	using synapse_ref = element_ref<soa_pool<synapse_fields>>;
	enum field : std::size_t
	{
		v,
		ref,
	};
	enum synapse_field : std::size_t
	{
		w,
	};

	brunel_plus(brunel::params p, stdp_rule rule)
	    : _p(p)
	    , _stdp(rule)
	{
	}

	brunel::params const & parameters() const { return _p; }
	stdp_rule const & plasticity() const { return _stdp; }

	void init_neuron(neuron_ref n, keyed_rng & rng) const
	{
		n.get<v>() = _p.lif.v_rest + (_p.lif.v_thresh - _p.lif.v_rest) * rng.uniform();
		n.get<ref>() = 0;
	}

	void init_synapse(synapse_ref s, neuron_id source, neuron_id) const
	{
		s.get<w>() = source < _p.excitatory ? _p.j_exc : _p.j_inh;
	}

	bool update_neuron(neuron_ref n, float dt, keyed_rng & rng) const
	{
		auto & vm = n.get<v>();
		auto & r = n.get<ref>();
		if (r > 0) {
			--r;
			return false;
		}
		vm += (_p.lif.v_rest - vm) * (dt / _p.lif.tau_m) + _p.j_ext * static_cast<float>(rng.poisson(_p.ext_lambda));
		if (vm >= _p.lif.v_thresh) {
			vm = _p.lif.v_reset;
			r = _p.ref_steps;
			return true;
		}
		return false;
	}

	void receive_spike(synapse_ref s, neuron_ref post, delivery const &) const
	{
		if (post.get<ref>() == 0)
			post.get<v>() += s.get<w>();
	}

	void on_post_spike(synapse_ref s, delivery const & d, float dt_since_pre) const
	{
		if (plastic(d))
			s.get<w>() = _stdp.potentiate(s.get<w>(), dt_since_pre);
	}

	void on_pre_spike(synapse_ref s, delivery const & d, float dt_since_post) const
	{
		if (plastic(d))
			s.get<w>() = _stdp.depress(s.get<w>(), dt_since_post);
	}

private:
	bool plastic(delivery const & d) const { return d.source < _p.excitatory && d.target < _p.excitatory; }

	brunel::params _p;
	stdp_rule _stdp;
};

// Conductance-based LIF with exponentially decaying excitatory and inhibitory conductances.
class vogels
{
public:
	using neuron_fields = field_list<float, float, float, std::int32_t>;
	using synapse_fields = field_list<>;
	using neuron_ref = element_ref<soa_pool<neuron_fields>>;
	using synapse_ref = element_ref<soa_pool<synapse_fields>>;
	enum field : std::size_t
	{
		v,
		g_exc,
		g_inh,
		ref,
	};

	struct params
	{
		neuron_id excitatory;
		neuron_id inhibitory;
		lif_params lif;
		float e_exc;
		float e_inh;
		float tau_exc;
		float tau_inh;
		float w_exc; // scaled
		float w_inh; // scaled
		std::int32_t ref_steps;
	};

	explicit vogels(params p)
	    : _p(p)
	{
	}

	params const & parameters() const { return _p; }

	void init_neuron(neuron_ref n, keyed_rng & rng) const;

	bool update_neuron(neuron_ref n, float dt, keyed_rng &) const
	{
		auto & vm = n.get<v>();
		auto & ge = n.get<g_exc>();
		auto & gi = n.get<g_inh>();
		auto & r = n.get<ref>();

		bool fired = false;
		if (r > 0) {
			--r;
		} else {
			vm += (dt / _p.lif.tau_m) * ((_p.lif.v_rest - vm) + ge * (_p.e_exc - vm) + gi * (_p.e_inh - vm));
			if (vm >= _p.lif.v_thresh) {
				vm = _p.lif.v_reset;
				r = _p.ref_steps;
				fired = true;
			}
		}
		ge -= ge * (dt / _p.tau_exc);
		gi -= gi * (dt / _p.tau_inh);
		return fired;
	}

	void receive_spike(synapse_ref, neuron_ref post, delivery const & d) const
	{
		if (d.source < _p.excitatory)
			post.get<g_exc>() += _p.w_exc;
		else
			post.get<g_inh>() += _p.w_inh;
	}

private:
	params _p;
};

// Memory-traffic benchmark: Bernoulli firing, receive_spike bumps an accumulator that never
// feeds back into firing.
class synth
{
public:
	using neuron_fields = field_list<float>;
	using synapse_fields = field_list<>;
	using neuron_ref = element_ref<soa_pool<neuron_fields>>;
	using synapse_ref = element_ref<soa_pool<synapse_fields>>;
	enum field : std::size_t
	{
		acc,
	};

	explicit synth(float activity)
	    : _activity(activity)
	{
	}

	float activity() const { return _activity; }

	void init_neuron(neuron_ref n, keyed_rng &) const { n.get<acc>() = 0.0f; }
	bool update_neuron(neuron_ref, float, keyed_rng & rng) const { return rng.uniform() < _activity; }
	void receive_spike(synapse_ref, neuron_ref post, delivery const &) const { post.get<acc>() += 1.0f; }

private:
	float _activity;
};

struct synth_params
{
	neuron_id neurons;
	double density;
	double activity;
	int delay = 1;
};

// Populations are multiplied by `scale`; recurrent weights by base in-degree / scaled in-degree.
model_setup<brunel> make_brunel(double scale = 1.0);
model_setup<brunel_plus> make_brunel_plus(double scale = 1.0);
model_setup<brunel_plus> make_brunel_plus(double scale, stdp_params const & stdp);
model_setup<vogels> make_vogels(double scale = 1.0);
model_setup<synth> make_synth(synth_params const & params);

stdp_params default_stdp(float j_exc);

enum class model_kind
{
	vogels,
	brunel,
	brunel_plus,
	synth,
};

// Accepts "vogels", "brunel", "brunel+", "synth"; throws usage_error otherwise.
model_kind parse_model(std::string_view name);
std::string_view model_name(model_kind kind);

// Expected synapse count at scale 1; synth has no base size and reports 0.
double base_synapses(model_kind kind);
} // namespace spikeforge::models
