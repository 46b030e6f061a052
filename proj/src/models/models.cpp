#include <spikeforge/core/error.hpp>
#include <spikeforge/models/constants.hpp>
#include <spikeforge/models/models.hpp>

#include <cmath>
#include <string>

namespace spikeforge::models
{
namespace
{
	namespace c = constants;

	neuron_id scaled_population(unsigned base, double scale, char const * what)
	{
		if (!(scale > 0.0) || !std::isfinite(scale))
			throw construction_error("scale must be positive and finite");
		double const n = std::round(base * scale);
		if (n < 1.0)
			throw construction_error(std::string("scale ") + std::to_string(scale) + " leaves the " + what +
			                         " population empty");
		if (n > 2.0e9)
			throw construction_error(std::string("scale ") + std::to_string(scale) + " makes the " + what +
			                         " population too large");
		return static_cast<neuron_id>(n);
	}

	// Two populations [0, e) and [e, e + i); each source population connects to everyone.
	topology_descriptor two_population_topology(neuron_id e, neuron_id i, double p)
	{
		topology_descriptor desc;
		desc.neurons = e + i;
		desc.rules.push_back({ { 0, e }, { 0, e + i }, p, std::nullopt });
		desc.rules.push_back({ { e, e + i }, { 0, e + i }, p, std::nullopt });
		desc.validate();
		return desc;
	}

	brunel::params brunel_params(double scale)
	{
		namespace b = c::brunel;
		neuron_id const e = scaled_population(b::excitatory, scale, "excitatory");
		neuron_id const i = scaled_population(b::inhibitory, scale, "inhibitory");

		lif_params const lif{ b::tau_m, b::v_rest, b::v_reset, b::v_thresh, b::t_ref };
		lif.validate();

		// Threshold rate: the external rate that would bring the mean input to threshold.
		double const nu_thr = b::v_thresh / (double{ b::j_exc } * b::excitatory * b::connectivity * b::tau_m);
		double const nu_ext = b::eta * nu_thr;

		brunel::params p{};
		p.excitatory = e;
		p.inhibitory = i;
		p.lif = lif;
		p.j_exc = static_cast<float>(b::j_exc * (double{ b::excitatory } / e));
		p.j_inh = static_cast<float>(-b::g_rel * b::j_exc * (double{ b::inhibitory } / i));
		p.j_ext = b::j_exc;
		p.ext_lambda = b::external_inputs * nu_ext * c::default_dt;
		p.ref_steps = lif.refractory_steps(c::default_dt);
		return p;
	}
} // namespace

void lif_params::validate() const
{
	if (!(tau_m > 0.0f))
		throw construction_error("membrane time constant must be positive");
	if (!(t_ref >= 0.0f))
		throw construction_error("refractory period must not be negative");
	if (!(v_rest < v_thresh) || !(v_reset < v_thresh))
		throw construction_error("rest and reset potentials must lie below threshold");
}

void stdp_params::validate() const
{
	if (!(tau_plus > 0.0f) || !(tau_minus > 0.0f))
		throw construction_error("STDP time constants must be positive");
	if (!(a_plus >= 0.0f) || !(a_minus >= 0.0f))
		throw construction_error("STDP amplitudes must not be negative");
	if (!(w_min <= w_max))
		throw construction_error("STDP weight bounds are inverted");
}

stdp_rule stdp_hooks(stdp_params const & params)
{
	params.validate();
	return stdp_rule{ params };
}

stdp_params default_stdp(float j_exc)
{
	namespace s = c::stdp;
	return { s::a_plus * j_exc, s::a_minus * j_exc, s::tau_plus, s::tau_minus, s::w_min * j_exc, s::w_max * j_exc };
}

model_setup<brunel> make_brunel(double scale)
{
	auto const p = brunel_params(scale);
	return { two_population_topology(p.excitatory, p.inhibitory, c::brunel::connectivity),
		     brunel(p),
		     c::brunel::delay_steps,
		     c::default_dt };
}

model_setup<brunel_plus> make_brunel_plus(double scale)
{
	auto const p = brunel_params(scale);
	return make_brunel_plus(scale, default_stdp(p.j_exc));
}

model_setup<brunel_plus> make_brunel_plus(double scale, stdp_params const & stdp)
{
	auto const p = brunel_params(scale);
	return { two_population_topology(p.excitatory, p.inhibitory, c::brunel::connectivity),
		     brunel_plus(p, stdp_hooks(stdp)),
		     c::brunel::delay_steps,
		     c::default_dt };
}

model_setup<vogels> make_vogels(double scale)
{
	namespace v = c::vogels;
	neuron_id const e = scaled_population(v::excitatory, scale, "excitatory");
	neuron_id const i = scaled_population(v::inhibitory, scale, "inhibitory");

	lif_params const lif{ v::tau_m, v::v_rest, v::v_reset, v::v_thresh, v::t_ref };
	lif.validate();

	vogels::params p{};
	p.excitatory = e;
	p.inhibitory = i;
	p.lif = lif;
	p.e_exc = v::e_exc;
	p.e_inh = v::e_inh;
	p.tau_exc = v::tau_exc;
	p.tau_inh = v::tau_inh;
	p.w_exc = static_cast<float>(v::w_exc * (double{ v::excitatory } / e));
	p.w_inh = static_cast<float>(v::w_inh * (double{ v::inhibitory } / i));
	p.ref_steps = lif.refractory_steps(c::default_dt);
	return { two_population_topology(e, i, v::connectivity), vogels(p), v::delay_steps, c::default_dt };
}

void vogels::init_neuron(neuron_ref n, keyed_rng & rng) const
{
	namespace c0 = constants::vogels;
	n.get<v>() = _p.lif.v_rest + c0::v0_offset + c0::v0_sigma * static_cast<float>(rng.normal());
	n.get<g_exc>() = std::max(0.0f, c0::g_exc0_mean + c0::g_exc0_sigma * static_cast<float>(rng.normal()));
	n.get<g_inh>() = std::max(0.0f, c0::g_inh0_mean + c0::g_inh0_sigma * static_cast<float>(rng.normal()));
	n.get<ref>() = 0;
}

model_setup<synth> make_synth(synth_params const & params)
{
	if (params.neurons == 0)
		throw construction_error("synth network needs at least one neuron");
	if (!(params.density >= 0.0 && params.density <= 1.0))
		throw construction_error("synth density must lie in [0,1]");
	if (!(params.activity >= 0.0 && params.activity <= 1.0))
		throw construction_error("synth activity must lie in [0,1]");
	if (params.delay < 1)
		throw construction_error("synth delay must be at least one step");

	topology_descriptor desc;
	desc.neurons = params.neurons;
	desc.rules.push_back({ { 0, params.neurons }, { 0, params.neurons }, params.density, std::nullopt });
	return { std::move(desc), synth(static_cast<float>(params.activity)), params.delay, c::default_dt };
}

model_kind parse_model(std::string_view name)
{
	if (name == "vogels")
		return model_kind::vogels;
	if (name == "brunel")
		return model_kind::brunel;
	if (name == "brunel+")
		return model_kind::brunel_plus;
	if (name == "synth")
		return model_kind::synth;
	throw usage_error("unknown model '" + std::string(name) + "' (expected vogels, brunel, brunel+ or synth)");
}

std::string_view model_name(model_kind kind)
{
	switch (kind) {
	case model_kind::vogels: return "vogels";
	case model_kind::brunel: return "brunel";
	case model_kind::brunel_plus: return "brunel+";
	case model_kind::synth: return "synth";
	}
	return "?";
}

double base_synapses(model_kind kind)
{
	switch (kind) {
	case model_kind::vogels: {
		double const n = c::vogels::excitatory + c::vogels::inhibitory;
		return n * n * c::vogels::connectivity;
	}
	case model_kind::brunel:
	case model_kind::brunel_plus: {
		double const n = c::brunel::excitatory + c::brunel::inhibitory;
		return n * n * c::brunel::connectivity;
	}
	case model_kind::synth: return 0.0;
	}
	return 0.0;
}
} // namespace spikeforge::models
