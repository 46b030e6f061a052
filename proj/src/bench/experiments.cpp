#include <spikeforge/bench/bench.hpp>
#include <spikeforge/core/error.hpp>
#include <spikeforge/models/constants.hpp>
#include <spikeforge/topology/descriptor_io.hpp>

#include <chrono>
#include <cmath>
#include <string>

namespace spikeforge::bench
{
namespace
{
	namespace c = models::constants;

	double base_neurons(models::model_kind kind)
	{
		switch (kind) {
		case models::model_kind::vogels: return c::vogels::excitatory + c::vogels::inhibitory;
		case models::model_kind::brunel:
		case models::model_kind::brunel_plus: return c::brunel::excitatory + c::brunel::inhibitory;
		case models::model_kind::synth: return 1e4;
		}
		return 1.0;
	}

	// Scale factor for the biological models, neuron count for synth.
	double resolve_size(experiment_config const & config, double size, std::optional<topology_descriptor> const & custom)
	{
		bool const synth = config.model == models::model_kind::synth;
		if (custom)
			return synth ? custom->neurons : custom->neurons / base_neurons(config.model);
		if (!config.synapses.empty()) {
			if (synth) {
				if (config.density <= 0.0)
					throw usage_error("--synapses needs a positive --density for synth");
				return std::max(1.0, std::round(std::sqrt(size / config.density)));
			}
			return std::sqrt(size / models::base_synapses(config.model));
		}
		if (!config.neurons.empty())
			return synth ? std::round(size) : size / base_neurons(config.model);
		return synth ? base_neurons(config.model) : 1.0;
	}

	template <typename Setup>
	Setup & override(Setup & setup, experiment_config const & config, std::optional<topology_descriptor> const & custom)
	{
		if (config.delay)
			setup.delay = *config.delay;
		if (config.dt)
			setup.dt = static_cast<float>(*config.dt);
		if (custom)
			setup.topology = *custom;
		return setup;
	}

	// Calls fn(model_setup) with the configured model at the given point of the size axis.
	template <typename Fn>
	auto with_model(experiment_config const & config, double size, Fn && fn)
	{
		std::optional<topology_descriptor> custom;
		if (config.topology)
			custom = topology::load_descriptor(*config.topology);
		double const x = resolve_size(config, size, custom);
		switch (config.model) {
		case models::model_kind::vogels: {
			auto s = models::make_vogels(x);
			return fn(override(s, config, custom));
		}
		case models::model_kind::brunel: {
			auto s = models::make_brunel(x);
			return fn(override(s, config, custom));
		}
		case models::model_kind::brunel_plus: {
			auto s = models::make_brunel_plus(x);
			return fn(override(s, config, custom));
		}
		case models::model_kind::synth:
		default: {
			if (x >= 4.0e9)
				throw usage_error("network too large");
			auto s = models::make_synth({ static_cast<neuron_id>(x), config.density, config.activity, 1 });
			return fn(override(s, config, custom));
		}
		}
	}

	cluster::cluster_options options_for(experiment_config const & config, int workers)
	{
		cluster::cluster_options o;
		o.workers = workers;
		o.slice_width = config.slice_width;
		o.threads = config.threads;
		o.record_spikes = false;
		return o;
	}

	double seconds_since(std::chrono::steady_clock::time_point t0)
	{
		return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
	}
} // namespace

void experiment_config::validate() const
{
	for (int g : workers)
		if (g < 1)
			throw usage_error("--gpus must be at least 1, got " + std::to_string(g));
	if (workers.empty())
		throw usage_error("at least one worker count is required");
	if (seeds.empty())
		throw usage_error("at least one seed is required");
	for (double x : neurons)
		if (!(x >= 1.0))
			throw usage_error("--neurons must be at least 1");
	for (double x : synapses)
		if (!(x >= 1.0))
			throw usage_error("--synapses must be at least 1");
	if (!(seconds >= 0.0) || !std::isfinite(seconds))
		throw usage_error("--seconds must not be negative");
	if (!(density >= 0.0 && density <= 1.0))
		throw usage_error("--density must lie in [0,1]");
	if (!(activity >= 0.0 && activity <= 1.0))
		throw usage_error("--activity must lie in [0,1]");
	if (delay && *delay < 1)
		throw usage_error("--delay must be at least 1");
	if (dt && !(*dt > 0.0))
		throw usage_error("--dt must be positive");
	if (slice_width && *slice_width < 1)
		throw usage_error("--slice-width must be at least 1");
	if (warmup_batches < 0)
		throw usage_error("--warmup must not be negative");
}

setup_measurement measure_setup(experiment_config const & config, double size, int workers, std::uint64_t seed)
{
	return with_model(config, size, [&](auto const & setup) {
		using model_type = std::decay_t<decltype(setup.model)>;
		auto const t0 = std::chrono::steady_clock::now();
		cluster::cluster<model_type> c(setup, seed, options_for(config, workers));
		setup_measurement m;
		m.seconds = seconds_since(t0);
		m.neurons = setup.topology.neurons;
		m.memory = memory_of(c.reports());
		m.synapses_per_second = m.seconds > 0.0 ? m.memory.synapses / m.seconds : 0.0;
		return m;
	});
}

run_measurement measure_run(experiment_config const & config, double size, int workers, std::uint64_t seed)
{
	return with_model(config, size, [&](auto const & setup) {
		using model_type = std::decay_t<decltype(setup.model)>;
		auto const t0 = std::chrono::steady_clock::now();
		cluster::cluster<model_type> c(setup, seed, options_for(config, workers));
		run_measurement m;
		m.setup_seconds = seconds_since(t0);
		m.neurons = setup.topology.neurons;
		m.memory = memory_of(c.reports());
		m.slice_width = c.layout().slice_width;
		c.run_for(config.seconds);

		auto const & timing = c.timing();
		std::size_t const batches = timing.batches.size();
		std::size_t skip = static_cast<std::size_t>(config.warmup_batches);
		if (skip >= batches)
			skip = 0;
		double const batch_seconds = setup.delay * static_cast<double>(setup.dt);
		double const total_bio = static_cast<double>(c.time()) * setup.dt;
		m.bio_seconds = std::max(0.0, total_bio - static_cast<double>(skip) * batch_seconds);
		m.wall_seconds = timing.step_seconds(skip);
		m.sync_seconds = timing.sync_seconds(skip);
		double hidden = 0.0;
		for (std::size_t k = skip; k < batches; ++k)
			hidden += timing.batches[k].hidden_fraction * timing.batches[k].sync_seconds;
		m.hidden_fraction = m.sync_seconds > 0.0 ? hidden / m.sync_seconds : 1.0;
		for (auto const & s : timing.syncs)
			m.spikes += s.spikes;
		return m;
	});
}

std::vector<scaling_point> measure_scaling(experiment_config const & config)
{
	config.validate();
	double const base = !config.synapses.empty() ? config.synapses.front()
	                    : !config.neurons.empty() ? config.neurons.front()
	                                              : 0.0;
	auto const at = [&](double factor, int g) {
		experiment_config scaled = config;
		if (!config.synapses.empty())
			scaled.synapses = { base * factor };
		else if (!config.neurons.empty())
			scaled.neurons = { base * factor };
		else if (config.model == models::model_kind::synth)
			scaled.neurons = { 1e4 * factor };
		else
			scaled.neurons = { base_neurons(config.model) * factor };
		return measure_run(scaled, !scaled.synapses.empty() ? scaled.synapses.front() : scaled.neurons.front(), g,
		                   config.seeds.front());
	};

	std::vector<scaling_point> points;
	run_measurement const reference = at(1.0, 1);
	double const target = reference.ratio();
	for (int g : config.workers) {
		scaling_point p;
		p.workers = g;
		if (g == 1) {
			p.fixed = reference;
			p.scaled = reference;
			points.push_back(p);
			continue;
		}
		p.fixed = at(1.0, g);
		p.speedup = p.fixed.ratio() > 0.0 ? target / p.fixed.ratio() : 0.0;

		// Bracket the matching size, then bisect geometrically.
		double lo = 1.0;
		double hi = 1.0;
		run_measurement lo_m = p.fixed;
		run_measurement hi_m = p.fixed;
		auto const close = [&](run_measurement const & m) { return std::abs(m.ratio() / target - 1.0) <= 0.05; };
		run_measurement best = p.fixed;
		double best_factor = 1.0;
		if (!close(p.fixed)) {
			if (p.fixed.ratio() < target) {
				while (hi_m.ratio() < target && hi < 4.0 * g) {
					lo = hi;
					lo_m = hi_m;
					hi *= 2.0;
					hi_m = at(hi, g);
				}
			} else {
				while (lo_m.ratio() > target && lo > 1.0 / 16.0) {
					hi = lo;
					hi_m = lo_m;
					lo /= 2.0;
					lo_m = at(lo, g);
				}
			}
			best = std::abs(lo_m.ratio() - target) < std::abs(hi_m.ratio() - target) ? lo_m : hi_m;
			best_factor = best.neurons == lo_m.neurons ? lo : hi;
			for (int it = 0; it < 6 && !close(best); ++it) {
				double const mid = std::sqrt(lo * hi);
				run_measurement const m = at(mid, g);
				if (m.ratio() < target) {
					lo = mid;
					lo_m = m;
				} else {
					hi = mid;
					hi_m = m;
				}
				if (std::abs(m.ratio() - target) < std::abs(best.ratio() - target)) {
					best = m;
					best_factor = mid;
				}
			}
		}
		p.scaled = best;
		p.scaleup = reference.memory.synapses > 0
		                ? static_cast<double>(best.memory.synapses) / static_cast<double>(reference.memory.synapses)
		                : best_factor;
		points.push_back(p);
	}
	return points;
}

std::vector<experiment_config> preset(std::string const & name)
{
	auto make = [](experiment_kind kind, std::string label, models::model_kind model) {
		experiment_config e;
		e.kind = kind;
		e.name = std::move(label);
		e.model = model;
		return e;
	};
	std::vector<experiment_config> out;
	if (name == "fig5" || name == "sim-size") {
		for (auto m : { models::model_kind::vogels, models::model_kind::brunel, models::model_kind::brunel_plus }) {
			auto e = make(experiment_kind::sim, "fig5", m);
			e.synapses = { 1e6, 2e6, 4e6, 8e6, 1.6e7 };
			out.push_back(e);
		}
	} else if (name == "fig6" || name == "synth-size") {
		auto e = make(experiment_kind::sim, "fig6", models::model_kind::synth);
		e.density = c::synth::density;
		e.activity = c::synth::activity;
		e.synapses = { 1e6, 4e6, 1.6e7, 6.4e7 };
		out.push_back(e);
	} else if (name == "fig7" || name == "setup-size") {
		auto e = make(experiment_kind::setup, "fig7", models::model_kind::synth);
		e.density = 0.05;
		e.synapses = { 1e6, 3e6, 1e7, 3e7, 1e8 };
		out.push_back(e);
	} else if (name == "fig8" || name == "scaleup" || name == "fig9" || name == "speedup") {
		bool const up = name == "fig8" || name == "scaleup";
		for (auto m : { models::model_kind::brunel, models::model_kind::synth }) {
			auto e = make(experiment_kind::scale, up ? "fig8" : "fig9", m);
			e.workers = { 1, 2, 4, 8 };
			if (m == models::model_kind::synth) {
				e.density = c::synth::density;
				e.activity = c::synth::activity;
				e.synapses = { 1.6e7 };
			} else {
				e.synapses = { 4e6 };
			}
			out.push_back(e);
		}
	} else {
		throw usage_error("unknown preset '" + name + "' (expected fig5..fig9)");
	}
	return out;
}
} // namespace spikeforge::bench
