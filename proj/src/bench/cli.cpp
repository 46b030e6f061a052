#include <spikeforge/bench/bench.hpp>
#include <spikeforge/core/error.hpp>

#include <CLI11.hpp>

#include <iomanip>
#include <new>
#include <ostream>
#include <sstream>

namespace spikeforge::bench
{
namespace
{
	struct cli_state
	{
		experiment_config config;
		std::string model = "brunel";
		std::string preset_name;
	};

	void add_experiment_options(CLI::App & app, cli_state & s)
	{
		auto & c = s.config;
		app.add_option("--model", s.model, "vogels | brunel | brunel+ | synth");
		app.add_option("--neurons", c.neurons, "network size(s) in neurons")->delimiter(',');
		app.add_option("--synapses", c.synapses, "network size(s) in synapses")->delimiter(',');
		app.add_option("--density", c.density, "synth connection probability");
		app.add_option("--activity", c.activity, "synth per-step firing probability");
		app.add_option("--delay", c.delay, "delay in steps");
		app.add_option("--gpus", c.workers, "worker count(s)")->delimiter(',');
		app.add_option("--slice-width", c.slice_width, "neurons per slice");
		app.add_option("--seconds", c.seconds, "biological seconds to simulate");
		app.add_option("--dt", c.dt, "time step in seconds");
		app.add_option("--seed", c.seeds, "seed(s)")->delimiter(',');
		app.add_option("--csv", c.csv, "append results to this CSV file");
		app.add_option("--topology", c.topology, "descriptor file replacing the model's topology");
		app.add_option("--warmup", c.warmup_batches, "batches excluded from timing");
		app.add_option("--threads", c.threads, "threads per worker (0: automatic)");
	}

	std::vector<double> sizes_of(experiment_config const & c)
	{
		if (!c.synapses.empty())
			return c.synapses;
		if (!c.neurons.empty())
			return c.neurons;
		return { 0.0 };
	}

	csv_row base_row(experiment_config const & c, std::string experiment, int workers, std::uint64_t seed)
	{
		csv_row r;
		r.experiment = std::move(experiment);
		r.model = std::string(models::model_name(c.model));
		r.workers = workers;
		r.seed = seed;
		return r;
	}

	void fill(csv_row & r, run_measurement const & m)
	{
		r.neurons = m.neurons;
		r.synapses = m.memory.synapses;
		r.slice_width = m.slice_width;
		r.bio_seconds = m.bio_seconds;
		r.wall_seconds = m.wall_seconds;
		r.ratio = m.ratio();
		r.setup_seconds = m.setup_seconds;
		r.sync_seconds = m.sync_seconds;
		r.mem_bytes = m.memory.total_bytes();
	}

	std::vector<csv_row> run_experiment(experiment_config const & c, std::ostream & out)
	{
		c.validate();
		std::vector<csv_row> rows;
		out << std::setprecision(4);
		switch (c.kind) {
		case experiment_kind::sim:
			for (double size : sizes_of(c))
				for (int g : c.workers)
					for (auto seed : c.seeds) {
						auto const m = measure_run(c, size, g, seed);
						auto r = base_row(c, c.name, g, seed);
						fill(r, m);
						rows.push_back(r);
						out << c.name << ' ' << r.model << " neurons=" << r.neurons << " synapses=" << r.synapses
						    << " workers=" << g << " seed=" << seed << " ratio=" << r.ratio
						    << " sync=" << r.sync_seconds << "s hidden=" << m.hidden_fraction
						    << " spikes=" << m.spikes << '\n';
					}
			break;
		case experiment_kind::setup:
			for (double size : sizes_of(c))
				for (int g : c.workers)
					for (auto seed : c.seeds) {
						auto const m = measure_setup(c, size, g, seed);
						auto r = base_row(c, c.name, g, seed);
						r.neurons = m.neurons;
						r.synapses = m.memory.synapses;
						r.slice_width = 0;
						r.setup_seconds = m.seconds;
						r.mem_bytes = m.memory.total_bytes();
						rows.push_back(r);
						out << c.name << ' ' << r.model << " synapses=" << r.synapses << " workers=" << g
						    << " setup=" << m.seconds << "s throughput=" << m.synapses_per_second
						    << " syn/s adjacency=" << m.memory.adjacency_bytes
						    << "B padding=" << m.memory.padding_fraction << '\n';
					}
			break;
		case experiment_kind::scale:
			for (auto const & p : measure_scaling(c)) {
				auto r = base_row(c, c.name + "_speedup", p.workers, c.seeds.front());
				fill(r, p.fixed);
				rows.push_back(r);
				auto u = base_row(c, c.name + "_scaleup", p.workers, c.seeds.front());
				fill(u, p.scaled);
				rows.push_back(u);
				out << c.name << ' ' << r.model << " workers=" << p.workers << " speedup=" << p.speedup
				    << " scaleup=" << p.scaleup << '\n';
			}
			break;
		}
		return rows;
	}
} // namespace

int cli_run(int argc, char const * const * argv, std::ostream & out, std::ostream & err)
{
	CLI::App app("spikeforge: multi-worker spiking neural network simulator benchmarks", "spikeforge");
	app.require_subcommand(1);

	cli_state sim_state, setup_state, scale_state, preset_state;
	auto * sim = app.add_subcommand("sim", "simulation time vs size");
	add_experiment_options(*sim, sim_state);
	auto * setup = app.add_subcommand("setup", "setup time and memory vs size");
	add_experiment_options(*setup, setup_state);
	auto * scale = app.add_subcommand("scale", "speedup and scaleup vs worker count");
	add_experiment_options(*scale, scale_state);
	auto * pre = app.add_subcommand("preset", "run a predefined experiment series (fig5..fig9)");
	pre->add_option("name", preset_state.preset_name, "fig5 | fig6 | fig7 | fig8 | fig9")->required();
	pre->add_option("--csv", preset_state.config.csv, "append results to this CSV file");
	pre->add_option("--seconds", preset_state.config.seconds, "biological seconds to simulate");
	pre->add_option("--seed", preset_state.config.seeds, "seed(s)")->delimiter(',');

	try {
		app.parse(argc, argv);
	} catch (CLI::ParseError const & e) {
		int const code = app.exit(e, out, err);
		return code == 0 ? 0 : 2;
	}

	try {
		std::vector<experiment_config> configs;
		if (pre->parsed()) {
			configs = preset(preset_state.preset_name);
			for (auto & c : configs) {
				c.csv = preset_state.config.csv;
				c.seconds = preset_state.config.seconds;
				c.seeds = preset_state.config.seeds;
			}
		} else {
			cli_state & s = sim->parsed() ? sim_state : setup->parsed() ? setup_state : scale_state;
			s.config.kind = sim->parsed() ? experiment_kind::sim
			                : setup->parsed() ? experiment_kind::setup
			                                  : experiment_kind::scale;
			s.config.name = sim->parsed() ? "sim" : setup->parsed() ? "setup" : "scale";
			s.config.model = models::parse_model(s.model);
			configs.push_back(s.config);
		}
		for (auto const & c : configs)
			c.validate();
		for (auto const & c : configs) {
			auto const rows = run_experiment(c, out);
			if (!c.csv.empty())
				append_csv(c.csv, rows);
		}
		return 0;
	} catch (usage_error const & e) {
		err << "usage error: " << e.what() << '\n';
		return 2;
	} catch (worker_failure const & e) {
		err << "error: " << e.what() << '\n';
		return 3;
	} catch (std::bad_alloc const &) {
		err << "error: out of memory\n";
		return 3;
	} catch (construction_error const & e) {
		err << "error: " << e.what() << '\n';
		return 2;
	} catch (std::exception const & e) {
		err << "error: " << e.what() << '\n';
		return 1;
	}
}
} // namespace spikeforge::bench
