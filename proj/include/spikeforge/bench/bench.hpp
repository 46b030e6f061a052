#pragma once

#include <spikeforge/cluster/cluster.hpp>
#include <spikeforge/models/models.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spikeforge::bench
{
inline constexpr int schema_version = 1;

struct csv_row
{
	std::string experiment;
	std::string model;
	std::uint64_t neurons = 0;
	std::uint64_t synapses = 0;
	int workers = 1;
	std::uint32_t slice_width = 1;
	std::uint64_t seed = 0;
	double bio_seconds = 0.0;
	double wall_seconds = 0.0;
	double ratio = 0.0;
	double setup_seconds = 0.0;
	double sync_seconds = 0.0;
	std::uint64_t mem_bytes = 0;
};

std::string csv_header();
std::string format_row(csv_row const & row);
// Appends rows to `path`, writing the header first if the file is new or empty. Throws
// usage_error if an existing file carries a different header.
void append_csv(std::string const & path, std::vector<csv_row> const & rows);

struct memory_report
{
	std::size_t adjacency_bytes = 0; // sum over workers of rows * width * 4
	std::size_t synapse_bytes = 0;
	std::size_t neuron_bytes = 0;
	double padding_fraction = 0.0; // share of adjacency entries that are sentinels
	std::size_t peak_setup_bytes = 0;
	std::uint64_t synapses = 0;

	std::size_t total_bytes() const { return adjacency_bytes + synapse_bytes + neuron_bytes; }
};

memory_report memory_of(std::vector<cluster::worker_report> const & workers);

enum class experiment_kind
{
	sim,
	setup,
	scale,
};

struct experiment_config
{
	experiment_kind kind = experiment_kind::sim;
	std::string name = "sim"; // written to the experiment column
	models::model_kind model = models::model_kind::brunel;
	// Size axis: neuron or synapse targets (synapses wins when both are given).
	std::vector<double> neurons;
	std::vector<double> synapses;
	double density = 0.00156;
	double activity = 0.005;
	std::optional<int> delay;
	std::vector<int> workers{ 1 };
	std::optional<std::uint32_t> slice_width;
	std::vector<std::uint64_t> seeds{ 1 };
	double seconds = 1.0;
	std::optional<double> dt;
	std::optional<std::string> topology;
	std::string csv;
	int warmup_batches = 3;
	int threads = 0;

	void validate() const;
};

struct setup_measurement
{
	double seconds = 0.0;
	double synapses_per_second = 0.0;
	std::uint64_t neurons = 0;
	memory_report memory;
};

// Times construction only: descriptor to populated adjacency and pools, per worker.
setup_measurement measure_setup(experiment_config const & config, double size, int workers, std::uint64_t seed);

struct run_measurement
{
	std::uint64_t neurons = 0;
	memory_report memory;
	double setup_seconds = 0.0;
	double bio_seconds = 0.0;  // steady state, warm-up batches excluded
	double wall_seconds = 0.0; // steady state
	double sync_seconds = 0.0;
	double hidden_fraction = 0.0;
	std::uint32_t slice_width = 0;
	std::size_t spikes = 0;

	double ratio() const { return bio_seconds > 0.0 ? wall_seconds / bio_seconds : 0.0; }
};

run_measurement measure_run(experiment_config const & config, double size, int workers, std::uint64_t seed);

struct scaling_point
{
	int workers = 1;
	double speedup = 1.0; // T(1) / T(G) at the base size
	double scaleup = 1.0; // size(G) / base size at matched time
	run_measurement fixed;
	run_measurement scaled;
};

// Speedup at a fixed size, and scaleup by bisection on size until T(G) is within 5% of T(1).
std::vector<scaling_point> measure_scaling(experiment_config const & config);

// Experiment presets, one per benchmark figure: fig5 simulation time
// vs size (vogels, brunel, brunel+), fig6 the same for synth, fig7 setup time vs size, fig8
// scaleup and fig9 speedup vs worker count.
std::vector<experiment_config> preset(std::string const & name);

// Returns the process exit code: 0 ok, 2 usage error, 3 resource exhaustion or worker failure.
int cli_run(int argc, char const * const * argv, std::ostream & out, std::ostream & err);
} // namespace spikeforge::bench
