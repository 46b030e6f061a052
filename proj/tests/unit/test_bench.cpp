#include <doctest.h>

#include <spikeforge/bench/bench.hpp>
#include <spikeforge/core/error.hpp>
#include <spikeforge/topology/descriptor_io.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace spikeforge;
using namespace spikeforge::bench;

namespace
{
struct temp_dir
{
	std::filesystem::path path;
	temp_dir()
	{
		static int counter = 0;
		path = std::filesystem::temp_directory_path() /
		       ("spikeforge-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
		std::filesystem::remove_all(path);
		std::filesystem::create_directories(path);
	}
	~temp_dir() { std::filesystem::remove_all(path); }
	std::string file(std::string const & name) const { return (path / name).string(); }
};

struct cli_result
{
	int code;
	std::string out;
	std::string err;
};

cli_result run_cli(std::vector<std::string> args)
{
	args.insert(args.begin(), "spikeforge");
	std::vector<char const *> argv;
	for (auto const & a : args)
		argv.push_back(a.c_str());
	std::ostringstream out, err;
	int const code = cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
	return { code, out.str(), err.str() };
}

std::vector<std::string> lines_of(std::string const & path)
{
	std::ifstream in(path);
	std::vector<std::string> out;
	for (std::string line; std::getline(in, line);)
		out.push_back(line);
	return out;
}

std::vector<std::string> fields_of(std::string const & line)
{
	std::vector<std::string> out;
	std::stringstream s(line);
	for (std::string f; std::getline(s, f, ',');)
		out.push_back(f);
	return out;
}

// Columns that do not depend on timing.
std::vector<std::string> stable_columns(std::string const & line)
{
	auto const f = fields_of(line);
	return { f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[13] };
}
} // namespace

TEST_CASE("CSV header and row format")
{
	CHECK(csv_header() ==
	      "schema_version,experiment,model,neurons,synapses,workers,slice_width,seed,bio_seconds,wall_seconds,ratio,"
	      "setup_seconds,sync_seconds,mem_bytes");
	csv_row r;
	r.experiment = "sim";
	r.model = "brunel+";
	r.neurons = 12500;
	r.synapses = 15625000;
	r.workers = 4;
	r.slice_width = 12;
	r.seed = 3;
	r.bio_seconds = 1.0;
	r.wall_seconds = 2.5;
	r.ratio = 2.5;
	r.mem_bytes = 99;
	CHECK(format_row(r) == "1,sim,brunel+,12500,15625000,4,12,3,1,2.5,2.5,0,0,99");
	r.experiment = "a,b";
	CHECK(fields_of(format_row(r))[1] == "\"a");
}

TEST_CASE("CSV appends safely and refuses foreign headers")
{
	temp_dir dir;
	auto const path = dir.file("out.csv");
	csv_row r;
	r.experiment = "x";
	append_csv(path, { r });
	append_csv(path, { r, r });
	auto const lines = lines_of(path);
	REQUIRE(lines.size() == 4);
	CHECK(lines[0] == csv_header());
	CHECK(lines[1] == lines[3]);

	auto const foreign = dir.file("foreign.csv");
	std::ofstream(foreign) << "a,b,c\n1,2,3\n";
	CHECK_THROWS_AS(append_csv(foreign, { r }), usage_error);
	CHECK(lines_of(foreign).size() == 2);
}

TEST_CASE("memory report: adjacency bytes are rows x width x 4")
{
	auto const setup = models::make_synth({ 5000, 0.01, 0.01, 1 });
	cluster::cluster_options opts;
	opts.workers = 3;
	cluster::cluster<models::synth> c(setup, 1, opts);
	auto const m = memory_of(c.reports());
	std::size_t expected = 0;
	std::uint64_t synapses = 0, entries = 0;
	for (int g = 0; g < 3; ++g) {
		auto const & adj = c.worker(g).adjacency();
		expected += adj.rows() * adj.width() * 4;
		entries += adj.rows() * adj.width();
		synapses += adj.edges();
	}
	CHECK(m.adjacency_bytes == expected);
	CHECK(m.synapses == synapses);
	CHECK(m.padding_fraction == doctest::Approx(1.0 - static_cast<double>(synapses) / entries));
	CHECK(m.total_bytes() == m.adjacency_bytes + m.synapse_bytes + m.neuron_bytes);
	CHECK(m.peak_setup_bytes >= m.adjacency_bytes / 3);
}

TEST_CASE("experiment configs are validated")
{
	experiment_config c;
	CHECK_NOTHROW(c.validate());
	c.workers = { 0 };
	CHECK_THROWS_AS(c.validate(), usage_error);
	c = {};
	c.seeds.clear();
	CHECK_THROWS_AS(c.validate(), usage_error);
	c = {};
	c.seconds = -1.0;
	CHECK_THROWS_AS(c.validate(), usage_error);
	c = {};
	c.model = models::model_kind::synth;
	c.density = 2.0;
	CHECK_THROWS_AS(c.validate(), usage_error);
}

TEST_CASE("setup of an empty network takes almost no time and stores no synapses")
{
	experiment_config c;
	c.kind = experiment_kind::setup;
	c.model = models::model_kind::synth;
	c.density = 0.0;
	auto const m = measure_setup(c, 1000, 1, 1);
	CHECK(m.memory.synapses == 0);
	CHECK(m.memory.adjacency_bytes == 0);
	CHECK(m.seconds < 0.5);
}

TEST_CASE("synth sizes resolve from synapse targets")
{
	experiment_config c;
	c.kind = experiment_kind::setup;
	c.model = models::model_kind::synth;
	c.density = 0.01;
	c.synapses = { 1e6 };
	auto const m = measure_setup(c, 1e6, 2, 1);
	CHECK(m.neurons == 10000);
	CHECK(static_cast<double>(m.memory.synapses) == doctest::Approx(1e6).epsilon(0.01));
	CHECK(m.synapses_per_second > 0.0);
}

TEST_CASE("measure_run reports a steady-state ratio")
{
	experiment_config c;
	c.model = models::model_kind::synth;
	c.density = 0.01;
	c.activity = 0.01;
	c.seconds = 0.02;
	c.warmup_batches = 3;
	c.neurons = { 2000 };
	auto const m = measure_run(c, 2000, 2, 1);
	CHECK(m.neurons == 2000);
	CHECK(m.bio_seconds == doctest::Approx(0.02 - 3 * 1e-4));
	CHECK(m.wall_seconds > 0.0);
	CHECK(m.ratio() > 0.0);
	CHECK(m.spikes > 0);
}

TEST_CASE("scaling with one worker is 1 by definition")
{
	experiment_config c;
	c.kind = experiment_kind::scale;
	c.model = models::model_kind::synth;
	c.neurons = { 2000 };
	c.density = 0.01;
	c.activity = 0.01;
	c.seconds = 0.01;
	c.workers = { 1 };
	auto const points = measure_scaling(c);
	REQUIRE(points.size() == 1);
	CHECK(points[0].workers == 1);
	CHECK(points[0].speedup == 1.0);
	CHECK(points[0].scaleup == 1.0);
}

TEST_CASE("presets exist for every figure")
{
	for (std::string name : { "fig5", "fig6", "fig7", "fig8", "fig9" }) {
		auto const configs = preset(name);
		CHECK_FALSE(configs.empty());
		for (auto const & c : configs)
			CHECK_NOTHROW(c.validate());
	}
	CHECK(preset("fig5").size() == 3);
	CHECK(preset("fig7").front().kind == experiment_kind::setup);
	CHECK(preset("fig8").front().kind == experiment_kind::scale);
	CHECK(preset("fig9").front().kind == experiment_kind::scale);
	CHECK_THROWS_AS(preset("fig4"), usage_error);
}

TEST_CASE("CLI usage errors exit with 2")
{
	CHECK(run_cli({ "sim", "--gpus", "0" }).code == 2);
	CHECK(run_cli({ "sim", "--model", "hodgkin" }).code == 2);
	CHECK(run_cli({ "sim", "--bogus" }).code == 2);
	CHECK(run_cli({}).code == 2);
	CHECK(run_cli({ "preset", "fig12" }).code == 2);
	CHECK(run_cli({ "--help" }).code == 0);
	auto const r = run_cli({ "sim", "--gpus", "0" });
	CHECK(r.err.find("usage") != std::string::npos);
}

TEST_CASE("CLI sim writes a CSV row; reruns reproduce all non-timing columns")
{
	temp_dir dir;
	auto const csv = dir.file("sim.csv");
	std::vector<std::string> args{ "sim",        "--model",  "synth", "--neurons", "3000", "--density", "0.01",
		                           "--activity", "0.01",     "--gpus",  "1,2",       "--seconds", "0.02",
		                           "--seed",     "4",        "--csv",   csv };
	auto const first = run_cli(args);
	CHECK(first.code == 0);
	auto const second = run_cli(args);
	CHECK(second.code == 0);
	auto const lines = lines_of(csv);
	REQUIRE(lines.size() == 5);
	CHECK(lines[0] == csv_header());
	CHECK(stable_columns(lines[1]) == stable_columns(lines[3]));
	CHECK(stable_columns(lines[2]) == stable_columns(lines[4]));
	auto const f = fields_of(lines[1]);
	CHECK(f[1] == "sim");
	CHECK(f[2] == "synth");
	CHECK(f[3] == "3000");
	CHECK(f[5] == "1");
	CHECK(fields_of(lines[2])[5] == "2");
	CHECK(std::stod(f[10]) > 0.0);
}

TEST_CASE("CLI setup and a custom topology file")
{
	temp_dir dir;
	auto const desc = dir.file("net.txt");
	topology_descriptor d{ 500, { { { 0, 400 }, { 0, 500 }, 0.05, std::nullopt }, { { 400, 500 }, { 0, 500 }, 0.2, std::nullopt } } };
	{
		std::ofstream out(desc);
		topology::write_descriptor(out, d);
	}
	auto const csv = dir.file("setup.csv");
	auto const r = run_cli({ "setup", "--model", "synth", "--topology", desc, "--gpus", "2", "--csv", csv });
	CHECK(r.code == 0);
	auto const lines = lines_of(csv);
	REQUIRE(lines.size() == 2);
	CHECK(fields_of(lines[1])[3] == "500");
	CHECK(run_cli({ "setup", "--topology", dir.file("missing.txt") }).code == 2);
}
