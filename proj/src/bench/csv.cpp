#include <spikeforge/bench/bench.hpp>
#include <spikeforge/core/error.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace spikeforge::bench
{
namespace
{
	std::string number(double x)
	{
		std::ostringstream s;
		s.precision(9);
		s << x;
		return s.str();
	}

	std::string quoted(std::string const & field)
	{
		if (field.find_first_of(",\"\n") == std::string::npos)
			return field;
		std::string out = "\"";
		for (char c : field) {
			if (c == '"')
				out += '"';
			out += c;
		}
		return out + '"';
	}
} // namespace

std::string csv_header()
{
	return "schema_version,experiment,model,neurons,synapses,workers,slice_width,seed,bio_seconds,wall_seconds,ratio,"
	       "setup_seconds,sync_seconds,mem_bytes";
}

std::string format_row(csv_row const & r)
{
	std::ostringstream s;
	s << schema_version << ',' << quoted(r.experiment) << ',' << quoted(r.model) << ',' << r.neurons << ','
	  << r.synapses << ',' << r.workers << ',' << r.slice_width << ',' << r.seed << ',' << number(r.bio_seconds) << ','
	  << number(r.wall_seconds) << ',' << number(r.ratio) << ',' << number(r.setup_seconds) << ','
	  << number(r.sync_seconds) << ',' << r.mem_bytes;
	return s.str();
}

void append_csv(std::string const & path, std::vector<csv_row> const & rows)
{
	bool need_header = true;
	if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
		std::ifstream in(path);
		std::string first;
		std::getline(in, first);
		if (first != csv_header())
			throw usage_error("'" + path + "' has a different CSV header; refusing to append");
		need_header = false;
	}
	std::ofstream out(path, std::ios::app);
	if (!out)
		throw usage_error("cannot open '" + path + "' for writing");
	if (need_header)
		out << csv_header() << '\n';
	for (auto const & r : rows)
		out << format_row(r) << '\n';
	out.flush();
	if (!out)
		throw error("failed writing '" + path + "'");
}

memory_report memory_of(std::vector<cluster::worker_report> const & workers)
{
	memory_report m;
	std::uint64_t entries = 0;
	for (auto const & w : workers) {
		m.adjacency_bytes += w.rows * w.width * sizeof(neuron_id);
		m.synapse_bytes += w.synapse_bytes;
		m.neuron_bytes += w.neuron_bytes;
		m.peak_setup_bytes = std::max(m.peak_setup_bytes, w.peak_bytes);
		m.synapses += w.synapses;
		entries += std::uint64_t{ w.rows } * w.width;
	}
	m.padding_fraction = entries == 0 ? 0.0 : 1.0 - static_cast<double>(m.synapses) / static_cast<double>(entries);
	return m;
}
} // namespace spikeforge::bench
