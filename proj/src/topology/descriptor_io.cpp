#include <spikeforge/core/error.hpp>
#include <spikeforge/topology/descriptor_io.hpp>

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace spikeforge::topology
{
topology_descriptor read_descriptor(std::istream & in)
{
	topology_descriptor desc;
	std::uint64_t explicit_neurons = 0;
	bool has_explicit = false;
	std::uint64_t max_end = 0;

	std::string line;
	for (int lineno = 1; std::getline(in, line); ++lineno) {
		if (auto const hash = line.find('#'); hash != std::string::npos)
			line.resize(hash);
		std::istringstream ls(line);
		std::string first;
		if (!(ls >> first))
			continue;

		auto const fail = [&](std::string const & why) {
			throw construction_error("descriptor line " + std::to_string(lineno) + ": " + why);
		};

		if (first == "neurons") {
			if (!(ls >> explicit_neurons))
				fail("expected a neuron count");
			has_explicit = true;
			continue;
		}

		std::uint64_t v[4];
		double p = 0.0;
		std::istringstream all(line);
		if (!(all >> v[0] >> v[1] >> v[2] >> v[3] >> p))
			fail("expected `src_start src_end dst_start dst_end p`");
		std::string trailing;
		if (all >> trailing)
			fail("unexpected trailing text '" + trailing + "'");
		for (auto x : v)
			if (x > std::numeric_limits<neuron_id>::max() - 1)
				fail("neuron ID out of range");
		if (v[0] > v[1] || v[2] > v[3])
			fail("range start exceeds range end");
		if (!(p >= 0.0 && p <= 1.0))
			fail("probability outside [0,1]");

		desc.rules.push_back({ { static_cast<neuron_id>(v[0]), static_cast<neuron_id>(v[1]) },
		                       { static_cast<neuron_id>(v[2]), static_cast<neuron_id>(v[3]) },
		                       p,
		                       std::nullopt });
		max_end = std::max({ max_end, v[1], v[3] });
	}

	if (has_explicit && explicit_neurons < max_end)
		throw construction_error("declared neuron count is smaller than the largest range end");
	desc.neurons = static_cast<neuron_id>(has_explicit ? explicit_neurons : max_end);
	desc.validate();
	return desc;
}

topology_descriptor load_descriptor(std::string const & path)
{
	std::ifstream in(path);
	if (!in)
		throw construction_error("cannot open descriptor file '" + path + "'");
	return read_descriptor(in);
}

void write_descriptor(std::ostream & out, topology_descriptor const & desc)
{
	out << "neurons " << desc.neurons << '\n';
	for (auto const & r : desc.rules)
		out << r.src.first << ' ' << r.src.last << ' ' << r.dst.first << ' ' << r.dst.last << ' '
		    << std::setprecision(17) << r.p << '\n';
}
} // namespace spikeforge::topology
