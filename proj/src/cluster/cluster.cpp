#include <spikeforge/cluster/cluster.hpp>

#include <cstdlib>
#include <iterator>
#include <string>

namespace spikeforge::cluster
{
std::size_t differing_spikes(spike_train const & a, spike_train const & b)
{
	std::size_t diff = 0;
	std::size_t const common = std::min(a.steps(), b.steps());
	std::vector<neuron_id> scratch;
	for (std::size_t t = 0; t < common; ++t) {
		auto const x = a.at(t);
		auto const y = b.at(t);
		scratch.clear();
		std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(scratch));
		diff += scratch.size();
	}
	for (std::size_t t = common; t < a.steps(); ++t)
		diff += a.at(t).size();
	for (std::size_t t = common; t < b.steps(); ++t)
		diff += b.at(t).size();
	return diff;
}

int default_threads(int workers)
{
	int n = std::max(1, static_cast<int>(std::thread::hardware_concurrency()) / std::max(1, workers));
	if (char const * cap = std::getenv("SPIKEFORGE_THREADS")) {
		char * end = nullptr;
		long const v = std::strtol(cap, &end, 10);
		if (end != cap && v >= 1)
			n = std::min<long>(n, v);
	}
	return n;
}

double timing_stats::step_seconds(std::size_t skip) const
{
	double s = 0.0;
	for (std::size_t k = skip; k < batches.size(); ++k)
		s += batches[k].step_seconds;
	return s;
}

double timing_stats::sync_seconds(std::size_t skip) const
{
	double s = 0.0;
	for (std::size_t k = skip; k < batches.size(); ++k)
		s += batches[k].sync_seconds;
	return s;
}
} // namespace spikeforge::cluster
