#include <spikeforge/core/adjacency.hpp>
#include <spikeforge/core/error.hpp>

#include <algorithm>
#include <limits>

namespace spikeforge
{
adjacency_list::adjacency_list(std::size_t rows, std::size_t width)
    : _rows(rows)
    , _width(width)
{
	if (width % row_alignment != 0)
		throw construction_error("adjacency width " + std::to_string(width) + " is not a multiple of " +
		                         std::to_string(row_alignment));
	if (width != 0 && rows > std::numeric_limits<std::size_t>::max() / sizeof(neuron_id) / width)
		throw construction_error("adjacency list of " + std::to_string(rows) + " x " + std::to_string(width) +
		                         " entries exceeds the address space");
	_entries.assign(rows * width, pad_sentinel);
}

std::size_t adjacency_list::degree(std::size_t i) const
{
	auto const r = row(i);
	return static_cast<std::size_t>(std::lower_bound(r.begin(), r.end(), pad_sentinel) - r.begin());
}

std::size_t adjacency_list::edges() const
{
	std::size_t n = 0;
	for (std::size_t i = 0; i < _rows; ++i)
		n += degree(i);
	return n;
}

double adjacency_list::padding_fraction() const
{
	if (capacity() == 0)
		return 0.0;
	return 1.0 - static_cast<double>(edges()) / static_cast<double>(capacity());
}

bool adjacency_list::is_valid(neuron_id neurons) const
{
	for (std::size_t i = 0; i < _rows; ++i) {
		auto const r = row(i);
		bool in_padding = false;
		neuron_id prev = 0;
		for (neuron_id const e : r) {
			if (e == pad_sentinel) {
				in_padding = true;
				continue;
			}
			if (in_padding || e >= neurons || e < prev)
				return false;
			prev = e;
		}
	}
	return true;
}

void topology_descriptor::validate() const
{
	for (std::size_t i = 0; i < rules.size(); ++i) {
		auto const & r = rules[i];
		auto const where = "rule " + std::to_string(i) + ": ";
		if (r.src.first > r.src.last || r.dst.first > r.dst.last)
			throw construction_error(where + "range start exceeds range end");
		if (r.src.last > neurons || r.dst.last > neurons)
			throw construction_error(where + "range exceeds neuron count " + std::to_string(neurons));
		if (!(r.p >= 0.0 && r.p <= 1.0))
			throw construction_error(where + "probability outside [0,1]");
	}
}
} // namespace spikeforge
