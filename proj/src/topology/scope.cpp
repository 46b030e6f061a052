#include <spikeforge/topology/scope.hpp>

#include <algorithm>

namespace spikeforge::topology
{
neuron_id target_scope::next(neuron_id t) const
{
	if (t < range.first)
		t = range.first;
	if (t >= range.last)
		return pad_sentinel;
	if (slice_width == 0)
		return t;

	std::uint64_t const s = slice_width;
	std::uint64_t const g = static_cast<std::uint64_t>(workers);
	std::uint64_t slice = t / s;
	std::uint64_t const owner = slice % g;
	std::uint64_t candidate = t;
	if (owner != static_cast<std::uint64_t>(worker)) {
		std::uint64_t const ahead = (static_cast<std::uint64_t>(worker) + g - owner) % g;
		slice += ahead;
		candidate = slice * s;
	}
	if (candidate >= range.last)
		return pad_sentinel;
	return static_cast<neuron_id>(candidate);
}

std::size_t target_scope::count(id_range r) const
{
	r = r.intersect(range);
	if (r.empty())
		return 0;
	if (slice_width == 0)
		return r.size();

	// Owned IDs below x.
	auto const below = [&](std::uint64_t x) {
		std::uint64_t const s = slice_width;
		std::uint64_t const g = static_cast<std::uint64_t>(workers);
		std::uint64_t const w = static_cast<std::uint64_t>(worker);
		std::uint64_t const full_rounds = x / (s * g);
		std::uint64_t n = full_rounds * s;
		std::uint64_t const rest = x - full_rounds * s * g;
		if (rest > w * s)
			n += std::min(rest - w * s, s);
		return n;
	};
	return static_cast<std::size_t>(below(r.last) - below(r.first));
}
} // namespace spikeforge::topology
