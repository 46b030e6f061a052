#pragma once

#include <spikeforge/core/types.hpp>

#include <iosfwd>
#include <string>

namespace spikeforge::topology
{
// Text format, one rule per line:
//
//   # comment
//   src_start src_end dst_start dst_end p
//
// Ranges are half-open. Blank lines and text after '#' are ignored. The neuron count is the
// largest range end unless a line `neurons N` says otherwise.
topology_descriptor read_descriptor(std::istream & in);
topology_descriptor load_descriptor(std::string const & path);

void write_descriptor(std::ostream & out, topology_descriptor const & desc);
} // namespace spikeforge::topology
