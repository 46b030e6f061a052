#include <spikeforge/bench/bench.hpp>

#include <iostream>

int main(int argc, char ** argv)
{
	return spikeforge::bench::cli_run(argc, argv, std::cout, std::cerr);
}
