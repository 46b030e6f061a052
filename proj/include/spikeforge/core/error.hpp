#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spikeforge
{
class error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

// Invalid sizes, capacity overflow, malformed descriptors.
class construction_error : public error
{
public:
	using error::error;
};

class usage_error : public error
{
public:
	using error::error;
};

class worker_failure : public error
{
public:
	worker_failure(int worker, std::int64_t step, std::string const & what)
	    : error("worker " + std::to_string(worker) + " failed at step " + std::to_string(step) + ": " + what)
	    , _worker(worker)
	    , _step(step)
	{
	}

	int worker() const { return _worker; }
	std::int64_t step() const { return _step; }

private:
	int _worker;
	std::int64_t _step;
};
} // namespace spikeforge
