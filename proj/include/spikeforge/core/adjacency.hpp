#pragma once

#include <spikeforge/core/types.hpp>

#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace spikeforge
{
// Rows are padded to multiples of this many entries: 32 x 4 bytes = 128-byte row alignment.
inline constexpr std::size_t row_alignment = 32;

constexpr std::size_t align_width(std::size_t entries)
{
	return (entries + row_alignment - 1) / row_alignment * row_alignment;
}

template <typename T, std::size_t Align>
struct aligned_allocator
{
	using value_type = T;

	aligned_allocator() = default;
	template <typename U>
	aligned_allocator(aligned_allocator<U, Align> const &)
	{
	}

	template <typename U>
	struct rebind
	{
		using other = aligned_allocator<U, Align>;
	};

	T * allocate(std::size_t n) { return static_cast<T *>(::operator new(n * sizeof(T), std::align_val_t{ Align })); }
	void deallocate(T * p, std::size_t) { ::operator delete(p, std::align_val_t{ Align }); }

	friend bool operator==(aligned_allocator const &, aligned_allocator const &) { return true; }
};

// Padded adjacency list: one row per source neuron, each row holding the sorted target IDs of
// the source's outgoing edges followed by pad_sentinel. Entry (i, j) maps 1:1 onto synapse (i, j).
class adjacency_list
{
public:
	adjacency_list() = default;
	// All entries start out as sentinels.
	adjacency_list(std::size_t rows, std::size_t width);

	std::size_t rows() const { return _rows; }
	std::size_t width() const { return _width; }
	std::size_t capacity() const { return _rows * _width; }
	std::size_t size_bytes() const { return capacity() * sizeof(neuron_id); }

	std::span<neuron_id> row(std::size_t i) { return { _entries.data() + i * _width, _width }; }
	std::span<neuron_id const> row(std::size_t i) const { return { _entries.data() + i * _width, _width }; }

	// Number of valid entries in row i (binary search for the first sentinel).
	std::size_t degree(std::size_t i) const;
	// Total number of valid entries (edges).
	std::size_t edges() const;
	// Fraction of entries that are padding.
	double padding_fraction() const;

	// Rows sorted, sentinels only as suffix, valid entries < neurons. Linear scan.
	bool is_valid(neuron_id neurons) const;

	neuron_id const * data() const { return _entries.data(); }

	friend bool operator==(adjacency_list const &, adjacency_list const &) = default;

private:
	std::size_t _rows = 0;
	std::size_t _width = 0;
	std::vector<neuron_id, aligned_allocator<neuron_id, 128>> _entries;
};
} // namespace spikeforge
