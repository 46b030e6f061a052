#pragma once

#include <cstddef>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace spikeforge
{
// Compile-time list of per-element field types, e.g. field_list<float, std::int32_t>.
template <typename... Fields>
struct field_list
{
	static constexpr std::size_t size = sizeof...(Fields);
};

// Field-major storage: one contiguous array per field, all of identical length.
template <typename List>
class soa_pool;

template <typename... Fields>
class soa_pool<field_list<Fields...>>
{
public:
	using fields = field_list<Fields...>;
	template <std::size_t I>
	using field_type = std::tuple_element_t<I, std::tuple<Fields...>>;

	static constexpr std::size_t field_count = sizeof...(Fields);
	static constexpr std::size_t bytes_per_element = (std::size_t{ 0 } + ... + sizeof(Fields));

	soa_pool() = default;
	explicit soa_pool(std::size_t n)
	    : _arrays{ std::vector<Fields>(n)... }
	    , _size(n)
	{
	}

	std::size_t size() const { return _size; }
	std::size_t size_bytes() const { return _size * bytes_per_element; }

	template <std::size_t I>
	std::span<field_type<I>> field()
	{
		return std::get<I>(_arrays);
	}
	template <std::size_t I>
	std::span<field_type<I> const> field() const
	{
		return std::get<I>(_arrays);
	}

	template <std::size_t I>
	field_type<I> & at(std::size_t i)
	{
		return std::get<I>(_arrays)[i];
	}
	template <std::size_t I>
	field_type<I> const & at(std::size_t i) const
	{
		return std::get<I>(_arrays)[i];
	}

	friend bool operator==(soa_pool const &, soa_pool const &) = default;

private:
	std::tuple<std::vector<Fields>...> _arrays;
	std::size_t _size = 0;
};

// Reference to one element of a pool: the "view" handed to model callbacks.
template <typename Pool>
class element_ref
{
public:
	element_ref(Pool & pool, std::size_t index)
	    : _pool(&pool)
	    , _index(index)
	{
	}

	template <std::size_t I>
	auto & get() const
	{
		return _pool->template at<I>(_index);
	}

	std::size_t index() const { return _index; }

private:
	Pool * _pool;
	std::size_t _index;
};
} // namespace spikeforge
