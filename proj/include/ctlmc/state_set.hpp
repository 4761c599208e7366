#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ctlmc {

using StateIndex = std::uint32_t;

/// Dense bit-indexed set over the states 0..universe-1 of one structure.
/// O(1) membership, word-parallel union/intersection/complement.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : bits_(universe) {}

    static StateSet full(std::size_t universe) {
        StateSet s(universe);
        s.bits_.set();
        return s;
    }
    static StateSet of(std::size_t universe, std::initializer_list<StateIndex> members) {
        StateSet s(universe);
        for (StateIndex i : members) s.insert(i);
        return s;
    }

    std::size_t universe() const { return bits_.size(); }
    std::size_t count() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    bool contains(StateIndex i) const { return bits_.test(i); }
    void insert(StateIndex i) { bits_.set(i); }
    void erase(StateIndex i) { bits_.reset(i); }

    StateSet& operator&=(const StateSet& o) { bits_ &= o.bits_; return *this; }
    StateSet& operator|=(const StateSet& o) { bits_ |= o.bits_; return *this; }
    StateSet& operator-=(const StateSet& o) { bits_ -= o.bits_; return *this; }

    friend StateSet operator&(StateSet a, const StateSet& b) { a &= b; return a; }
    friend StateSet operator|(StateSet a, const StateSet& b) { a |= b; return a; }
    friend StateSet operator-(StateSet a, const StateSet& b) { a -= b; return a; }

    StateSet complement() const {
        StateSet s(*this);
        s.bits_.flip();
        return s;
    }

    bool is_subset_of(const StateSet& o) const { return bits_.is_subset_of(o.bits_); }
    bool operator==(const StateSet& o) const { return bits_ == o.bits_; }
    bool operator!=(const StateSet& o) const { return bits_ != o.bits_; }

    /// Lowest member, or npos when empty.
    static constexpr std::size_t npos = boost::dynamic_bitset<>::npos;
    std::size_t first() const { return bits_.find_first(); }
    std::size_t next(std::size_t i) const { return bits_.find_next(i); }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = bits_.find_first(); i != npos; i = bits_.find_next(i))
            fn(static_cast<StateIndex>(i));
    }

    std::vector<StateIndex> to_vector() const {
        std::vector<StateIndex> v;
        v.reserve(count());
        for_each([&](StateIndex i) { v.push_back(i); });
        return v;
    }

private:
    boost::dynamic_bitset<> bits_;
};

}  // namespace ctlmc
