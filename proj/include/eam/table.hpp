#pragma once

// The address table realizes the bijection # between machines and addresses
// by canonicalizing interning: structurally equal machines receive the same
// address, the reserved numeral/fixpoint shapes receive their reserved
// addresses, and cell ids are allocated densely in first-intern order.
//
// Not thread safe; confine a table to one thread or synchronize externally.

#include <deque>
#include <stdexcept>
#include <unordered_map>

#include "eam/machine.hpp"

namespace eam {

class AddressTable {
 public:
  Address intern(const Machine& m) {
    if (auto n = numeral_shape(m)) return Address::num(*n);
    if (auto n = fix_shape(m)) return Address::fix(*n);
    auto it = index_.find(m);
    if (it != index_.end()) return it->second;
    if (!validity(m.remaining(), m.regs))
      throw std::invalid_argument("intern: program not valid w.r.t. registers");
    Address a = Address::cell(cells_.size());
    cells_.push_back(m);
    index_.emplace(cells_.back(), a);
    return a;
  }

  const Machine& lookup(const Address& a) const {
    switch (a.tag) {
      case Address::Tag::Num: {
        auto it = num_cache_.find(a.index);
        if (it == num_cache_.end()) it = num_cache_.emplace(a.index, numeral_machine(a.index)).first;
        return it->second;
      }
      case Address::Tag::Fix: {
        auto it = fix_cache_.find(a.index);
        if (it == fix_cache_.end()) it = fix_cache_.emplace(a.index, fix_machine(a.index)).first;
        return it->second;
      }
      case Address::Tag::Cell:
        if (a.index >= cells_.size())
          throw std::out_of_range("lookup: unallocated cell address " + show_address(a));
        return cells_[a.index];
    }
    throw std::out_of_range("lookup: bad address");
  }

  bool allocated(const Address& a) const { return !a.is_cell() || a.index < cells_.size(); }

  // a . b : the address of lookup(a) with b appended to its tape
  Address apply(const Address& a, const Address& b) { return intern(append_tape(lookup(a), {b})); }

  std::size_t cell_count() const { return cells_.size(); }

 private:
  std::deque<Machine> cells_;  // reference stability for lookup()
  std::unordered_map<Machine, Address, MachineHash> index_;
  mutable std::unordered_map<std::uint64_t, Machine> num_cache_, fix_cache_;
};

}  // namespace eam
