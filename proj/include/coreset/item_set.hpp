// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CORESET_ITEM_SET_HPP_
#define CORESET_ITEM_SET_HPP_

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace coreset {

using ItemId = uint32_t;

// A set of item ids kept as a sorted, duplicate-free vector. Small and
// cheap to compare, which is what the set-equality checks need.
class ItemSet {
 public:
  ItemSet() = default;
  ItemSet(std::initializer_list<ItemId> ids) : ids_(ids) { Normalize(); }
  explicit ItemSet(std::vector<ItemId> ids) : ids_(std::move(ids)) {
    Normalize();
  }

  static ItemSet Range(ItemId n) {
    ItemSet s;
    s.ids_.resize(n);
    for (ItemId i = 0; i < n; ++i) s.ids_[i] = i;
    return s;
  }

  size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  ItemId operator[](size_t i) const { return ids_[i]; }
  std::span<const ItemId> ids() const { return ids_; }

  bool Contains(ItemId x) const {
    return std::binary_search(ids_.begin(), ids_.end(), x);
  }

  void Insert(ItemId x) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), x);
    if (it == ids_.end() || *it != x) ids_.insert(it, x);
  }

  void Erase(ItemId x) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), x);
    if (it != ids_.end() && *it == x) ids_.erase(it);
  }

  ItemSet Without(ItemId x) const {
    ItemSet out = *this;
    out.Erase(x);
    return out;
  }

  ItemSet Union(const ItemSet& other) const {
    ItemSet out;
    out.ids_.reserve(ids_.size() + other.ids_.size());
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(),
                   other.ids_.end(), std::back_inserter(out.ids_));
    return out;
  }

  ItemSet Difference(const ItemSet& other) const {
    ItemSet out;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(),
                        other.ids_.end(), std::back_inserter(out.ids_));
    return out;
  }

  bool IsSubsetOf(const ItemSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                         ids_.end());
  }

  ItemId max_id() const { return ids_.empty() ? 0 : ids_.back(); }

  friend bool operator==(const ItemSet&, const ItemSet&) = default;

 private:
  void Normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<ItemId> ids_;
};

}  // namespace coreset

#endif  // CORESET_ITEM_SET_HPP_
