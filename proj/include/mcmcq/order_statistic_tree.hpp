#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace mcmcq {

/// Size-augmented AVL tree over unique keys. Nodes live in a pooled vector
/// addressed by index; erased slots are recycled. insert, erase and nth are
/// O(log size).
template <class Key, class Compare = std::less<Key>>
class OrderStatisticTree {
 public:
  OrderStatisticTree() = default;
  explicit OrderStatisticTree(std::size_t reserve) { nodes_.reserve(reserve); }

  std::size_t size() const noexcept { return size_of(root_); }
  bool empty() const noexcept { return root_ == nil; }

  void clear() noexcept {
    nodes_.clear();
    free_ = nil;
    root_ = nil;
  }

  /// Returns false if an equivalent key is already present.
  bool insert(const Key& key) {
    bool inserted = false;
    root_ = insert_at(root_, key, inserted);
    return inserted;
  }

  /// Returns false if the key is absent.
  bool erase(const Key& key) {
    bool erased = false;
    root_ = erase_at(root_, key, erased);
    return erased;
  }

  /// Key of 0-based rank k in ascending order. Requires k < size().
  const Key& nth(std::size_t k) const {
    assert(k < size());
    Index node = root_;
    while (true) {
      const std::size_t left = size_of(nodes_[node].left);
      if (k < left) {
        node = nodes_[node].left;
      } else if (k == left) {
        return nodes_[node].key;
      } else {
        k -= left + 1;
        node = nodes_[node].right;
      }
    }
  }

  /// Number of keys strictly less than `key`.
  std::size_t rank(const Key& key) const {
    std::size_t below = 0;
    Index node = root_;
    while (node != nil) {
      if (less_(nodes_[node].key, key)) {
        below += size_of(nodes_[node].left) + 1;
        node = nodes_[node].right;
      } else {
        node = nodes_[node].left;
      }
    }
    return below;
  }

  /// Checks ordering, size fields and the AVL balance condition.
  bool check_invariants() const {
    int height = 0;
    std::size_t count = 0;
    return check(root_, nullptr, nullptr, height, count);
  }

 private:
  using Index = std::int32_t;
  static constexpr Index nil = -1;

  struct Node {
    Key key;
    Index left = nil;
    Index right = nil;
    std::int32_t height = 1;
    std::size_t size = 1;
  };

  std::size_t size_of(Index i) const noexcept {
    return i == nil ? 0 : nodes_[i].size;
  }
  std::int32_t height_of(Index i) const noexcept {
    return i == nil ? 0 : nodes_[i].height;
  }

  void update(Index i) noexcept {
    Node& n = nodes_[i];
    n.height = 1 + std::max(height_of(n.left), height_of(n.right));
    n.size = 1 + size_of(n.left) + size_of(n.right);
  }

  Index rotate_right(Index i) noexcept {
    const Index l = nodes_[i].left;
    nodes_[i].left = nodes_[l].right;
    nodes_[l].right = i;
    update(i);
    update(l);
    return l;
  }

  Index rotate_left(Index i) noexcept {
    const Index r = nodes_[i].right;
    nodes_[i].right = nodes_[r].left;
    nodes_[r].left = i;
    update(i);
    update(r);
    return r;
  }

  Index rebalance(Index i) noexcept {
    update(i);
    const int balance = height_of(nodes_[i].left) - height_of(nodes_[i].right);
    if (balance > 1) {
      const Index l = nodes_[i].left;
      if (height_of(nodes_[l].left) < height_of(nodes_[l].right)) {
        nodes_[i].left = rotate_left(l);
      }
      return rotate_right(i);
    }
    if (balance < -1) {
      const Index r = nodes_[i].right;
      if (height_of(nodes_[r].right) < height_of(nodes_[r].left)) {
        nodes_[i].right = rotate_right(r);
      }
      return rotate_left(i);
    }
    return i;
  }

  Index allocate(const Key& key) {
    if (free_ != nil) {
      const Index i = free_;
      free_ = nodes_[i].left;
      nodes_[i] = Node{key};
      return i;
    }
    nodes_.push_back(Node{key});
    return static_cast<Index>(nodes_.size() - 1);
  }

  void release(Index i) noexcept {
    nodes_[i].left = free_;
    free_ = i;
  }

  Index insert_at(Index i, const Key& key, bool& inserted) {
    if (i == nil) {
      inserted = true;
      return allocate(key);
    }
    if (less_(key, nodes_[i].key)) {
      const Index child = insert_at(nodes_[i].left, key, inserted);
      nodes_[i].left = child;
    } else if (less_(nodes_[i].key, key)) {
      const Index child = insert_at(nodes_[i].right, key, inserted);
      nodes_[i].right = child;
    } else {
      return i;
    }
    return inserted ? rebalance(i) : i;
  }

  // Detaches the minimum of subtree i; returns the new subtree root and
  // stores the detached node in `min_node`.
  Index detach_min(Index i, Index& min_node) noexcept {
    if (nodes_[i].left == nil) {
      min_node = i;
      return nodes_[i].right;
    }
    nodes_[i].left = detach_min(nodes_[i].left, min_node);
    return rebalance(i);
  }

  Index erase_at(Index i, const Key& key, bool& erased) {
    if (i == nil) return nil;
    if (less_(key, nodes_[i].key)) {
      nodes_[i].left = erase_at(nodes_[i].left, key, erased);
    } else if (less_(nodes_[i].key, key)) {
      nodes_[i].right = erase_at(nodes_[i].right, key, erased);
    } else {
      erased = true;
      const Index left = nodes_[i].left;
      const Index right = nodes_[i].right;
      release(i);
      if (right == nil) return left;
      Index successor = nil;
      const Index rest = detach_min(right, successor);
      nodes_[successor].left = left;
      nodes_[successor].right = rest;
      return rebalance(successor);
    }
    return erased ? rebalance(i) : i;
  }

  bool check(Index i, const Key* lo, const Key* hi, int& height,
             std::size_t& count) const {
    if (i == nil) {
      height = 0;
      count = 0;
      return true;
    }
    const Node& n = nodes_[i];
    if (lo && !less_(*lo, n.key)) return false;
    if (hi && !less_(n.key, *hi)) return false;
    int hl = 0, hr = 0;
    std::size_t cl = 0, cr = 0;
    if (!check(n.left, lo, &n.key, hl, cl)) return false;
    if (!check(n.right, &n.key, hi, hr, cr)) return false;
    if (hl - hr > 1 || hr - hl > 1) return false;
    height = 1 + std::max(hl, hr);
    count = 1 + cl + cr;
    return n.height == height && n.size == count;
  }

  std::vector<Node> nodes_;
  Index free_ = nil;
  Index root_ = nil;
  [[no_unique_address]] Compare less_{};
};

}  // namespace mcmcq
