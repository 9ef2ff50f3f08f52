#include <array>
#include <unordered_map>

#include "sctl/engine.hpp"

namespace sctl {

namespace {

class HashStore final : public VisitedStore {
 public:
  Visit query(std::uint32_t sub, StateId s) const override {
    auto it = map_.find(key(sub, s));
    return it == map_.end() ? Visit::Unknown : it->second;
  }
  void mark(std::uint32_t sub, StateId s, Visit v) override {
    if (v == Visit::Unknown) map_.erase(key(sub, s));
    else map_[key(sub, s)] = v;
  }
  std::size_t size() const override { return map_.size(); }

 private:
  static std::uint64_t key(std::uint32_t sub, StateId s) {
    return (static_cast<std::uint64_t>(sub) << 32) | s;
  }
  std::unordered_map<std::uint64_t, Visit> map_;
};

// Reduced ordered decision diagrams over the boolean encoding of a state,
// one diagram per (subformula, status). No garbage collection: the node
// table only grows, which is fine for the lifetime of one search.
class BddStore final : public VisitedStore {
 public:
  explicit BddStore(const KripkeModel& m) : m_(m) {
    nodes_.push_back({kTerm, 0, 0});  // 0 = false
    nodes_.push_back({kTerm, 1, 1});  // 1 = true
  }

  Visit query(std::uint32_t sub, StateId s) const override {
    auto it = roots_.find(sub);
    if (it == roots_.end()) return Visit::Unknown;
    auto bits = encode(s);
    for (int k = 0; k < 3; ++k)
      if (member(it->second[k], bits)) return static_cast<Visit>(k + 1);
    return Visit::Unknown;
  }

  void mark(std::uint32_t sub, StateId s, Visit v) override {
    auto& r = roots_.try_emplace(sub, std::array<std::uint32_t, 3>{0, 0, 0}).first->second;
    auto bits = encode(s);
    bool had = false;
    for (int k = 0; k < 3; ++k) {
      if (member(r[k], bits)) {
        had = true;
        r[k] = remove(r[k], bits, 0);
      }
    }
    if (v != Visit::Unknown) r[static_cast<int>(v) - 1] = insert(r[static_cast<int>(v) - 1], bits, 0);
    if (had && v == Visit::Unknown) --count_;
    if (!had && v != Visit::Unknown) ++count_;
  }

  std::size_t size() const override { return count_; }

 private:
  static constexpr std::uint32_t kTerm = 0xffffffffu;
  struct N {
    std::uint32_t var, lo, hi;
  };

  std::vector<bool> encode(StateId s) const {
    auto b = m_.state_bits(s);
    if (!b.empty()) return b;
    b.resize(32);
    for (int i = 0; i < 32; ++i) b[static_cast<std::size_t>(i)] = (s >> (31 - i)) & 1u;
    return b;
  }

  std::uint32_t var(std::uint32_t u) const { return nodes_[u].var; }

  std::uint32_t mk(std::uint32_t v, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    std::uint64_t k = (static_cast<std::uint64_t>(v) * 0x9e3779b97f4a7c15ull) ^
                      (static_cast<std::uint64_t>(lo) << 32 | hi);
    auto [a, b] = unique_.equal_range(k);
    for (auto it = a; it != b; ++it) {
      const N& n = nodes_[it->second];
      if (n.var == v && n.lo == lo && n.hi == hi) return it->second;
    }
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({v, lo, hi});
    unique_.emplace(k, id);
    return id;
  }

  std::uint32_t insert(std::uint32_t u, const std::vector<bool>& bits, std::uint32_t i) {
    if (u == 1) return 1;
    if (i == bits.size()) return 1;
    std::uint32_t lo = u, hi = u;
    if (var(u) == i) {
      lo = nodes_[u].lo;
      hi = nodes_[u].hi;
    }
    if (bits[i]) hi = insert(hi, bits, i + 1);
    else lo = insert(lo, bits, i + 1);
    return mk(i, lo, hi);
  }

  std::uint32_t remove(std::uint32_t u, const std::vector<bool>& bits, std::uint32_t i) {
    if (u == 0) return 0;
    if (i == bits.size()) return 0;
    std::uint32_t lo = u, hi = u;
    if (var(u) == i) {
      lo = nodes_[u].lo;
      hi = nodes_[u].hi;
    }
    if (bits[i]) hi = remove(hi, bits, i + 1);
    else lo = remove(lo, bits, i + 1);
    return mk(i, lo, hi);
  }

  bool member(std::uint32_t u, const std::vector<bool>& bits) const {
    while (u > 1) u = bits[var(u)] ? nodes_[u].hi : nodes_[u].lo;
    return u == 1;
  }

  const KripkeModel& m_;
  std::vector<N> nodes_;
  std::unordered_multimap<std::uint64_t, std::uint32_t> unique_;
  std::unordered_map<std::uint32_t, std::array<std::uint32_t, 3>> roots_;
  std::size_t count_ = 0;
};

}  // namespace

std::unique_ptr<VisitedStore> make_visited_store(VisitedBackend b, const KripkeModel& m) {
  if (b == VisitedBackend::Bdd) return std::make_unique<BddStore>(m);
  return std::make_unique<HashStore>();
}

}  // namespace sctl
