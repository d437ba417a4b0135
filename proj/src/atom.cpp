#include "recipro/atom.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace recipro {

namespace {

// Append-only table: readers index without locking, writers publish under a mutex.
template <typename T>
class ChunkedTable {
 public:
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = 4096;

  ~ChunkedTable() {
    for (auto& c : chunks_) delete[] c.load();
  }

  const T& get(std::uint32_t id) const {
    if (id >= size_.load(std::memory_order_acquire)) throw std::out_of_range("unknown atom id");
    return chunks_[id >> kChunkBits].load(std::memory_order_acquire)[id & (kChunkSize - 1)];
  }

  // caller holds the writer mutex
  std::uint32_t push(T value) {
    std::uint32_t id = size_.load(std::memory_order_relaxed);
    std::size_t c = id >> kChunkBits;
    if (c >= kMaxChunks) throw std::length_error("atom table exhausted");
    if (chunks_[c].load(std::memory_order_relaxed) == nullptr) chunks_[c].store(new T[kChunkSize], std::memory_order_release);
    chunks_[c].load(std::memory_order_relaxed)[id & (kChunkSize - 1)] = std::move(value);
    size_.store(id + 1, std::memory_order_release);
    return id;
  }

 private:
  std::array<std::atomic<T*>, kMaxChunks> chunks_{};
  std::atomic<std::uint32_t> size_{0};
};

using AtomKey = std::tuple<std::uint8_t, std::string, MultiIndex>;

struct Registry {
  std::mutex mu;
  ChunkedTable<AtomInfo> atoms;
  std::map<AtomKey, AtomId> atom_ids;
  ChunkedTable<std::string> vars;
  std::map<std::string, VarId, std::less<>> var_ids;
};

Registry& registry() {
  static Registry* r = new Registry();
  return *r;
}

AtomId intern_atom(AtomKind kind, std::string_view name, const MultiIndex& index) {
  Registry& r = registry();
  AtomKey key{static_cast<std::uint8_t>(kind), std::string(name), index};
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.atom_ids.find(key);
  if (it != r.atom_ids.end()) return it->second;
  AtomInfo info{kind, std::string(name), index, index.order()};
  AtomId id = r.atoms.push(std::move(info));
  r.atom_ids.emplace(std::move(key), id);
  return id;
}

}  // namespace

VarId intern_var(std::string_view name) {
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.var_ids.find(name);
  if (it != r.var_ids.end()) return it->second;
  VarId id = r.vars.push(std::string(name));
  r.var_ids.emplace(std::string(name), id);
  return id;
}

const std::string& var_name(VarId id) { return registry().vars.get(id); }

int MultiIndex::count(VarId v) const {
  for (const auto& [w, k] : entries_)
    if (w == v) return k;
  return 0;
}

int MultiIndex::order() const {
  int s = 0;
  for (const auto& e : entries_) s += e.second;
  return s;
}

MultiIndex MultiIndex::plus(VarId v, int k) const {
  MultiIndex r = *this;
  auto it = std::lower_bound(r.entries_.begin(), r.entries_.end(), std::make_pair(v, 0));
  if (it != r.entries_.end() && it->first == v) {
    it->second += k;
    if (it->second == 0) r.entries_.erase(it);
  } else if (k != 0) {
    r.entries_.insert(it, {v, k});
  }
  return r;
}

MultiIndex MultiIndex::minus(VarId v, int k) const {
  if (count(v) < k) throw std::invalid_argument("multi-index underflow");
  return plus(v, -k);
}

bool MultiIndex::divides(const MultiIndex& other) const {
  for (const auto& [v, k] : entries_)
    if (other.count(v) < k) return false;
  return true;
}

MultiIndex MultiIndex::difference(const MultiIndex& smaller) const {
  MultiIndex r = *this;
  for (const auto& [v, k] : smaller.entries_) r = r.minus(v, k);
  return r;
}

MultiIndex MultiIndex::lcm(const MultiIndex& other) const {
  MultiIndex r = *this;
  for (const auto& [v, k] : other.entries_) {
    int have = r.count(v);
    if (k > have) r = r.plus(v, k - have);
  }
  return r;
}

AtomId independent_atom(std::string_view name) { return intern_atom(AtomKind::Independent, name, {}); }
AtomId parameter_atom(std::string_view name) { return intern_atom(AtomKind::Parameter, name, {}); }
AtomId jet_atom(std::string_view field, const MultiIndex& index) { return intern_atom(AtomKind::Jet, field, index); }
AtomId generator_atom(std::string_view key) { return intern_atom(AtomKind::Generator, key, {}); }

const AtomInfo& atom_info(AtomId id) { return registry().atoms.get(id); }

AtomId jet_derivative(AtomId jet, VarId v, int k) {
  const AtomInfo& info = atom_info(jet);
  if (info.kind != AtomKind::Jet) throw std::invalid_argument("not a jet atom: " + info.name);
  return jet_atom(info.name, info.index.plus(v, k));
}

namespace {

// index entries re-sorted by variable name so printing does not depend on interning order
std::vector<std::pair<std::string, int>> named_entries(const MultiIndex& index) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto& [v, k] : index.entries()) out.emplace_back(var_name(v), k);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool print_less(AtomId a, AtomId b) {
  if (a == b) return false;
  const AtomInfo& x = atom_info(a);
  const AtomInfo& y = atom_info(b);
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.name != y.name) return x.name < y.name;
  if (x.order != y.order) return x.order < y.order;
  auto ex = named_entries(x.index);
  auto ey = named_entries(y.index);
  if (ex != ey) return ex < ey;
  return a < b;
}

std::string jet_suffix_text(const MultiIndex& index) {
  auto entries = named_entries(index);
  if (entries.empty()) return "";
  if (entries.size() == 1 && entries[0].second == 1) {
    const std::string& v = entries[0].first;
    if (v.size() == 1) return "_" + v;
  }
  std::string s = "_{";
  bool first = true;
  for (const auto& [v, k] : entries) {
    if (!first) s += " ";
    first = false;
    s += v;
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s + "}";
}

std::string jet_suffix_latex(const MultiIndex& index) {
  auto entries = named_entries(index);
  if (entries.empty()) return "";
  std::string s = "_{";
  bool first = true;
  for (const auto& [v, k] : entries) {
    if (!first) s += " ";
    first = false;
    s += v;
    if (k > 1) s += "^{" + std::to_string(k) + "}";
  }
  return s + "}";
}

}  // namespace recipro
