#include "coadapt/rl/replay.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace coadapt::rl {

std::string MorphKey::str() const {
  std::string out = graph_id;
  char buf[40];
  for (const double v : design) {
    std::snprintf(buf, sizeof(buf), ":%a", v);
    out += buf;
  }
  return out;
}

ReplayBuffer::ReplayBuffer(MorphKey key, int obs_dim, int act_dim, std::size_t capacity)
    : key_(std::move(key)), obs_dim_(obs_dim), act_dim_(act_dim), capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("replay buffer: zero capacity");
}

void ReplayBuffer::add(Transition t) {
  if (static_cast<int>(t.s.size()) != obs_dim_ || static_cast<int>(t.s2.size()) != obs_dim_ ||
      static_cast<int>(t.a.size()) != act_dim_)
    throw std::invalid_argument("replay buffer: transition dimensions mismatch");
  if (store_.size() < capacity_) {
    store_.push_back(std::move(t));
  } else {
    store_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
  }
}

void ReplayBuffer::add_initial_state(std::vector<double> s0) {
  initial_states_.push_back(std::move(s0));
}

std::vector<int> ReplayBuffer::sample_indices(int batch, num::Rng& rng) const {
  if (store_.empty()) throw std::logic_error("replay buffer: sampling from empty buffer");
  std::vector<int> idx(batch);
  for (int i = 0; i < batch; ++i)
    idx[i] = static_cast<int>(rng.integer(store_.size()));
  return idx;
}

ReplayBuffer& ReplayBufferSet::get_or_create(const MorphKey& key, int obs_dim, int act_dim,
                                             std::size_t capacity) {
  const std::string k = key.str();
  auto it = index_.find(k);
  if (it != index_.end()) return *buffers_[it->second];
  buffers_.push_back(std::make_unique<ReplayBuffer>(key, obs_dim, act_dim, capacity));
  index_[k] = buffers_.size() - 1;
  return *buffers_.back();
}

ReplayBuffer* ReplayBufferSet::find(const MorphKey& key) {
  auto it = index_.find(key.str());
  return it == index_.end() ? nullptr : buffers_[it->second].get();
}

const ReplayBuffer* ReplayBufferSet::find(const MorphKey& key) const {
  auto it = index_.find(key.str());
  return it == index_.end() ? nullptr : buffers_[it->second].get();
}

std::vector<ReplayBuffer*> ReplayBufferSet::with_graph(const std::string& graph_id) {
  std::vector<ReplayBuffer*> out;
  for (auto& b : buffers_)
    if (b->key().graph_id == graph_id) out.push_back(b.get());
  return out;
}

Batch make_batch(const ReplayBuffer& buf, const std::vector<int>& idx) {
  const int B = static_cast<int>(idx.size());
  Batch b;
  b.s = num::Tensor(B, buf.obs_dim());
  b.a = num::Tensor(B, buf.act_dim());
  b.r = num::Tensor(B, 1);
  b.s2 = num::Tensor(B, buf.obs_dim());
  b.not_done = num::Tensor(B, 1);
  for (int i = 0; i < B; ++i) {
    const Transition& t = buf.at(idx[i]);
    for (int j = 0; j < buf.obs_dim(); ++j) {
      b.s.at(i, j) = t.s[j];
      b.s2.at(i, j) = t.s2[j];
    }
    for (int j = 0; j < buf.act_dim(); ++j) b.a.at(i, j) = t.a[j];
    b.r.at(i, 0) = t.r;
    b.not_done.at(i, 0) = t.done ? 0.0 : 1.0;
  }
  return b;
}

namespace {
void write_u64(std::ofstream& f, std::uint64_t v) { f.write(reinterpret_cast<char*>(&v), 8); }
std::uint64_t read_u64(std::ifstream& f) {
  std::uint64_t v = 0;
  f.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
void write_vec(std::ofstream& f, const std::vector<double>& v) {
  write_u64(f, v.size());
  f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
}
std::vector<double> read_vec(std::ifstream& f) {
  std::vector<double> v(read_u64(f));
  f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
  return v;
}
constexpr char kMagic[8] = {'C', 'A', 'B', 'U', 'F', '0', '0', '1'};
}  // namespace

void save_buffer(const ReplayBuffer& buf, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("save_buffer: cannot open " + path);
  f.write(kMagic, 8);
  write_u64(f, buf.key().graph_id.size());
  f.write(buf.key().graph_id.data(), static_cast<std::streamsize>(buf.key().graph_id.size()));
  write_vec(f, buf.key().design);
  write_u64(f, static_cast<std::uint64_t>(buf.obs_dim()));
  write_u64(f, static_cast<std::uint64_t>(buf.act_dim()));
  write_u64(f, buf.capacity());
  write_u64(f, buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const Transition& t = buf.at(i);
    write_vec(f, t.s);
    write_vec(f, t.a);
    f.write(reinterpret_cast<const char*>(&t.r), 8);
    write_vec(f, t.s2);
    const std::uint64_t d = t.done ? 1 : 0;
    write_u64(f, d);
  }
  write_u64(f, buf.initial_states().size());
  for (const auto& s0 : buf.initial_states()) write_vec(f, s0);
}

std::unique_ptr<ReplayBuffer> load_buffer(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_buffer: cannot open " + path);
  char magic[8];
  f.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("load_buffer: bad magic in " + path);
  MorphKey key;
  key.graph_id.resize(read_u64(f));
  f.read(key.graph_id.data(), static_cast<std::streamsize>(key.graph_id.size()));
  key.design = read_vec(f);
  const int obs_dim = static_cast<int>(read_u64(f));
  const int act_dim = static_cast<int>(read_u64(f));
  const std::size_t capacity = read_u64(f);
  const std::size_t count = read_u64(f);
  auto buf = std::make_unique<ReplayBuffer>(key, obs_dim, act_dim, capacity);
  for (std::size_t i = 0; i < count; ++i) {
    Transition t;
    t.s = read_vec(f);
    t.a = read_vec(f);
    f.read(reinterpret_cast<char*>(&t.r), 8);
    t.s2 = read_vec(f);
    t.done = read_u64(f) != 0;
    buf->add(std::move(t));
  }
  const std::size_t n0 = read_u64(f);
  for (std::size_t i = 0; i < n0; ++i) buf->add_initial_state(read_vec(f));
  if (!f) throw std::runtime_error("load_buffer: truncated file " + path);
  return buf;
}

}  // namespace coadapt::rl
