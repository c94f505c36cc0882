#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "coadapt/num/rng.hpp"
#include "coadapt/num/tensor.hpp"

namespace coadapt::rl {

struct Transition {
  std::vector<double> s;
  std::vector<double> a;
  double r = 0.0;
  std::vector<double> s2;
  bool done = false;
};

// Identity of one produced prototype: graph topology plus the exact design.
struct MorphKey {
  std::string graph_id;
  std::vector<double> design;

  std::string str() const;  // stable, bit-exact encoding of the design
  bool operator==(const MorphKey& o) const { return str() == o.str(); }
};

// Ring buffer of transitions for one (graph, design), FIFO at capacity,
// uniform sampling with replacement. Initial states of episodes are kept
// separately for the design objective's state batches.
class ReplayBuffer {
 public:
  ReplayBuffer(MorphKey key, int obs_dim, int act_dim, std::size_t capacity);

  void add(Transition t);
  void add_initial_state(std::vector<double> s0);

  std::size_t size() const { return store_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return store_[(head_ + i) % store_.size()]; }
  const MorphKey& key() const { return key_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }
  const std::vector<std::vector<double>>& initial_states() const { return initial_states_; }

  // Uniform with replacement; requires a non-empty buffer.
  std::vector<int> sample_indices(int batch, num::Rng& rng) const;

 private:
  MorphKey key_;
  int obs_dim_;
  int act_dim_;
  std::size_t capacity_;
  std::size_t head_ = 0;  // index of the oldest element once full
  std::vector<Transition> store_;
  std::vector<std::vector<double>> initial_states_;
};

// The global experience store: one buffer per visited morphology, in
// insertion order.
class ReplayBufferSet {
 public:
  ReplayBuffer& get_or_create(const MorphKey& key, int obs_dim, int act_dim,
                              std::size_t capacity);
  ReplayBuffer* find(const MorphKey& key);
  const ReplayBuffer* find(const MorphKey& key) const;
  std::vector<ReplayBuffer*> with_graph(const std::string& graph_id);

  std::size_t size() const { return buffers_.size(); }
  ReplayBuffer& at(std::size_t i) { return *buffers_[i]; }
  const ReplayBuffer& at(std::size_t i) const { return *buffers_[i]; }

 private:
  std::vector<std::unique_ptr<ReplayBuffer>> buffers_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Dense batch view used by the loss functions.
struct Batch {
  num::Tensor s;         // B x obs
  num::Tensor a;         // B x act
  num::Tensor r;         // B x 1
  num::Tensor s2;        // B x obs
  num::Tensor not_done;  // B x 1, 1.0 where bootstrap applies
};

Batch make_batch(const ReplayBuffer& buf, const std::vector<int>& idx);

// Snapshot/restore for resumable runs; documented little-endian binary.
void save_buffer(const ReplayBuffer& buf, const std::string& path);
std::unique_ptr<ReplayBuffer> load_buffer(const std::string& path);

}  // namespace coadapt::rl
