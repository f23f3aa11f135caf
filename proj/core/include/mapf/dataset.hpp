#pragma once

#include <deque>

#include "mapf/tokens.hpp"

namespace mapf {

// One supervised pair: token rendering of an observation plus the action the
// expert took, with enough provenance to trace it back.
struct Sample {
  TokenSeq tokens{};
  uint8_t action = 0;
  uint64_t instance_seed = 0;
  uint32_t timestep = 0;
  uint32_t agent = 0;
  uint32_t phase = 0;

  bool operator==(const Sample& o) const {
    return tokens == o.tokens && action == o.action &&
           instance_seed == o.instance_seed && timestep == o.timestep &&
           agent == o.agent && phase == o.phase;
  }
};

struct ShardInfo {
  uint32_t version = 0;
  uint32_t vocab = 0;
  uint32_t context = 0;
  uint64_t count = 0;
  uint64_t checksum = 0;
};

// Shard layout: 8-byte magic, u32 version/vocab/context, u64 count, u64
// FNV-1a checksum over the record bytes, then fixed-width records.
void save_shard(const std::vector<Sample>& samples, const std::string& path);
std::vector<Sample> load_shard(const std::string& path);
ShardInfo read_shard_info(const std::string& path);

// Bounded store for freshly generated samples. Adding past capacity evicts
// the oldest samples one by one, so the window always holds the newest
// `capacity` samples in insertion order.
class SampleRing {
 public:
  explicit SampleRing(size_t capacity) : capacity_(capacity) {}

  void add(const std::vector<Sample>& batch);
  const Sample& operator[](size_t i) const { return samples_[i]; }
  size_t size() const { return samples_.size(); }
  size_t capacity() const { return capacity_; }
  uint64_t total_added() const { return total_added_; }
  uint64_t evicted() const { return evicted_; }

  std::vector<Sample> snapshot() const {
    return std::vector<Sample>(samples_.begin(), samples_.end());
  }

 private:
  size_t capacity_;
  std::deque<Sample> samples_;
  uint64_t total_added_ = 0;
  uint64_t evicted_ = 0;
};

}  // namespace mapf
