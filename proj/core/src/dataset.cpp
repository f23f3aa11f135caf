#include "mapf/dataset.hpp"

#include <cstring>
#include <fstream>

namespace mapf {

namespace {

constexpr char kShardMagic[8] = {'M', 'A', 'P', 'F', 'D', 'S', '0', '1'};
constexpr uint32_t kShardVersion = 1;
constexpr size_t kRecordBytes =
    kContextLen + 1 + 8 + 4 + 4 + 4;  // tokens, action, seed, t, agent, phase

void encode_record(const Sample& s, unsigned char* out) {
  size_t o = 0;
  std::memcpy(out + o, s.tokens.data(), kContextLen);
  o += kContextLen;
  out[o++] = s.action;
  std::memcpy(out + o, &s.instance_seed, 8);
  o += 8;
  std::memcpy(out + o, &s.timestep, 4);
  o += 4;
  std::memcpy(out + o, &s.agent, 4);
  o += 4;
  std::memcpy(out + o, &s.phase, 4);
}

Sample decode_record(const unsigned char* in) {
  Sample s;
  size_t o = 0;
  std::memcpy(s.tokens.data(), in + o, kContextLen);
  o += kContextLen;
  s.action = in[o++];
  std::memcpy(&s.instance_seed, in + o, 8);
  o += 8;
  std::memcpy(&s.timestep, in + o, 4);
  o += 4;
  std::memcpy(&s.agent, in + o, 4);
  o += 4;
  std::memcpy(&s.phase, in + o, 4);
  return s;
}

void read_header(std::ifstream& f, ShardInfo& info, const std::string& path) {
  char magic[8];
  f.read(magic, 8);
  if (!f || std::memcmp(magic, kShardMagic, 8) != 0)
    throw CorruptShardError("bad shard magic: " + path);
  f.read(reinterpret_cast<char*>(&info.version), 4);
  f.read(reinterpret_cast<char*>(&info.vocab), 4);
  f.read(reinterpret_cast<char*>(&info.context), 4);
  f.read(reinterpret_cast<char*>(&info.count), 8);
  f.read(reinterpret_cast<char*>(&info.checksum), 8);
  if (!f) throw CorruptShardError("shard header truncated: " + path);
  if (info.version != kShardVersion)
    throw CorruptShardError("unsupported shard version " +
                            std::to_string(info.version) + ": " + path);
  if (info.vocab != kVocabSize || info.context != kContextLen)
    throw CorruptShardError("shard vocab/context mismatch: " + path);
}

}  // namespace

void save_shard(const std::vector<Sample>& samples, const std::string& path) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw IoError("cannot write shard: " + tmp);
    f.write(kShardMagic, 8);
    uint32_t version = kShardVersion, vocab = kVocabSize,
             context = kContextLen;
    uint64_t count = samples.size();
    f.write(reinterpret_cast<const char*>(&version), 4);
    f.write(reinterpret_cast<const char*>(&vocab), 4);
    f.write(reinterpret_cast<const char*>(&context), 4);
    f.write(reinterpret_cast<const char*>(&count), 8);

    uint64_t checksum = kFnvOffset;
    unsigned char rec[kRecordBytes];
    std::streampos checksum_pos = f.tellp();
    uint64_t placeholder = 0;
    f.write(reinterpret_cast<const char*>(&placeholder), 8);
    for (const Sample& s : samples) {
      encode_record(s, rec);
      checksum = fnv1a(rec, kRecordBytes, checksum);
      f.write(reinterpret_cast<const char*>(rec), kRecordBytes);
    }
    f.seekp(checksum_pos);
    f.write(reinterpret_cast<const char*>(&checksum), 8);
    if (!f) throw IoError("short write to shard: " + tmp);
  }
  std::remove(path.c_str());
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("cannot move shard into place: " + path);
}

std::vector<Sample> load_shard(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open shard: " + path);
  ShardInfo info;
  read_header(f, info, path);

  std::vector<Sample> samples;
  samples.reserve(info.count);
  uint64_t checksum = kFnvOffset;
  unsigned char rec[kRecordBytes];
  for (uint64_t i = 0; i < info.count; ++i) {
    f.read(reinterpret_cast<char*>(rec), kRecordBytes);
    if (!f)
      throw CorruptShardError("shard truncated at record " +
                              std::to_string(i) + ": " + path);
    checksum = fnv1a(rec, kRecordBytes, checksum);
    samples.push_back(decode_record(rec));
  }
  if (checksum != info.checksum)
    throw CorruptShardError("shard checksum mismatch: " + path);
  return samples;
}

ShardInfo read_shard_info(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open shard: " + path);
  ShardInfo info;
  read_header(f, info, path);
  return info;
}

void SampleRing::add(const std::vector<Sample>& batch) {
  for (const Sample& s : batch) {
    samples_.push_back(s);
    ++total_added_;
    if (samples_.size() > capacity_) {
      samples_.pop_front();
      ++evicted_;
    }
  }
}

}  // namespace mapf
