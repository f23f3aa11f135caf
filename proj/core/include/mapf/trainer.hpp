#pragma once

#include "mapf/ddg.hpp"
#include "mapf/policy.hpp"

namespace mapf {

struct TrainConfig {
  size_t iterations = 1000;
  size_t batch_size = 256;
  double lr = 0.05;
  double lr_final_fraction = 0.1;  // cosine decay floor, as a fraction of lr
  double mix = 0.25;               // target share of generated samples
  uint64_t seed = 0;
};

struct TrainReport {
  std::vector<double> losses;  // mean batch loss per iteration
  double final_loss = 0;
  size_t gen_share = 0;  // generated samples per batch actually used
  size_t gen_samples_used = 0;
  size_t expert_samples_used = 0;
};

// Mean negative log-likelihood of the labeled actions.
double nll_loss(const PolicyParams& p, const Sample* samples, size_t count);

// Adds the batch-summed gradient into `grad` (same layout as p.w) and
// returns the summed loss. Exposed so the analytic gradient can be checked
// against finite differences.
double loss_and_grad_sum(const PolicyParams& p, const Sample* samples,
                         size_t count, std::vector<double>& grad);

struct ValidationMetrics {
  double loss = 0;
  double accuracy = 0;
};
ValidationMetrics validation_metrics(const PolicyParams& p,
                                     const std::vector<Sample>& samples);

// Draws each batch as a fixed split: generated samples come from one
// phase-wide shuffle and are never repeated within the run (the share is
// capped at ring_size / iterations to make that possible); expert samples
// fill the remainder with replacement.
class MixedBatchSampler {
 public:
  MixedBatchSampler(const SampleRing& gen, const std::vector<Sample>& expert,
                    size_t batch_size, double mix, size_t iterations,
                    std::mt19937& rng);

  std::vector<const Sample*> next(std::mt19937& rng);
  size_t gen_share() const { return gen_share_; }
  // Generated samples actually drawn by the last next() call.
  size_t last_gen_drawn() const { return last_gen_drawn_; }

 private:
  const SampleRing& gen_;
  const std::vector<Sample>& expert_;
  size_t batch_size_;
  size_t gen_share_;
  size_t last_gen_drawn_ = 0;
  std::vector<size_t> gen_order_;
  size_t cursor_ = 0;
};

// Plain minibatch gradient descent with a cosine-decayed learning rate.
PolicyParams fine_tune(PolicyParams params, const SampleRing& gen,
                       const std::vector<Sample>& expert,
                       const TrainConfig& cfg, TrainReport* report = nullptr);

// ---------------------------------------------------------------------------
// Phase loop: alternate data generation and optimization

enum class TrainMode { Plain, Dagger, Ddg };

TrainMode train_mode_from_string(const std::string& s);
const char* to_string(TrainMode mode);

struct LoopConfig {
  DdgConfig gen;
  TrainConfig train;
  size_t phases = 3;
  size_t ring_capacity = 0;  // 0 = 4x the per-phase generation target
  TrainMode mode = TrainMode::Ddg;
  size_t probe_episode_limit = 128;
  std::string checkpoint_dir;  // empty = no checkpoints
};

struct PhaseRecord {
  size_t phase = 0;
  PhaseStats gen;  // all-zero in plain mode
  TrainReport train;
  ValidationMetrics val;
  double success_rate = -1;  // -1 when no probe instances were given
  size_t ring_size = 0;
};

struct LoopResult {
  PolicyParams params;
  std::vector<PhaseRecord> phases;
};

// Argmax rollouts of the linear policy over the probe set; the fraction
// that gets every agent to its goal within the step limit.
double probe_success_rate(const PolicyParams& params,
                          const std::vector<MAPFInstance>& probes,
                          size_t episode_limit, FieldCache& cache);

// The full fine-tuning loop. Each phase generates data per `mode` (plain
// skips generation and trains on the expert set alone), runs the configured
// optimization iterations, then scores validation loss and probe success.
// With a checkpoint directory set, parameters land there after every phase.
LoopResult run_training_loop(PolicyParams init,
                             const std::vector<Sample>& expert,
                             const std::vector<Sample>& validation,
                             const std::vector<MAPFInstance>& probes,
                             const LoopConfig& cfg, FieldCache& cache);

}  // namespace mapf
