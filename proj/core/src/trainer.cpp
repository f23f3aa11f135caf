#include "mapf/trainer.hpp"

#include <cmath>
#include <filesystem>

#include "mapf/rollout.hpp"

namespace mapf {

namespace {

// log(sum exp(logits)) with max subtraction; loss = lse - logit[label].
double logsumexp(const std::array<double, kNumActions>& logits) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double s = 0;
  for (double v : logits) s += std::exp(v - mx);
  return mx + std::log(s);
}

}  // namespace

double nll_loss(const PolicyParams& p, const Sample* samples, size_t count) {
  if (count == 0) return 0;
  double total = 0;
  for (size_t i = 0; i < count; ++i) {
    auto logits = policy_logits(p, samples[i].tokens);
    total += logsumexp(logits) - logits[samples[i].action];
  }
  return total / static_cast<double>(count);
}

double loss_and_grad_sum(const PolicyParams& p, const Sample* samples,
                         size_t count, std::vector<double>& grad) {
  double total = 0;
  for (size_t i = 0; i < count; ++i) {
    const Sample& s = samples[i];
    auto logits = policy_logits(p, s.tokens);
    double lse = logsumexp(logits);
    total += lse - logits[s.action];
    std::array<double, kNumActions> coef;
    for (size_t a = 0; a < kNumActions; ++a) {
      coef[a] = std::exp(logits[a] - lse);
      if (a == s.action) coef[a] -= 1.0;
    }
    for (size_t pos = 0; pos < kContextLen; ++pos) {
      double* g = &grad[param_index(pos, s.tokens[pos], 0)];
      for (size_t a = 0; a < kNumActions; ++a) g[a] += coef[a];
    }
  }
  return total;
}

ValidationMetrics validation_metrics(const PolicyParams& p,
                                     const std::vector<Sample>& samples) {
  ValidationMetrics m;
  if (samples.empty()) return m;
  double loss = 0;
  size_t hits = 0;
  for (const Sample& s : samples) {
    auto logits = policy_logits(p, s.tokens);
    loss += logsumexp(logits) - logits[s.action];
    size_t best = 0;
    for (size_t a = 1; a < kNumActions; ++a)
      if (logits[a] > logits[best]) best = a;
    hits += (best == s.action);
  }
  m.loss = loss / static_cast<double>(samples.size());
  m.accuracy = static_cast<double>(hits) / static_cast<double>(samples.size());
  return m;
}

MixedBatchSampler::MixedBatchSampler(const SampleRing& gen,
                                     const std::vector<Sample>& expert,
                                     size_t batch_size, double mix,
                                     size_t iterations, std::mt19937& rng)
    : gen_(gen), expert_(expert), batch_size_(batch_size) {
  if (batch_size == 0 || iterations == 0)
    throw SpecInvalidError("batch size and iterations must be positive");
  if (gen.size() == 0 && expert.empty())
    throw SpecInvalidError("no training data");
  size_t want = static_cast<size_t>(mix * static_cast<double>(batch_size));
  gen_share_ = std::min(want, gen.size() / iterations);
  if (expert.empty()) gen_share_ = std::min(batch_size_, gen.size());
  gen_order_.resize(gen.size());
  for (size_t i = 0; i < gen_order_.size(); ++i) gen_order_[i] = i;
  for (size_t i = gen_order_.size(); i > 1; --i)
    std::swap(gen_order_[i - 1], gen_order_[rand_index(rng, i)]);
}

std::vector<const Sample*> MixedBatchSampler::next(std::mt19937& rng) {
  std::vector<const Sample*> batch;
  batch.reserve(batch_size_);
  for (size_t k = 0; k < gen_share_ && cursor_ < gen_order_.size(); ++k)
    batch.push_back(&gen_[gen_order_[cursor_++]]);
  last_gen_drawn_ = batch.size();
  while (batch.size() < batch_size_ && !expert_.empty())
    batch.push_back(&expert_[rand_index(rng, expert_.size())]);
  // Expert pool empty: pad from the generated window with replacement.
  while (batch.size() < batch_size_ && gen_.size() > 0)
    batch.push_back(&gen_[rand_index(rng, gen_.size())]);
  return batch;
}

PolicyParams fine_tune(PolicyParams params, const SampleRing& gen,
                       const std::vector<Sample>& expert,
                       const TrainConfig& cfg, TrainReport* report) {
  std::mt19937 rng(static_cast<uint32_t>(fnv1a(&cfg.seed, sizeof(cfg.seed))));
  MixedBatchSampler sampler(gen, expert, cfg.batch_size, cfg.mix,
                            cfg.iterations, rng);

  std::vector<double> grad(params.size(), 0.0);
  std::vector<size_t> touched;
  std::vector<uint8_t> touched_flag(kContextLen * kVocabSize, 0);
  touched.reserve(cfg.batch_size * kContextLen);

  const double lr_hi = cfg.lr;
  const double lr_lo = cfg.lr * cfg.lr_final_fraction;
  double last_loss = 0;

  if (report) {
    report->gen_share = sampler.gen_share();
    report->losses.reserve(cfg.iterations);
  }

  for (size_t it = 0; it < cfg.iterations; ++it) {
    auto batch = sampler.next(rng);
    if (batch.empty()) break;

    double sum = 0;
    for (const Sample* s : batch) {
      auto logits = policy_logits(params, s->tokens);
      double lse = logsumexp(logits);
      sum += lse - logits[s->action];
      std::array<double, kNumActions> coef;
      for (size_t a = 0; a < kNumActions; ++a) {
        coef[a] = std::exp(logits[a] - lse);
        if (a == s->action) coef[a] -= 1.0;
      }
      for (size_t pos = 0; pos < kContextLen; ++pos) {
        size_t fid = pos * kVocabSize + s->tokens[pos];
        if (!touched_flag[fid]) {
          touched_flag[fid] = 1;
          touched.push_back(fid);
        }
        double* g = &grad[fid * kNumActions];
        for (size_t a = 0; a < kNumActions; ++a) g[a] += coef[a];
      }
    }

    double progress = cfg.iterations > 1
                          ? static_cast<double>(it) /
                                static_cast<double>(cfg.iterations - 1)
                          : 0.0;
    double lr = lr_lo + 0.5 * (lr_hi - lr_lo) * (1.0 + std::cos(M_PI * progress));
    double scale = lr / static_cast<double>(batch.size());

    for (size_t fid : touched) {
      double* w = &params.w[fid * kNumActions];
      double* g = &grad[fid * kNumActions];
      for (size_t a = 0; a < kNumActions; ++a) {
        w[a] -= scale * g[a];
        g[a] = 0;
      }
      touched_flag[fid] = 0;
    }
    touched.clear();

    last_loss = sum / static_cast<double>(batch.size());
    if (!std::isfinite(last_loss))
      throw NonFiniteScoreError("training loss diverged at iteration " +
                                std::to_string(it));
    if (report) {
      report->losses.push_back(last_loss);
      report->gen_samples_used += sampler.last_gen_drawn();
      report->expert_samples_used += batch.size() - sampler.last_gen_drawn();
    }
  }
  if (report) report->final_loss = last_loss;
  return params;
}

TrainMode train_mode_from_string(const std::string& s) {
  if (s == "plain") return TrainMode::Plain;
  if (s == "dagger") return TrainMode::Dagger;
  if (s == "ddg") return TrainMode::Ddg;
  throw UnknownIdError("unknown training mode: " + s);
}

const char* to_string(TrainMode mode) {
  switch (mode) {
    case TrainMode::Plain:
      return "plain";
    case TrainMode::Dagger:
      return "dagger";
    case TrainMode::Ddg:
      return "ddg";
  }
  return "?";
}

double probe_success_rate(const PolicyParams& params,
                          const std::vector<MAPFInstance>& probes,
                          size_t episode_limit, FieldCache& cache) {
  if (probes.empty()) return -1;
  auto shared = std::make_shared<const PolicyParams>(params);
  LinearPolicy policy(shared, /*stochastic=*/false);
  size_t solved = 0;
  for (const MAPFInstance& inst : probes) {
    Rollout ro = run_rollout(inst, policy, cache,
                             RolloutLimits{episode_limit, true}, inst.seed);
    solved += ro.solved;
  }
  return static_cast<double>(solved) / static_cast<double>(probes.size());
}

LoopResult run_training_loop(PolicyParams init,
                             const std::vector<Sample>& expert,
                             const std::vector<Sample>& validation,
                             const std::vector<MAPFInstance>& probes,
                             const LoopConfig& cfg, FieldCache& cache) {
  LoopResult result;
  result.params = std::move(init);
  size_t capacity = cfg.ring_capacity
                        ? cfg.ring_capacity
                        : 4 * std::max<size_t>(1, cfg.gen.generation_target);
  SampleRing ring(capacity);

  for (size_t phase = 0; phase < cfg.phases; ++phase) {
    PhaseRecord rec;
    rec.phase = phase;

    if (cfg.mode != TrainMode::Plain) {
      auto shared = std::make_shared<const PolicyParams>(result.params);
      LinearPolicy rollout_policy(shared, /*stochastic=*/true);
      uint64_t phase_seed =
          fnv1a(&phase, sizeof(phase),
                fnv1a(&cfg.train.seed, sizeof(cfg.train.seed)));
      rec.gen = cfg.mode == TrainMode::Ddg
                    ? run_generation_phase(rollout_policy, cfg.gen, cache,
                                           ring, phase_seed,
                                           static_cast<uint32_t>(phase))
                    : run_dagger_phase(rollout_policy, cfg.gen, cache, ring,
                                       phase_seed,
                                       static_cast<uint32_t>(phase));
    }
    rec.ring_size = ring.size();

    TrainConfig tc = cfg.train;
    tc.seed = fnv1a(&phase, sizeof(phase), tc.seed ^ kFnvOffset);
    result.params = fine_tune(std::move(result.params), ring, expert, tc,
                              &rec.train);

    rec.val = validation_metrics(result.params, validation);
    rec.success_rate = probe_success_rate(result.params, probes,
                                          cfg.probe_episode_limit, cache);

    if (!cfg.checkpoint_dir.empty()) {
      std::filesystem::create_directories(cfg.checkpoint_dir);
      save_params(result.params, cfg.checkpoint_dir + "/phase_" +
                                     std::to_string(phase) + ".params");
    }
    result.phases.push_back(std::move(rec));
  }
  return result;
}

}  // namespace mapf
