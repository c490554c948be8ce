#include "callshield/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "callshield/audio/pcm.hpp"
#include "callshield/auth/attacks.hpp"
#include "callshield/errors.hpp"
#include "callshield/rng.hpp"

namespace callshield::harness {

namespace {

using audio::DistortionKind;
using watermark::ChannelCondition;

struct Job {
  std::string variant;
  std::string group;
  ChannelCondition condition;
  int trial = 0;
  std::uint64_t seed = 0;
};

std::uint64_t seed_of(std::uint64_t s, const char* label) { return derive_seed(s, {label_hash(label)}); }

Bitstream random_bits(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Bitstream b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(rng.next() & 1U);
  return b;
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1U, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

std::vector<std::string> selected(const std::vector<std::string>& requested, const std::vector<std::string>& all) {
  if (requested.empty()) return all;
  for (const auto& v : requested) {
    if (std::find(all.begin(), all.end(), v) == all.end()) throw std::invalid_argument("unknown variant " + v);
  }
  return requested;
}

std::vector<std::string> pattern_names() {
  std::vector<std::string> out;
  for (const auto& p : datalink::study_patterns()) out.push_back(p.name());
  return out;
}

std::vector<std::string> attack_names() {
  std::vector<std::string> out;
  for (auto k : {auth::AttackKind::replay, auth::AttackKind::forgery, auth::AttackKind::spoofed_id,
                 auth::AttackKind::injected_watermark}) {
    out.emplace_back(auth::to_string(k));
  }
  return out;
}

std::vector<Job> build_jobs(const ExperimentSpec& spec) {
  std::vector<std::string> variants;
  switch (spec.experiment) {
    case Experiment::sync_eval: variants = selected(spec.variants, pattern_names()); break;
    case Experiment::ablation: variants = selected(spec.variants, kAblationConfigs); break;
    case Experiment::retry_comparison: variants = selected(spec.variants, {"constant", "adaptive"}); break;
    case Experiment::attacks: variants = selected(spec.variants, attack_names()); break;
    case Experiment::protocol_stages:
    case Experiment::timing: variants = {std::string(datalink::to_string(spec.strategy))}; break;
    case Experiment::bit_accuracy: variants = {""}; break;
  }
  const auto exp_label = std::string(to_string(spec.experiment));
  std::vector<Job> jobs;
  auto add_trials = [&](const std::string& variant, const std::string& group, auto condition_for_trial) {
    for (int t = 0; t < spec.trials; ++t) {
      const auto seed = derive_seed(spec.seed, {label_hash(exp_label.c_str()), label_hash(variant.c_str()),
                                                label_hash(group.c_str()), static_cast<std::uint64_t>(t)});
      jobs.push_back({variant, group, condition_for_trial(t), t, seed});
    }
  };
  for (const auto& v : variants) {
    if (spec.experiment == Experiment::sync_eval) {
      for (double a : spec.alphas) {
        const std::string suffix = spec.alphas.size() > 1 ? "/a=" + std::to_string(a) : "";
        add_trials(v, "clean" + suffix, [&](int) { return ChannelCondition{DistortionKind::clean, 0.0, a}; });
        add_trials(v, "mix" + suffix, [&](int t) {
          const auto& mk = mix_kinds();
          return ChannelCondition{mk[static_cast<std::size_t>(t) % mk.size()], kMixCoverage, a};
        });
      }
      continue;
    }
    for (const auto& [kind, cov] : spec.grid) {
      for (double a : spec.alphas) {
        const ChannelCondition c{kind, cov, a};
        add_trials(v, watermark::describe(c), [&](int) { return c; });
      }
    }
  }
  return jobs;
}

TrialRecord base_record(const ExperimentSpec& spec, const Job& job) {
  TrialRecord r;
  r.experiment = std::string(to_string(spec.experiment));
  r.backend = std::string(watermark::to_string(spec.backend));
  r.variant = job.variant;
  r.group = job.group;
  r.kind = std::string(audio::to_string(job.condition.kind));
  r.coverage = job.condition.coverage;
  r.alpha = job.condition.alpha;
  r.trial = job.trial;
  r.seed = job.seed;
  return r;
}

void bit_accuracy_trial(const ExperimentContext& ctx, const Job& job, TrialRecord& r) {
  const auto n = static_cast<std::size_t>(ctx.spec().bits_per_trial);
  const auto sent = random_bits(n, seed_of(job.seed, "payload"));
  watermark::TransmitOptions opt;
  opt.condition = job.condition;
  opt.search_window = 1;
  opt.delay.max_delay_ms = 0.0;
  opt.seed = seed_of(job.seed, "channel");
  const auto rx = ctx.channel().transmit(sent, opt);
  const auto got = watermark::hard_bits(rx.bits);
  for (std::size_t i = 0; i < n; ++i) r.hits += got[i] == sent[i] ? 1 : 0;
  r.total = static_cast<std::int64_t>(n);
  for (std::size_t b = 0; b + 16 <= n; b += 16) {
    bool ok = true;
    for (std::size_t i = b; i < b + 16; ++i) ok = ok && got[i] == sent[i];
    r.blocks_ok += ok ? 1 : 0;
    ++r.blocks;
  }
  r.success = r.blocks_ok == r.blocks;
}

void sync_trial(const ExperimentContext& ctx, const Job& job, TrialRecord& r) {
  const auto pattern = datalink::SyncPattern::parse(job.variant);
  auto on_air = pattern.bits();
  on_air.append(random_bits(31, seed_of(job.seed, "payload")));
  watermark::TransmitOptions opt;
  opt.condition = job.condition;
  opt.search_window = 8;
  opt.seed = seed_of(job.seed, "channel");
  const auto rx = ctx.channel().transmit(on_air, opt);
  const auto match = datalink::find_sync(rx.bits, pattern, opt.search_window, datalink::scaled_threshold(pattern));
  r.true_offset = static_cast<long long>(rx.true_offset);
  if (match) r.sync_offset = static_cast<long long>(match->offset);
  r.success = match && match->offset == rx.true_offset;
}

void ablation_trial(const ExperimentContext& ctx, const Job& job, TrialRecord& r) {
  datalink::LinkConfig cfg;
  cfg.guard_seconds = 0.0;
  if (job.variant == "no_sync") cfg.use_sync = false;
  else if (job.variant == "sync_only") cfg.use_ecc = false;
  else if (job.variant != "full") throw std::invalid_argument("unknown ablation config " + job.variant);
  datalink::ArqPolicy once;
  once.max_attempts = 1;
  const datalink::DataLink link(ctx.channel(), ctx.ablation_code(), cfg, once);
  const auto msg = random_bits(static_cast<std::size_t>(ctx.spec().message_bits), seed_of(job.seed, "payload"));
  const auto log = link.transmit_once(msg, job.condition, seed_of(job.seed, "link"), {});
  r.success = log.correct;
  r.attempts = 1;
  r.corrected_errors = log.corrected_errors;
  if (log.offset) r.sync_offset = static_cast<long long>(*log.offset);
  r.true_offset = static_cast<long long>(log.true_offset);
  r.elapsed_seconds = log.audio_seconds;
  r.delivered = log.accepted;
}

void protocol_trial(const ExperimentContext& ctx, const Job& job, TrialRecord& r) {
  const auto strategy = datalink::parse_strategy(job.variant);
  if (!strategy) throw std::invalid_argument("unknown strategy " + job.variant);
  const auto& env = ctx.protocol(*strategy);
  auth::SeededNonceSource keygen(seed_of(job.seed, "keys"));
  auth::KeyStore store;
  const auto key = auth::random_key(keygen);
  store.add("caller", key);
  auth::SeededNonceSource nonces(seed_of(job.seed, "nonces"));
  auth::Receiver receiver(store, nonces);
  auth::HonestCaller caller("caller", key);
  const auto out = auth::run_authentication(env, caller, receiver, job.condition, seed_of(job.seed, "session"));
  r.success = out.success();
  for (auto s : auth::kStages) {
    const auto& st = out.stage(s);
    r.stages[static_cast<std::size_t>(s)] = st.reached ? (st.succeeded ? 1 : 0) : -1;
  }
  if (out.failed_stage) r.failed_stage = std::string(auth::to_string(*out.failed_stage));
  r.attempts = out.attempts_used;
  r.restarts = out.restarts;
  r.elapsed_seconds = out.elapsed_seconds;
  r.delivered = out.datalink_delivered_response;
  r.mac_rejections = out.mac_rejections;
}

void attack_trial(const ExperimentContext& ctx, const Job& job, TrialRecord& r) {
  const auto kind = auth::parse_attack(job.variant);
  if (!kind) throw std::invalid_argument("unknown attack " + job.variant);
  const auto rep = auth::simulate_attack(*kind, 1, ctx.protocol(ctx.spec().strategy), job.condition, job.seed);
  r.success = rep.acceptances > 0;
  r.delivered = rep.datalink_deliveries > 0;
  r.mac_rejections = rep.mac_rejections;
}

TrialRecord run_trial(const ExperimentContext& ctx, const Job& job) {
  auto r = base_record(ctx.spec(), job);
  switch (ctx.spec().experiment) {
    case Experiment::bit_accuracy: bit_accuracy_trial(ctx, job, r); break;
    case Experiment::sync_eval: sync_trial(ctx, job, r); break;
    case Experiment::ablation: ablation_trial(ctx, job, r); break;
    case Experiment::protocol_stages:
    case Experiment::retry_comparison:
    case Experiment::timing: protocol_trial(ctx, job, r); break;
    case Experiment::attacks: attack_trial(ctx, job, r); break;
  }
  return r;
}

std::unique_ptr<watermark::FrameChannel> build_channel(const ExperimentSpec& spec) {
  const auto cal = watermark::ChannelCalibration::shipped().with_burst_model(spec.burst_model);
  watermark::SignalChannelConfig sig;
  if (!spec.carrier_dir.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(spec.carrier_dir)) {
      if (e.path().extension() == ".wav") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::invalid_argument("no .wav carriers in " + spec.carrier_dir);
    for (const auto& f : files) sig.carriers.push_back(audio::load_wav(f));
  }
  return watermark::make_channel(spec.backend, cal, std::move(sig));
}

auth::ProtocolConfig protocol_config(const ExperimentSpec& spec, datalink::AlphaStrategy strategy) {
  auth::ProtocolConfig cfg;
  cfg.arq.max_attempts = spec.max_attempts;
  cfg.arq.strategy = strategy;
  cfg.link.guard_seconds = spec.guard_seconds;
  cfg.alpha0 = spec.alpha0;
  return cfg;
}

}  // namespace

const std::vector<audio::DistortionKind>& mix_kinds() {
  static const std::vector<DistortionKind> kinds = {DistortionKind::white_noise, DistortionKind::pink_noise,
                                                    DistortionKind::echo,        DistortionKind::lowpass,
                                                    DistortionKind::highpass,    DistortionKind::bandpass,
                                                    DistortionKind::duck};
  return kinds;
}

ExperimentContext::ExperimentContext(ExperimentSpec spec)
    : spec_(std::move(spec)), ablation_code_(spec_.ablation_m, spec_.ablation_t) {
  spec_.validate();
  channel_ = build_channel(spec_);
  constant_env_ = std::make_unique<auth::ProtocolEnvironment>(
      *channel_, protocol_config(spec_, datalink::AlphaStrategy::constant_alpha));
  adaptive_env_ = std::make_unique<auth::ProtocolEnvironment>(
      *channel_, protocol_config(spec_, datalink::AlphaStrategy::adaptive_alpha));
}

const auth::ProtocolEnvironment& ExperimentContext::protocol(datalink::AlphaStrategy strategy) const {
  return strategy == datalink::AlphaStrategy::constant_alpha ? *constant_env_ : *adaptive_env_;
}

std::vector<TrialRecord> run_experiment(const ExperimentContext& ctx) {
  const auto jobs = build_jobs(ctx.spec());
  std::vector<TrialRecord> records(jobs.size());
  parallel_for(jobs.size(), ctx.spec().threads, [&](std::size_t i) { records[i] = run_trial(ctx, jobs[i]); });
  return records;
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec) { return run_experiment(ExperimentContext(spec)); }

TrialRecord replay_trial(const ExperimentContext& ctx, const TrialRecord& record) {
  const auto kind = audio::parse_distortion_kind(record.kind);
  if (!kind) throw FormatError("unknown distortion kind " + record.kind);
  const Job job{record.variant, record.group, {*kind, record.coverage, record.alpha}, record.trial, record.seed};
  return run_trial(ctx, job);
}

// ---------------------------------------------------------------------------
// Summaries

namespace {


ChannelCondition condition_of(const TrialRecord& r) {
  const auto k = audio::parse_distortion_kind(r.kind);
  return {k.value_or(DistortionKind::clean), r.coverage, r.alpha};
}

}  // namespace

std::vector<BitAccuracyRow> summarize_bit_accuracy(const std::vector<TrialRecord>& records) {
  std::vector<BitAccuracyRow> rows;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace(r.group, rows.size());
    if (fresh) rows.push_back({r.group, condition_of(r), {}, {}});
    auto& row = rows[it->second];
    row.bits.add(r.hits, r.total);
    row.blocks16.add(r.blocks_ok, r.blocks);
  }
  return rows;
}

std::vector<RateRow> summarize_rates(const std::vector<TrialRecord>& records) {
  std::vector<RateRow> rows;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace({r.variant, r.group}, rows.size());
    if (fresh) rows.push_back({r.variant, r.group, {}});
    rows[it->second].rate.add(r.success);
  }
  return rows;
}

std::vector<StageRow> summarize_stages(const std::vector<TrialRecord>& records) {
  std::vector<StageRow> rows;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace(r.group, rows.size());
    if (fresh) rows.push_back({r.group, condition_of(r), {}, {}});
    auto& row = rows[it->second];
    for (std::size_t s = 0; s < 4; ++s) {
      if (r.stages[s] >= 0) row.stages[s].add(r.stages[s] == 1);
    }
    row.overall.add(r.success);
  }
  return rows;
}

double FailureAttribution::share(const std::string& stage) const {
  const auto it = by_stage.find(stage);
  return failures > 0 && it != by_stage.end() ? static_cast<double>(it->second) / static_cast<double>(failures) : 0.0;
}

FailureAttribution attribute_failures(const std::vector<TrialRecord>& records) {
  FailureAttribution fa;
  for (const auto& r : records) {
    if (r.success) continue;
    ++fa.failures;
    ++fa.by_stage[r.failed_stage.empty() ? "unknown" : r.failed_stage];
  }
  return fa;
}

std::vector<RetryRow> summarize_retries(const std::vector<TrialRecord>& records, int max_attempts) {
  std::vector<RetryRow> rows;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace({r.variant, r.group}, rows.size());
    if (fresh) rows.push_back({r.variant, r.group, condition_of(r), std::vector<RateEstimate>(static_cast<std::size_t>(max_attempts))});
    auto& row = rows[it->second];
    for (int n = 1; n <= max_attempts; ++n) row.by_attempt[static_cast<std::size_t>(n - 1)].add(r.success && r.attempts <= n);
  }
  return rows;
}

std::vector<TimingRow> summarize_timing(const std::vector<TrialRecord>& records) {
  std::map<int, TimingRow> by;
  for (const auto& r : records) {
    if (!r.success) continue;
    auto& row = by[r.attempts];
    if (row.count == 0) {
      row.attempts = r.attempts;
      row.min = row.max = r.elapsed_seconds;
    }
    row.min = std::min(row.min, r.elapsed_seconds);
    row.max = std::max(row.max, r.elapsed_seconds);
    row.mean += r.elapsed_seconds;
    ++row.count;
  }
  std::vector<TimingRow> rows;
  for (auto& [a, row] : by) {
    row.mean /= static_cast<double>(row.count);
    rows.push_back(row);
  }
  return rows;
}

std::vector<AttackRow> summarize_attacks(const std::vector<TrialRecord>& records) {
  std::vector<AttackRow> rows;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    auto [it, fresh] = index.try_emplace(r.variant, rows.size());
    if (fresh) rows.push_back({r.variant, 0, 0, 0, 0});
    auto& row = rows[it->second];
    ++row.trials;
    row.acceptances += r.success ? 1 : 0;
    row.delivered += r.delivered ? 1 : 0;
    row.mac_rejections += r.mac_rejections;
  }
  return rows;
}

namespace {

std::string fmt_rate(const RateEstimate& e) {
  std::ostringstream os;
  const auto ci = e.ci();
  os << std::fixed << std::setprecision(3) << e.value() << " [" << ci.lo << ", " << ci.hi << "]";
  return os.str();
}

}  // namespace

void print_summary(Experiment e, const std::vector<TrialRecord>& records, int max_attempts, std::ostream& out) {
  out << std::fixed << std::setprecision(3);
  switch (e) {
    case Experiment::bit_accuracy:
      out << "condition  bit_accuracy [95% CI]  16-bit-block success\n";
      for (const auto& r : summarize_bit_accuracy(records)) {
        out << r.group << "  " << fmt_rate(r.bits) << "  " << r.blocks16.value() << '\n';
      }
      break;
    case Experiment::sync_eval:
    case Experiment::ablation:
      out << "variant  group  success [95% CI]\n";
      for (const auto& r : summarize_rates(records)) out << r.variant << "  " << r.group << "  " << fmt_rate(r.rate) << '\n';
      break;
    case Experiment::protocol_stages: {
      out << "condition  beacon  challenge  response  finish  overall [95% CI]\n";
      for (const auto& r : summarize_stages(records)) {
        out << r.group;
        for (const auto& s : r.stages) out << "  " << s.value();
        out << "  " << fmt_rate(r.overall) << '\n';
      }
      const auto fa = attribute_failures(records);
      out << "failure attribution over " << fa.failures << " failed sessions:";
      for (const auto& [stage, n] : fa.by_stage) out << "  " << stage << " " << fa.share(stage);
      out << '\n';
      break;
    }
    case Experiment::retry_comparison:
      out << "strategy  condition  success by attempt 1.." << max_attempts << '\n';
      for (const auto& r : summarize_retries(records, max_attempts)) {
        out << r.variant << "  " << r.group;
        for (const auto& a : r.by_attempt) out << "  " << a.value();
        out << '\n';
      }
      break;
    case Experiment::timing:
      out << "attempts  sessions  mean_s  min_s  max_s\n";
      for (const auto& r : summarize_timing(records)) {
        out << r.attempts << "  " << r.count << "  " << std::setprecision(2) << r.mean << "  " << r.min << "  " << r.max
            << std::setprecision(3) << '\n';
      }
      break;
    case Experiment::attacks:
      out << "attack  trials  acceptances  datalink_delivered  mac_rejections\n";
      for (const auto& r : summarize_attacks(records)) {
        out << r.variant << "  " << r.trials << "  " << r.acceptances << "  " << r.delivered << "  " << r.mac_rejections
            << '\n';
      }
      break;
  }
}

// ---------------------------------------------------------------------------
// gnuplot output

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << std::fixed << std::setprecision(4);
  return out;
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& suffix) {
  return prefix.parent_path() / (prefix.filename().string() + suffix);
}

}  // namespace

std::vector<std::filesystem::path> write_plot_data(const std::vector<TrialRecord>& records,
                                                   const std::filesystem::path& out_prefix) {
  if (records.empty()) throw std::invalid_argument("no records to plot");
  const auto e = parse_experiment(records.front().experiment);
  if (!e) throw FormatError("unknown experiment " + records.front().experiment);
  const auto dat = with_suffix(out_prefix, ".dat");
  const auto gp = with_suffix(out_prefix, ".gp");
  auto d = open_out(dat);
  auto g = open_out(gp);
  g << "set terminal pngcairo size 900,600\nset output '" << with_suffix(out_prefix, ".png").filename().string() << "'\n";
  g << "set grid\nset key outside right\n";
  const auto datname = dat.filename().string();

  // Blocks per distortion kind, x = coverage.
  auto by_kind_blocks = [&](auto rows, auto write_row, const std::string& header) {
    std::map<std::string, std::vector<typename decltype(rows)::value_type>> kinds;
    std::vector<std::string> order;
    for (const auto& r : rows) {
      const std::string k(audio::to_string(r.condition.kind));
      if (!kinds.contains(k)) order.push_back(k);
      kinds[k].push_back(r);
    }
    for (const auto& k : order) {
      d << "# " << k << "\n# " << header << '\n';
      for (const auto& r : kinds[k]) write_row(r);
      d << "\n\n";
    }
    return order;
  };

  switch (*e) {
    case Experiment::protocol_stages: {
      const auto order = by_kind_blocks(
          summarize_stages(records),
          [&](const StageRow& r) {
            d << r.condition.coverage * 100.0;
            for (const auto& s : r.stages) d << ' ' << s.value();
            d << ' ' << r.overall.value() << ' ' << r.overall.ci().lo << ' ' << r.overall.ci().hi << '\n';
          },
          "coverage_pct beacon challenge response finish overall lo hi");
      g << "set xlabel 'distortion coverage (%)'\nset ylabel 'overall success'\nset yrange [0:1]\nplot ";
      for (std::size_t i = 0; i < order.size(); ++i) {
        g << (i ? ", " : "") << "'" << datname << "' index " << i << " using 1:6:7:8 with yerrorlines title '" << order[i] << "'";
      }
      g << '\n';
      break;
    }
    case Experiment::retry_comparison:
    case Experiment::timing: {
      int max_attempts = 1;
      for (const auto& r : records) max_attempts = std::max(max_attempts, r.attempts);
      const auto rows = summarize_retries(records, max_attempts);
      for (const auto& r : rows) {
        d << "# " << r.variant << ' ' << r.group << "\n# attempt success lo hi\n";
        for (std::size_t a = 0; a < r.by_attempt.size(); ++a) {
          d << a + 1 << ' ' << r.by_attempt[a].value() << ' ' << r.by_attempt[a].ci().lo << ' ' << r.by_attempt[a].ci().hi << '\n';
        }
        d << "\n\n";
      }
      g << "set xlabel 'attempt'\nset ylabel 'success within n attempts'\nset yrange [0:1]\nset xtics 1\nplot ";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        g << (i ? ", " : "") << "'" << datname << "' index " << i << " using 1:2:3:4 with yerrorlines title '"
          << rows[i].variant << ' ' << audio::to_string(rows[i].condition.kind) << "'";
      }
      g << '\n';
      break;
    }
    case Experiment::bit_accuracy: {
      const auto order = by_kind_blocks(
          summarize_bit_accuracy(records),
          [&](const BitAccuracyRow& r) {
            d << r.condition.coverage * 100.0 << ' ' << r.condition.alpha << ' ' << r.bits.value() << ' '
              << r.blocks16.value() << '\n';
          },
          "coverage_pct alpha bit_accuracy block16");
      g << "set xlabel 'distortion coverage (%)'\nset ylabel 'bit accuracy'\nplot ";
      for (std::size_t i = 0; i < order.size(); ++i) {
        g << (i ? ", " : "") << "'" << datname << "' index " << i << " using 1:3 with points title '" << order[i] << "'";
      }
      g << '\n';
      break;
    }
    case Experiment::sync_eval:
    case Experiment::ablation:
    case Experiment::attacks: {
      std::vector<std::string> groups;
      for (const auto& r : records) {
        if (std::find(groups.begin(), groups.end(), r.group) == groups.end()) groups.push_back(r.group);
      }
      const auto rows = summarize_rates(records);
      std::vector<std::string> variants;
      for (const auto& r : rows) {
        if (std::find(variants.begin(), variants.end(), r.variant) == variants.end()) variants.push_back(r.variant);
      }
      d << "# variant";
      for (const auto& gname : groups) d << ' ' << gname;
      d << '\n';
      for (const auto& v : variants) {
        d << '"' << v << '"';
        for (const auto& gname : groups) {
          double val = 0.0;
          for (const auto& r : rows) {
            if (r.variant == v && r.group == gname) val = r.rate.value();
          }
          d << ' ' << val;
        }
        d << '\n';
      }
      g << "set style data histograms\nset style fill solid 0.8\nset yrange [0:1]\nset xtics rotate by -45\nplot ";
      for (std::size_t i = 0; i < groups.size(); ++i) {
        g << (i ? ", " : "") << "'" << datname << "' using " << i + 2 << (i ? "" : ":xtic(1)") << " title '" << groups[i] << "'";
      }
      g << '\n';
      break;
    }
  }
  return {dat, gp};
}

}  // namespace callshield::harness
