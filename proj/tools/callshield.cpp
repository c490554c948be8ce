// callshield: command-line front end for the codes, channel, link, protocol and experiments.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>

#include "callshield/audio/distortion.hpp"
#include "callshield/audio/pcm.hpp"
#include "callshield/audio/synth.hpp"
#include "callshield/auth/attacks.hpp"
#include "callshield/auth/protocol.hpp"
#include "callshield/errors.hpp"
#include "callshield/harness/experiment.hpp"
#include "callshield/harness/runner.hpp"
#include "callshield/rng.hpp"

using namespace callshield;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string backend = "statistical";
  std::string out;
  std::string config;
  int trials = 0;
  int threads = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--backend", c.backend, "statistical | spread_spectrum")->check(CLI::IsMember({"statistical", "bsc", "spread_spectrum", "signal", "ss"}));
  app->add_option("--out", c.out, "output path");
  app->add_option("--config", c.config, "JSON file overriding experiment settings")->check(CLI::ExistingFile);
}

watermark::Backend backend_of(const Common& c) { return *watermark::parse_backend(c.backend); }

struct ConditionArgs {
  std::string kind = "clean";
  double coverage = 0.0;
  double alpha = 0.6;
};

void add_condition(CLI::App* app, ConditionArgs& a) {
  app->add_option("--kind", a.kind, "distortion kind");
  app->add_option("--coverage", a.coverage, "fraction of the audio distorted")->check(CLI::Range(0.0, 1.0));
  app->add_option("--alpha", a.alpha, "watermark strength")->check(CLI::Range(0.0, 1.0));
}

watermark::ChannelCondition condition_of(const ConditionArgs& a) {
  const auto k = audio::parse_distortion_kind(a.kind);
  if (!k) throw CLI::ValidationError("--kind", "unknown distortion kind " + a.kind);
  return {*k, a.coverage, a.alpha};
}

Bitstream parse_bits(const std::string& s) {
  if (s.rfind("0x", 0) == 0) return Bitstream::from_hex(s.substr(2));
  return Bitstream::from_string(s);
}

harness::ExperimentSpec experiment_spec(harness::Experiment e, const Common& c) {
  auto spec = harness::default_spec(e, backend_of(c));
  if (!c.config.empty()) spec = harness::apply_overrides_file(spec, c.config);
  spec.experiment = e;
  spec.seed = c.seed;
  spec.backend = backend_of(c);
  if (c.trials > 0) spec.trials = c.trials;
  if (c.threads > 0) spec.threads = c.threads;
  if (!c.out.empty()) spec.output = c.out;
  return spec;
}

int run_experiment_cmd(harness::Experiment e, const Common& c) {
  const auto spec = experiment_spec(e, c);
  const harness::ExperimentContext ctx(spec);
  const auto records = harness::run_experiment(ctx);
  harness::print_summary(e, records, spec.max_attempts, std::cout);
  if (!spec.output.empty()) {
    harness::write_records(records, spec.output);
    std::cerr << "wrote " << records.size() << " records to " << spec.output << '\n';
  }
  return 0;
}

std::unique_ptr<watermark::FrameChannel> make_channel(const Common& c) {
  return watermark::make_channel(backend_of(c), watermark::ChannelCalibration::shipped());
}

void print_log(const datalink::AttemptLog& l) {
  std::cout << "attempt " << l.attempt << "  alpha " << l.alpha << "  sync " << (l.sync_found ? "found" : "missing");
  if (l.offset) std::cout << " @" << *l.offset;
  std::cout << " (true " << l.true_offset << ", delay " << l.delay_samples << " samples)  "
            << (l.accepted ? "accepted" : "rejected") << (l.accepted ? (l.correct ? " correct" : " WRONG") : "")
            << "  corrected " << l.corrected_errors << "  audio " << l.audio_seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CallShield caller authentication over an audio watermark channel"};
  app.require_subcommand(1);
  Common common;

  // bch
  auto* bch = app.add_subcommand("bch", "encode or decode with a binary BCH code");
  int bch_m = 5, bch_t = 5;
  std::string bch_op, bch_bits;
  bch->add_option("op", bch_op, "info | encode | decode")->required()->check(CLI::IsMember({"info", "encode", "decode"}));
  bch->add_option("bits", bch_bits, "message or received word (0/1 string or 0x-hex)");
  bch->add_option("--m", bch_m, "field degree")->check(CLI::Range(2, 16));
  bch->add_option("--t", bch_t, "designed error-correcting capability")->check(CLI::PositiveNumber);

  // distort
  auto* dist = app.add_subcommand("distort", "apply a channel distortion to a WAV file");
  std::string dist_in;
  double synth_seconds = 0.0, max_delay_ms = 0.0;
  ConditionArgs dist_cond;
  dist->add_option("--in", dist_in, "input WAV (8 kHz mono 16-bit)")->check(CLI::ExistingFile);
  dist->add_option("--synth", synth_seconds, "use this many seconds of synthetic speech instead of --in");
  dist->add_option("--delay-ms", max_delay_ms, "prepend a random 0..max delay");
  add_condition(dist, dist_cond);
  add_common(dist, common);

  // datalink
  auto* dl = app.add_subcommand("datalink", "send or receive one data-link message");
  dl->require_subcommand(1);
  auto* dl_send = dl->add_subcommand("send", "transmit a message with retries and report each attempt");
  auto* dl_recv = dl->add_subcommand("recv", "run the receiver on a decoded bit string or a watermarked WAV");
  std::string dl_msg, dl_bits, dl_wav;
  int dl_m = 9, dl_t = 55, dl_attempts = 3, dl_payload = 0;
  std::string dl_strategy = "adaptive";
  ConditionArgs dl_cond;
  for (auto* sc : {dl_send, dl_recv}) {
    sc->add_option("--m", dl_m, "BCH field degree");
    sc->add_option("--t", dl_t, "BCH error-correcting capability");
  }
  dl_send->add_option("message", dl_msg, "message bits (0/1 string or 0x-hex)")->required();
  dl_send->add_option("--attempts", dl_attempts)->check(CLI::Range(1, 10));
  dl_send->add_option("--strategy", dl_strategy)->check(CLI::IsMember({"constant", "adaptive"}));
  dl_send->add_option("--wav-out", dl_wav, "also write the first attempt's watermarked carrier (signal backend)");
  add_condition(dl_send, dl_cond);
  add_common(dl_send, common);
  dl_recv->add_option("--bits", dl_bits, "decoded frame bits starting at the nominal frame");
  dl_recv->add_option("--wav", dl_wav, "watermarked audio to decode with the spread-spectrum detector")->check(CLI::ExistingFile);
  dl_recv->add_option("--payload-bits", dl_payload, "message length (default k)");

  // experiments
  auto* sync_eval = app.add_subcommand("sync-eval", "sync preamble detection accuracy per pattern");
  auto* ablation = app.add_subcommand("ablation", "frame success without sync, without ECC, and full");
  auto* timing = app.add_subcommand("timing", "authentication time by number of attempts");
  auto* sweep = app.add_subcommand("sweep", "run any experiment over its distortion and alpha grid");
  std::string sweep_exp = "protocol_stages";
  sweep->add_option("--experiment", sweep_exp)->check(CLI::IsMember({"bit_accuracy", "sync_eval", "ablation", "protocol_stages",
                                                                     "retry_comparison", "timing", "attacks"}));
  for (auto* sc : {sync_eval, ablation, timing, sweep}) {
    add_common(sc, common);
    sc->add_option("--trials", common.trials, "trials per cell");
    sc->add_option("--threads", common.threads, "worker threads (0: all cores)");
  }

  // auth
  auto* au = app.add_subcommand("auth", "run or attack the authentication protocol");
  au->require_subcommand(1);
  auto* au_run = au->add_subcommand("run", "one authentication session with a transcript");
  auto* au_keygen = au->add_subcommand("keygen", "add a random key for a contact to a key store");
  auto* au_attack = au->add_subcommand("attack", "simulate an attack (same as the top-level attack command)");
  auto* attack = app.add_subcommand("attack", "simulate replay, forgery, spoofed caller ID or injected frames");
  ConditionArgs au_cond;
  double au_guard = 0.5;
  int au_attempts = 3;
  std::string au_strategy = "adaptive", au_store, au_contact = "alice", attack_kind = "forgery";
  bool au_wrong_key = false;
  au_run->add_option("--guard", au_guard, "guard seconds before each stage");
  au_run->add_option("--attempts", au_attempts)->check(CLI::Range(1, 10));
  au_run->add_option("--strategy", au_strategy)->check(CLI::IsMember({"constant", "adaptive"}));
  au_run->add_option("--keystore", au_store, "key store (JSON, mode 0600); default: fresh random key");
  au_run->add_option("--contact", au_contact);
  au_run->add_flag("--wrong-key", au_wrong_key, "caller uses a random key instead of the stored one");
  add_condition(au_run, au_cond);
  add_common(au_run, common);
  au_keygen->add_option("--keystore", au_store)->required();
  au_keygen->add_option("--contact", au_contact)->required();
  for (auto* sc : {au_attack, attack}) {
    sc->add_option("--kind", attack_kind)->check(CLI::IsMember({"replay", "forgery", "spoofed_id", "injected_watermark", "all"}));
    sc->add_option("--trials", common.trials);
    sc->add_option("--threads", common.threads);
    add_common(sc, common);
  }

  // plot
  auto* plot = app.add_subcommand("plot", "gnuplot data and script from a records file");
  std::string plot_in, plot_out;
  plot->add_option("records", plot_in, "records file (.jsonl or .csv)")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "output prefix (default: records path without extension)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bch) {
      const gf_bch::BchCode code(bch_m, bch_t);
      if (bch_op == "info") {
        std::cout << "BCH(" << code.n() << ", " << code.k() << ", " << code.t() << ")  g(x) degree " << code.n() - code.k()
                  << "\ngenerator (high to low): ";
        for (auto it = code.generator().rbegin(); it != code.generator().rend(); ++it) std::cout << int(*it);
        std::cout << '\n';
      } else if (bch_op == "encode") {
        std::cout << code.encode(parse_bits(bch_bits)).to_string() << '\n';
      } else {
        const auto r = code.decode(parse_bits(bch_bits));
        if (!r) {
          std::cout << "decoding failure\n";
          return 2;
        }
        std::cout << r->message.to_string() << "\ncorrected " << r->corrected_errors << '\n';
      }
    } else if (*dist) {
      if (common.out.empty()) throw CLI::ValidationError("--out", "output WAV required");
      audio::PcmSignal in;
      if (!dist_in.empty()) in = audio::load_wav(dist_in);
      else if (synth_seconds > 0.0) in = audio::synth_speech_like(synth_seconds, derive_seed(common.seed, {label_hash("carrier")}));
      else throw CLI::ValidationError("--in", "give --in or --synth");
      auto cond = condition_of(dist_cond);
      if (max_delay_ms > 0.0) {
        const auto delayed = audio::apply_delay(in, {max_delay_ms}, derive_seed(common.seed, {label_hash("delay")}));
        std::cout << "delay " << delayed.delay_samples << " samples\n";
        in = delayed.signal;
      }
      audio::DistortionSpec ds;
      ds.kind = cond.kind;
      ds.coverage = cond.coverage;
      ds.rng_seed = derive_seed(common.seed, {label_hash("distortion")});
      const auto out = audio::distort(in, ds);
      for (const auto& [b, e] : out.realized.segments) std::cout << "segment [" << b << ", " << e << ")\n";
      std::cout << "clipped " << out.realized.clipped_samples << " samples\n";
      audio::save_wav(out.signal, common.out);
    } else if (*dl_send) {
      const gf_bch::BchCode code(dl_m, dl_t);
      const auto channel = make_channel(common);
      datalink::ArqPolicy policy;
      policy.max_attempts = dl_attempts;
      policy.strategy = *datalink::parse_strategy(dl_strategy);
      const datalink::DataLink link(*channel, code, {}, policy);
      const auto msg = parse_bits(dl_msg);
      const auto cond = condition_of(dl_cond);
      const auto d = link.send_message(msg, cond, common.seed);
      for (const auto& l : d.log) print_log(l);
      std::cout << (d.delivered ? (d.correct(msg) ? "delivered" : "delivered WRONG message") : "not delivered") << " after "
                << d.attempts << " attempt(s), " << d.audio_seconds << " s\n";
      if (!dl_wav.empty()) {
        const watermark::SpreadSpectrumCodec codec;
        const auto on_air = link.on_air(msg);
        const auto carrier = audio::synth_speech_like(static_cast<double>(on_air.size()) * datalink::kSecondsPerBit,
                                                      derive_seed(common.seed, {label_hash("carrier")}));
        audio::save_wav(codec.embed_stream(on_air, carrier, cond.alpha), dl_wav);
        std::cout << "wrote watermarked carrier to " << dl_wav << '\n';
      }
    } else if (*dl_recv) {
      const gf_bch::BchCode code(dl_m, dl_t);
      const datalink::LinkConfig cfg;
      Bitstream received;
      if (!dl_wav.empty()) {
        const watermark::SpreadSpectrumCodec codec;
        const auto sig = audio::load_wav(dl_wav);
        const auto phase = codec.coarse_align(sig, 40);
        const auto frames = (sig.size() - phase) / watermark::kFrameSamples;
        received = watermark::hard_bits(codec.decode_stream(sig, 0, frames, phase));
      } else {
        received = parse_bits(dl_bits);
      }
      const auto payload = dl_payload > 0 ? static_cast<std::size_t>(dl_payload) : static_cast<std::size_t>(code.k());
      const auto r = datalink::receive_message(received, code, cfg, payload);
      if (!r.message) {
        std::cout << (r.sync_found ? "sync found, decoding failed" : "no sync") << '\n';
        return 2;
      }
      std::cout << r.message->to_string() << "\noffset " << *r.offset << "  corrected " << r.corrected_errors << '\n';
    } else if (*sync_eval) {
      return run_experiment_cmd(harness::Experiment::sync_eval, common);
    } else if (*ablation) {
      return run_experiment_cmd(harness::Experiment::ablation, common);
    } else if (*timing) {
      return run_experiment_cmd(harness::Experiment::timing, common);
    } else if (*sweep) {
      return run_experiment_cmd(*harness::parse_experiment(sweep_exp), common);
    } else if (*au_keygen) {
      auth::KeyStore store;
      if (std::filesystem::exists(au_store)) store = auth::KeyStore::load(au_store);
      auth::OsNonceSource os;
      store.add(au_contact, auth::random_key(os));
      store.save(au_store);
      std::cout << "added key for " << au_contact << " to " << au_store << '\n';
    } else if (*au_run) {
      const auto channel = make_channel(common);
      auth::ProtocolConfig cfg;
      cfg.link.guard_seconds = au_guard;
      cfg.arq.max_attempts = au_attempts;
      cfg.arq.strategy = *datalink::parse_strategy(au_strategy);
      const auto cond = condition_of(au_cond);
      cfg.alpha0 = cond.alpha;
      const auth::ProtocolEnvironment env(*channel, cfg);
      auth::SeededNonceSource keygen(derive_seed(common.seed, {label_hash("keys")}));
      auth::KeyStore store;
      if (!au_store.empty()) store = auth::KeyStore::load(au_store);
      else store.add(au_contact, auth::random_key(keygen));
      const auto key = store.find(au_contact);
      if (!key) throw KeyStoreError("no key for contact " + au_contact);
      auth::SeededNonceSource nonces(derive_seed(common.seed, {label_hash("nonces")}));
      auth::Receiver receiver(store, nonces);
      auth::HonestCaller caller(au_contact, au_wrong_key ? auth::random_key(keygen) : *key);
      const auto out = auth::run_authentication(env, caller, receiver, cond, common.seed);
      // Each side's own transmissions, in time order.
      std::vector<auth::TranscriptEntry> sent;
      for (const auto* st : {&out.caller, &out.receiver_state}) {
        for (const auto& e : st->transcript) {
          if (e.sender == st->role) sent.push_back(e);
        }
      }
      std::stable_sort(sent.begin(), sent.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
      for (const auto& e : sent) {
        std::cout << std::fixed << std::setprecision(2) << std::setw(7) << e.time << " s  " << std::setw(8) << auth::to_string(e.sender)
                  << " -> " << std::setw(9) << auth::to_string(e.stage) << "  attempt " << e.attempt << "  alpha " << e.alpha << "  "
                  << (e.accepted ? "received" : "lost") << '\n';
      }
      std::cout << "receiver: " << auth::to_string(out.receiver) << "  caller: " << (out.caller_authenticated ? "confirmed" : "unconfirmed")
                << "  restarts " << out.restarts << "  elapsed " << out.elapsed_seconds << " s\n";
      if (out.failed_stage) std::cout << "failed at " << auth::to_string(*out.failed_stage) << '\n';
      return out.success() ? 0 : 2;
    } else if (*au_attack || *attack) {
      auto spec_common = common;
      auto spec = experiment_spec(harness::Experiment::attacks, spec_common);
      if (attack_kind != "all") spec.variants = {attack_kind};
      const harness::ExperimentContext ctx(spec);
      const auto records = harness::run_experiment(ctx);
      harness::print_summary(harness::Experiment::attacks, records, spec.max_attempts, std::cout);
      if (!spec.output.empty()) harness::write_records(records, spec.output);
    } else if (*plot) {
      const auto records = harness::read_records(plot_in);
      std::filesystem::path prefix = plot_out.empty() ? std::filesystem::path(plot_in).replace_extension() : std::filesystem::path(plot_out);
      for (const auto& p : harness::write_plot_data(records, prefix)) std::cout << "wrote " << p.string() << '\n';
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
