#include "doctest.h"

#include <cmath>

#include "callshield/audio/synth.hpp"
#include "callshield/errors.hpp"
#include "callshield/rng.hpp"
#include "callshield/watermark/bsc.hpp"
#include "callshield/watermark/frame_channel.hpp"

using namespace callshield;
using namespace callshield::watermark;
using audio::DistortionKind;

namespace {

Bitstream random_bits(Rng& rng, std::size_t n) {
  Bitstream b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>(rng.next() & 1U);
  return b;
}

const ChannelCalibration& cal() { return ChannelCalibration::shipped(); }

}  // namespace

TEST_CASE("calibration table lookups") {
  CHECK(cal().cells().size() == 29);
  CHECK(cal().crossover({DistortionKind::clean, 0.0, 0.6}) == doctest::Approx(0.080));
  CHECK(cal().crossover({DistortionKind::white_noise, 0.8, 1.0}) == doctest::Approx(0.111));
  CHECK(cal().bit_accuracy({DistortionKind::bandpass, 0.2, 0.7}) == doctest::Approx((0.898 + 0.944) / 2));
  CHECK(cal().bit_accuracy({DistortionKind::clean, 0.2, 0.9}) == doctest::Approx((0.962 + 0.981) / 2));
  CHECK(cal().bit_accuracy({DistortionKind::echo, 0.0, 1.0}) == doctest::Approx(0.981));
  CHECK_THROWS_AS(cal().crossover({DistortionKind::echo, 0.3, 0.6}), CalibrationMissError);
  CHECK_THROWS_AS(cal().crossover({DistortionKind::echo, 0.2, 0.5}), CalibrationMissError);
  CHECK_THROWS_AS(cal().crossover({DistortionKind::echo, 0.2, 1.05}), CalibrationMissError);
  CHECK(cal().idle_one_probability() == doctest::Approx(0.575));
  CHECK_FALSE(cal().burst_model().enabled);
  for (const auto& [kind, cov] : cal().cells()) {
    for (double a : {0.6, 0.7, 0.8, 0.9, 1.0}) {
      const double p = cal().crossover({kind, cov, a});
      CHECK(p >= 0.0);
      CHECK(p <= 0.5);
    }
  }
}

TEST_CASE("malformed calibration is rejected") {
  CHECK_THROWS_AS(ChannelCalibration::from_json_text("{"), FormatError);
  CHECK_THROWS_AS(ChannelCalibration::from_json_text(R"({"alphas":[0.6],"cells":[{"kind":"reverb","coverage":0.2,"bit_accuracy":[0.9]}]})"),
                  FormatError);
  CHECK_THROWS_AS(ChannelCalibration::from_json_text(R"({"alphas":[0.6,0.8],"cells":[{"kind":"echo","coverage":0.2,"bit_accuracy":[0.9]}]})"),
                  FormatError);
}

TEST_CASE("bsc statistics") {
  Rng rng(1);
  const auto bits = random_bits(rng, 100000);
  CHECK(bsc_transmit(bits, cal(), {DistortionKind::clean, 0.0, 0.6}, 5) == bsc_transmit(bits, cal(), {DistortionKind::clean, 0.0, 0.6}, 5));
  Rng r0(2);
  CHECK(bsc_flip(bits, 0.0, r0) == bits);
  for (const ChannelCondition c : {ChannelCondition{DistortionKind::clean, 0.0, 0.6}, ChannelCondition{DistortionKind::white_noise, 0.8, 1.0},
                                   ChannelCondition{DistortionKind::bandpass, 0.4, 0.8}}) {
    const auto out = bsc_transmit(bits, cal(), c, 17);
    const double acc = 1.0 - static_cast<double>((out ^ bits).weight()) / 100000.0;
    CHECK(acc == doctest::Approx(cal().bit_accuracy(c)).epsilon(0.01));
  }
}

TEST_CASE("gilbert-elliott chain keeps the mean and clusters errors") {
  const BurstModelConfig cfg;
  for (double p : {0.02, 0.08, 0.2}) {
    const auto ge = cfg.for_crossover(p);
    CHECK(ge.mean_crossover() == doctest::Approx(p));
    CHECK(ge.p_good == doctest::Approx(p / 4));
    CHECK(ge.p_bad == doctest::Approx(std::min(0.4, 4 * p)));
    CHECK(1.0 / ge.bad_to_good == doctest::Approx(5.0));
  }
  const auto burst_cal = cal().with_burst_model(true);
  const Bitstream zeros(200000);
  const ChannelCondition c{DistortionKind::clean, 0.0, 0.6};
  const auto iid = bsc_transmit(zeros, cal(), c, 3);
  const auto bursty = bsc_transmit(zeros, burst_cal, c, 3);
  CHECK(static_cast<double>(bursty.weight()) / 200000.0 == doctest::Approx(0.08).epsilon(0.08));
  auto adjacent_pairs = [](const Bitstream& b) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < b.size(); ++i) n += (b[i] & b[i - 1]);
    return n;
  };
  CHECK(adjacent_pairs(bursty) > 2 * adjacent_pairs(iid));
}

TEST_CASE("spread-spectrum embedding on a silent frame is the scaled chip sequence") {
  const std::vector<double> silent(kFrameSamples, 0.0);
  const auto out = ss_embed(silent, 1, 0.8);
  const auto pn = pn_sequence(kDefaultPnSeed);
  for (std::size_t i = 0; i < kFrameSamples; ++i) REQUIRE(out[i] == doctest::Approx(0.8 * 0.1 * pn[i]));
  const auto neg = ss_embed(silent, 0, 0.8);
  CHECK(ss_decode(neg).bit == 0);
  CHECK(ss_decode(out).bit == 1);
  CHECK_THROWS_AS(ss_embed(std::vector<double>(319, 0.0), 1, 0.6), FrameSizeError);
  CHECK_THROWS_AS(ss_decode(std::vector<double>(321, 0.0)), FrameSizeError);
}

TEST_CASE("spread-spectrum round trip on speech-like frames") {
  const SpreadSpectrumCodec codec;
  const auto speech = audio::synth_speech_like(400.0, 7);
  Rng rng(8);
  int correct = 0;
  double confidence = 0.0;
  double energy_06 = 0.0;
  double energy_10 = 0.0;
  const int n = 10000;
  for (int f = 0; f < n; ++f) {
    const std::span<const double> frame(speech.samples.data() + static_cast<std::size_t>(f) * kFrameSamples, kFrameSamples);
    const auto bit = static_cast<std::uint8_t>(rng.next() & 1U);
    const auto marked = codec.embed(frame, bit, 0.6);
    const auto d = codec.decode(marked);
    correct += d.bit == bit;
    confidence += d.confidence;
    const auto flipped = codec.decode(codec.embed(frame, bit ^ 1U, 0.6));
    CHECK(flipped.bit == (bit ^ 1U));
    if (f < 100) {
      const auto strong = codec.embed(frame, bit, 1.0);
      for (std::size_t i = 0; i < kFrameSamples; ++i) {
        energy_06 += std::pow(marked[i] - frame[i], 2);
        energy_10 += std::pow(strong[i] - frame[i], 2);
      }
    }
  }
  CHECK(static_cast<double>(correct) / n >= 0.99);
  CHECK(confidence / n > 0.9);
  CHECK(energy_10 > energy_06);
}

TEST_CASE("pure noise decodes with near-zero confidence") {
  const SpreadSpectrumCodec codec;
  Rng rng(4);
  double conf = 0.0;
  int ones = 0;
  std::vector<double> frame(kFrameSamples);
  for (int t = 0; t < 10000; ++t) {
    for (auto& v : frame) v = 0.1 * rng.normal();
    const auto d = codec.decode(frame);
    conf += d.confidence;
    ones += d.bit;
  }
  CHECK(conf / 10000 < 0.2);
  CHECK(ones == doctest::Approx(5000).epsilon(0.05));
}

TEST_CASE("stream embedding, offsets and carrier length") {
  const SpreadSpectrumCodec codec;
  Rng rng(12);
  const auto bits = random_bits(rng, 46);
  CHECK_THROWS_AS(codec.embed_stream(bits, audio::PcmSignal(14719), 0.6), CarrierTooShortError);
  const auto carrier = audio::synth_speech_like(3.0, 5);
  const auto marked = codec.embed_stream(bits, carrier, 0.6);
  CHECK(hard_bits(codec.decode_stream(marked, 0, 46)) == bits);
  CHECK_THROWS_AS(codec.decode_stream(marked, 30, 46), CarrierTooShortError);

  // one full frame late: chance agreement only
  std::size_t agree = 0;
  std::size_t total = 0;
  for (int t = 0; t < 40; ++t) {
    const auto b = random_bits(rng, 46);
    const auto sig = codec.embed_stream(b, audio::synth_speech_like(2.0, 100 + static_cast<std::uint64_t>(t)), 0.6);
    const auto shifted = hard_bits(codec.decode_stream(sig, 1, 45));
    for (std::size_t i = 0; i < 45; ++i) agree += shifted[i] == b[i];
    total += 45;
  }
  CHECK(static_cast<double>(agree) / static_cast<double>(total) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("coarse alignment recovers the sample phase") {
  const SpreadSpectrumCodec codec;
  Rng rng(21);
  const auto bits = random_bits(rng, 40);
  const auto marked = codec.embed_stream(bits, audio::synth_speech_like(2.0, 9), 0.6);
  for (std::size_t delay : {0UL, 1UL, 157UL, 319UL, 320UL, 777UL}) {
    audio::PcmSignal delayed(delay);
    delayed.samples.insert(delayed.samples.end(), marked.samples.begin(), marked.samples.end());
    CHECK(codec.coarse_align(delayed, 30) == delay % kFrameSamples);
  }
}

TEST_CASE("backends share one contract") {
  const StatisticalChannel stat(cal());
  const SpreadSpectrumChannel signal;
  Rng rng(30);
  const auto bits = random_bits(rng, 46);
  for (const FrameChannel* ch : {static_cast<const FrameChannel*>(&stat), static_cast<const FrameChannel*>(&signal)}) {
    TransmitOptions opts;
    opts.condition = {DistortionKind::clean, 0.0, 1.0};
    opts.seed = 99;
    const auto rx = ch->transmit(bits, opts);
    CHECK(rx.bits.size() == 7 + 46);
    CHECK(rx.delay_samples <= 960);
    CHECK(rx.true_offset == rx.delay_samples / 320);
    const auto again = ch->transmit(bits, opts);
    CHECK(hard_bits(again.bits) == hard_bits(rx.bits));
    if (ch->backend() == Backend::spread_spectrum) {
      CHECK(rx.frame_aligned);
      CHECK(hard_bits(rx.bits).slice(rx.true_offset, 46) == bits);
    }
  }
}

TEST_CASE("statistical channel without timing recovery sees only idle noise") {
  const StatisticalChannel stat(cal());
  const Bitstream ones(200, 1);
  int misaligned = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    TransmitOptions opts;
    opts.condition = {DistortionKind::clean, 0.0, 1.0};
    opts.timing_recovery = false;
    opts.seed = seed;
    const auto rx = stat.transmit(ones, opts);
    if (!rx.frame_aligned) {
      ++misaligned;
      const double frac = static_cast<double>(hard_bits(rx.bits).weight()) / static_cast<double>(rx.bits.size());
      CHECK(frac == doctest::Approx(0.575).epsilon(0.2));
    }
  }
  CHECK(misaligned >= 48);
}

TEST_CASE("backend names") {
  CHECK(parse_backend("statistical") == Backend::statistical);
  CHECK(parse_backend("spread_spectrum") == Backend::spread_spectrum);
  CHECK_FALSE(parse_backend("neural").has_value());
}
