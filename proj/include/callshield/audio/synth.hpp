#pragma once

#include <cstdint>

#include "callshield/audio/pcm.hpp"

namespace callshield::audio {

struct SpeechLikeParams {
  double target_rms = 0.08;        // over the whole signal
  double pause_probability = 0.2;  // per syllable slot
  double min_syllable_s = 0.12;
  double max_syllable_s = 0.30;
};

/// Speech-like carrier: a glottal pulse train plus breath noise shaped by three
/// formant resonators, with a syllabic envelope and short pauses. Stands in for
/// real telephone speech when no corpus is supplied.
PcmSignal synth_speech_like(double seconds, std::uint64_t seed, const SpeechLikeParams& params = {});

}  // namespace callshield::audio
