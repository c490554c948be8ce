#include "callshield/watermark/bsc.hpp"

namespace callshield::watermark {

Bitstream bsc_flip(const Bitstream& bits, double p, Rng& rng) {
  Bitstream out = bits;
  if (p <= 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.bernoulli(p)) out.flip(i);
  }
  return out;
}

Bitstream gilbert_elliott_flip(const Bitstream& bits, const GilbertElliott& ge, Rng& rng) {
  Bitstream out = bits;
  bool bad = rng.bernoulli(ge.stationary_bad());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.bernoulli(bad ? ge.p_bad : ge.p_good)) out.flip(i);
    bad = bad ? !rng.bernoulli(ge.bad_to_good) : rng.bernoulli(ge.good_to_bad);
  }
  return out;
}

Bitstream bsc_transmit(const Bitstream& bits, const ChannelCalibration& calibration, const ChannelCondition& condition,
                       std::uint64_t rng_seed) {
  const double p = calibration.crossover(condition);
  Rng rng(rng_seed);
  if (calibration.burst_model().enabled) return gilbert_elliott_flip(bits, calibration.burst_model().for_crossover(p), rng);
  return bsc_flip(bits, p, rng);
}

}  // namespace callshield::watermark
