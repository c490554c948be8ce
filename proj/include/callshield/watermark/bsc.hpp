#pragma once

#include <cstdint>

#include "callshield/bitstream.hpp"
#include "callshield/rng.hpp"
#include "callshield/watermark/calibration.hpp"

namespace callshield::watermark {

/// Flips each bit independently with probability p.
Bitstream bsc_flip(const Bitstream& bits, double p, Rng& rng);
/// Flips bits along a Gilbert-Elliott chain started from its stationary distribution.
Bitstream gilbert_elliott_flip(const Bitstream& bits, const GilbertElliott& ge, Rng& rng);

/// p = 1 - bit_accuracy(condition). Uses the burst chain when the calibration enables it.
/// Throws CalibrationMissError for unknown conditions.
Bitstream bsc_transmit(const Bitstream& bits, const ChannelCalibration& calibration, const ChannelCondition& condition,
                       std::uint64_t rng_seed);

}  // namespace callshield::watermark
