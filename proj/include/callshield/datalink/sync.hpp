#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "callshield/bitstream.hpp"
#include "callshield/watermark/spread_spectrum.hpp"

namespace callshield::datalink {

/// Preamble made of a short base pattern repeated `repeats` times.
class SyncPattern {
 public:
  SyncPattern(Bitstream base, int repeats);
  /// Parses "01010x3" (base, 'x', repeat count).
  static SyncPattern parse(std::string_view text);
  /// [0,1,0,1,0] x 3, 15 bits.
  static SyncPattern standard();

  const Bitstream& base() const noexcept { return base_; }
  int repeats() const noexcept { return repeats_; }
  const Bitstream& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::string name() const;

 private:
  Bitstream base_;
  int repeats_;
  Bitstream bits_;
};

/// The fifteen candidate preambles of the sync study, best-known first.
std::vector<SyncPattern> study_patterns();

/// Threshold scaled with preamble length: round(4/15 * |sync|).
std::size_t scaled_threshold(const SyncPattern& sync);

struct SyncMatch {
  std::size_t offset = 0;
  std::size_t distance = 0;
};

/// Offsets in [0, search_window) whose Hamming distance to the preamble is at
/// most `threshold`, ordered by (distance, offset).
std::vector<SyncMatch> rank_sync_candidates(const Bitstream& decoded, const SyncPattern& sync, std::size_t search_window,
                                            std::size_t threshold);

/// Minimum-distance offset within the window, earliest on ties; nullopt when
/// nothing clears the threshold. Requires decoded.size() >= |sync|.
std::optional<SyncMatch> find_sync(const Bitstream& decoded, const SyncPattern& sync, std::size_t search_window,
                                   std::size_t threshold);
std::optional<SyncMatch> find_sync(const watermark::DecodedBits& decoded, const SyncPattern& sync, std::size_t search_window,
                                   std::size_t threshold);

}  // namespace callshield::datalink
