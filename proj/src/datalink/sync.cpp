#include "callshield/datalink/sync.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace callshield::datalink {

SyncPattern::SyncPattern(Bitstream base, int repeats) : base_(std::move(base)), repeats_(repeats) {
  if (base_.empty() || repeats_ < 1) throw std::invalid_argument("sync pattern needs a non-empty base and repeats >= 1");
  for (int r = 0; r < repeats_; ++r) bits_.append(base_);
}

SyncPattern SyncPattern::parse(std::string_view text) {
  const auto x = text.find_first_of("xX*");
  if (x == std::string_view::npos) return SyncPattern(Bitstream::from_string(text), 1);
  const auto count = std::string(text.substr(x + 1));
  std::size_t used = 0;
  int repeats = 0;
  try {
    repeats = std::stoi(count, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad repeat count in sync pattern '" + std::string(text) + "'");
  }
  if (used != count.size()) throw std::invalid_argument("bad repeat count in sync pattern '" + std::string(text) + "'");
  return SyncPattern(Bitstream::from_string(text.substr(0, x)), repeats);
}

SyncPattern SyncPattern::standard() { return SyncPattern(Bitstream{0, 1, 0, 1, 0}, 3); }

std::string SyncPattern::name() const { return base_.to_string() + "x" + std::to_string(repeats_); }

std::vector<SyncPattern> study_patterns() {
  std::vector<SyncPattern> out;
  for (const char* p : {"01010x3", "101x5", "010x3", "010x5", "01100x3", "10101x3", "101x3", "11001x3", "11010x3", "10110x3",
                        "10011x3", "000x5", "000x3", "111x3", "111x5"}) {
    out.push_back(SyncPattern::parse(p));
  }
  return out;
}

std::size_t scaled_threshold(const SyncPattern& sync) {
  return static_cast<std::size_t>(std::lround(4.0 * static_cast<double>(sync.size()) / 15.0));
}

std::vector<SyncMatch> rank_sync_candidates(const Bitstream& decoded, const SyncPattern& sync, std::size_t search_window,
                                            std::size_t threshold) {
  if (decoded.size() < sync.size()) throw std::invalid_argument("decoded stream shorter than the sync preamble");
  std::vector<SyncMatch> out;
  const std::size_t last = std::min(search_window, decoded.size() - sync.size() + 1);
  for (std::size_t off = 0; off < last; ++off) {
    const auto d = hamming_distance(decoded.view().subspan(off, sync.size()), sync.bits().view());
    if (d <= threshold) out.push_back({off, d});
  }
  std::stable_sort(out.begin(), out.end(), [](const SyncMatch& a, const SyncMatch& b) { return a.distance < b.distance; });
  return out;
}

std::optional<SyncMatch> find_sync(const Bitstream& decoded, const SyncPattern& sync, std::size_t search_window, std::size_t threshold) {
  const auto ranked = rank_sync_candidates(decoded, sync, search_window, threshold);
  if (ranked.empty()) return std::nullopt;
  return ranked.front();
}

std::optional<SyncMatch> find_sync(const watermark::DecodedBits& decoded, const SyncPattern& sync, std::size_t search_window,
                                   std::size_t threshold) {
  return find_sync(watermark::hard_bits(decoded), sync, search_window, threshold);
}

}  // namespace callshield::datalink
