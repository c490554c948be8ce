#include "callshield/audio/pcm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>

#include "callshield/errors.hpp"

namespace callshield::audio {

namespace {

std::uint32_t read_u32(const std::vector<unsigned char>& b, std::size_t pos) {
  return static_cast<std::uint32_t>(b[pos]) | (static_cast<std::uint32_t>(b[pos + 1]) << 8) |
         (static_cast<std::uint32_t>(b[pos + 2]) << 16) | (static_cast<std::uint32_t>(b[pos + 3]) << 24);
}

std::uint16_t read_u16(const std::vector<unsigned char>& b, std::size_t pos) {
  return static_cast<std::uint16_t>(b[pos] | (b[pos + 1] << 8));
}

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xffU));
}

void put_u16(std::ostream& out, std::uint16_t v) {
  out.put(static_cast<char>(v & 0xffU));
  out.put(static_cast<char>(v >> 8));
}

}  // namespace

PcmSignal load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = " in " + path.string();
  if (bytes.empty()) throw FormatError("file is empty" + where);
  if (bytes.size() < 12 || std::string(bytes.begin(), bytes.begin() + 4) != "RIFF" ||
      std::string(bytes.begin() + 8, bytes.begin() + 12) != "WAVE") {
    throw FormatError("not a RIFF/WAVE container" + where);
  }

  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.begin() + static_cast<std::ptrdiff_t>(pos + 4));
    const std::size_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) throw FormatError("chunk '" + id + "' truncated" + where);
    if (id == "fmt ") {
      if (size < 16) throw FormatError("fmt chunk too short" + where);
      const auto format = read_u16(bytes, body);
      const auto channels = read_u16(bytes, body + 2);
      const auto rate = read_u32(bytes, body + 4);
      const auto bits = read_u16(bytes, body + 14);
      if (format != 1) throw FormatError("audio format " + std::to_string(format) + " is not PCM" + where);
      if (channels != 1) throw FormatError("channel count " + std::to_string(channels) + " (expected 1)" + where);
      if (rate != kSampleRate) throw FormatError("sample rate " + std::to_string(rate) + " Hz (expected 8000)" + where);
      if (bits != 16) throw FormatError("bit depth " + std::to_string(bits) + " (expected 16)" + where);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw FormatError("data chunk before fmt chunk" + where);
      if (size < 2) throw FormatError("data chunk is empty" + where);
      PcmSignal out(size / 2);
      for (std::size_t i = 0; i < out.size(); ++i) {
        out.samples[i] = static_cast<std::int16_t>(read_u16(bytes, body + 2 * i)) / 32768.0;
      }
      return out;
    }
    pos = body + size + (size & 1U);
  }
  throw FormatError(std::string(have_fmt ? "missing data chunk" : "missing fmt chunk") + where);
}

void save_wav(const PcmSignal& signal, const std::filesystem::path& path) {
  if (signal.sample_rate != kSampleRate) throw FormatError("sample rate must be 8000 Hz");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  const auto data_bytes = static_cast<std::uint32_t>(signal.size() * 2);
  out.write("RIFF", 4);
  put_u32(out, 36 + data_bytes);
  out.write("WAVEfmt ", 8);
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, kSampleRate);
  put_u32(out, kSampleRate * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  out.write("data", 4);
  put_u32(out, data_bytes);
  for (double x : signal.samples) {
    const double scaled = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0))));
  }
  if (!out) throw FormatError("write failed for " + path.string());
}

double mean_power(const std::vector<double>& x, std::size_t begin, std::size_t end) {
  if (end <= begin) return 0.0;
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += x[i] * x[i];
  return acc / static_cast<double>(end - begin);
}

double rms(const std::vector<double>& x, std::size_t begin, std::size_t end) { return std::sqrt(mean_power(x, begin, end)); }

}  // namespace callshield::audio
