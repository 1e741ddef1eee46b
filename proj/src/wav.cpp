/*
Copyright 2026 The AmbiDrop Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "ambidrop/wav.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace ambidrop {

namespace {

void put_u32(std::vector<char>* buf, std::uint32_t v) {
  buf->push_back(char(v & 0xff));
  buf->push_back(char((v >> 8) & 0xff));
  buf->push_back(char((v >> 16) & 0xff));
  buf->push_back(char((v >> 24) & 0xff));
}

void put_u16(std::vector<char>* buf, std::uint16_t v) {
  buf->push_back(char(v & 0xff));
  buf->push_back(char((v >> 8) & 0xff));
}

std::uint32_t get_u32(const char* p) {
  return std::uint32_t(std::uint8_t(p[0])) |
         (std::uint32_t(std::uint8_t(p[1])) << 8) |
         (std::uint32_t(std::uint8_t(p[2])) << 16) |
         (std::uint32_t(std::uint8_t(p[3])) << 24);
}

std::uint16_t get_u16(const char* p) {
  return std::uint16_t(std::uint8_t(p[0]) | (std::uint8_t(p[1]) << 8));
}

}  // namespace

void write_wav(const MultichannelSignal& audio, const std::string& path) {
  if (audio.num_channels() == 0) throw ShapeError("no channels to write");
  const std::size_t frames = audio.num_samples();
  for (const auto& ch : audio.channels) {
    if (ch.size() != frames) throw ShapeError("channel lengths differ");
  }
  const std::uint16_t channels = std::uint16_t(audio.num_channels());
  const std::uint32_t rate = std::uint32_t(audio.sample_rate);
  const std::uint32_t data_bytes = std::uint32_t(frames * channels * 4);

  std::vector<char> buf;
  buf.reserve(58 + data_bytes);
  buf.insert(buf.end(), {'R', 'I', 'F', 'F'});
  put_u32(&buf, 4 + 26 + 8 + data_bytes);
  buf.insert(buf.end(), {'W', 'A', 'V', 'E'});
  buf.insert(buf.end(), {'f', 'm', 't', ' '});
  put_u32(&buf, 18);
  put_u16(&buf, 3);  // IEEE float
  put_u16(&buf, channels);
  put_u32(&buf, rate);
  put_u32(&buf, rate * channels * 4);
  put_u16(&buf, std::uint16_t(channels * 4));
  put_u16(&buf, 32);
  put_u16(&buf, 0);  // no extension
  buf.insert(buf.end(), {'d', 'a', 't', 'a'});
  put_u32(&buf, data_bytes);
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const float v = float(audio.channels[c][i]);
      char raw[4];
      std::memcpy(raw, &v, 4);
      buf.insert(buf.end(), raw, raw + 4);
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw FormatError("write failure on '" + path + "'");
}

MultichannelSignal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::vector<char> buf((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (buf.size() < 44 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("'" + path + "' is not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_pos = 0, data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::uint32_t chunk_len = get_u32(buf.data() + pos + 4);
    if (std::memcmp(buf.data() + pos, "fmt ", 4) == 0) {
      if (chunk_len < 16 || pos + 8 + 16 > buf.size()) {
        throw FormatError("truncated fmt chunk");
      }
      format = get_u16(buf.data() + pos + 8);
      channels = get_u16(buf.data() + pos + 10);
      rate = get_u32(buf.data() + pos + 12);
      bits = get_u16(buf.data() + pos + 22);
    } else if (std::memcmp(buf.data() + pos, "data", 4) == 0) {
      data_pos = pos + 8;
      data_len = chunk_len;
    }
    pos += 8 + chunk_len + (chunk_len & 1);
  }
  if (channels == 0 || data_pos == 0) {
    throw FormatError("missing fmt or data chunk in '" + path + "'");
  }
  if (data_pos + data_len > buf.size()) {
    throw FormatError("data chunk extends past end of file");
  }
  const bool is_float32 = format == 3 && bits == 32;
  const bool is_int16 = format == 1 && bits == 16;
  if (!is_float32 && !is_int16) {
    throw FormatError("unsupported WAV encoding (need float32 or int16 PCM)");
  }
  const std::size_t bytes_per_sample = is_float32 ? 4 : 2;
  const std::size_t frames = data_len / (channels * bytes_per_sample);

  MultichannelSignal audio;
  audio.sample_rate = double(rate);
  audio.channels.assign(channels, std::vector<double>(frames));
  const char* data = buf.data() + data_pos;
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const char* p = data + (i * channels + c) * bytes_per_sample;
      if (is_float32) {
        float v;
        std::memcpy(&v, p, 4);
        audio.channels[c][i] = v;
      } else {
        const std::int16_t v = std::int16_t(get_u16(p));
        audio.channels[c][i] = double(v) / 32768.0;
      }
    }
  }
  return audio;
}

}  // namespace ambidrop
