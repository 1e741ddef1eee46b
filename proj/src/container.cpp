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

#include "ambidrop/container.hpp"

#include <cstring>
#include <fstream>

#include "ambidrop/common.hpp"

namespace ambidrop {

void write_container(const Container& c, const std::string& path) {
  if (c.magic.size() != 5) throw FormatError("container magic must be 5 bytes");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out.write(c.magic.data(), 5);
  const std::string header = c.header.dump();
  const std::uint32_t hlen = std::uint32_t(header.size());
  out.write(reinterpret_cast<const char*>(&hlen), 4);
  out.write(header.data(), std::streamsize(header.size()));
  out.write(reinterpret_cast<const char*>(c.payload.data()),
            std::streamsize(c.payload.size() * sizeof(float)));
  if (!out) throw FormatError("write failure on '" + path + "'");
}

Container read_container(const std::string& path,
                         const std::string& expected_magic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  Container c;
  char magic[5];
  if (!in.read(magic, 5)) throw FormatError("truncated container: no magic");
  c.magic.assign(magic, 5);
  if (c.magic != expected_magic) {
    throw FormatError("bad magic in '" + path + "': expected '" +
                      expected_magic + "', got '" + c.magic + "'");
  }
  std::uint32_t hlen = 0;
  if (!in.read(reinterpret_cast<char*>(&hlen), 4)) {
    throw FormatError("truncated container: no header length");
  }
  std::string header(hlen, '\0');
  if (!in.read(header.data(), hlen)) {
    throw FormatError("truncated container: header cut short");
  }
  try {
    c.header = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("container header is not valid JSON: ") +
                      e.what());
  }
  // Remainder is the float32 payload.
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (raw.size() % sizeof(float) != 0) {
    throw FormatError("payload size not a multiple of 4 bytes");
  }
  c.payload.resize(raw.size() / sizeof(float));
  std::memcpy(c.payload.data(), raw.data(), raw.size());
  return c;
}

}  // namespace ambidrop
