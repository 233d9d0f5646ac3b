// Copyright 2026 The ChromaCycle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "chromacycle/error.hpp"
#include "chromacycle/training.hpp"
#include "fnv.hpp"
#include "json.hpp"

namespace chromacycle {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is written as native little-endian floats");

constexpr std::string_view kMagic = "CHROMACYCLE-CKPT-1\n";

void put_u64(std::string& out, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::string_view take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) throw FormatError(std::string("checkpoint truncated in ") + what);
    std::string_view v(bytes_.data() + pos_, n);
    pos_ += n;
    return v;
  }
  std::uint64_t u64(const char* what) {
    std::uint64_t v;
    std::memcpy(&v, take(8, what).data(), 8);
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Checkpoint::id() const {
  detail::Fnv1a h;
  h.update(to_json(config));
  h.update(&iteration, sizeof(iteration));
  for (const auto& [role, params] : networks) {
    h.update(role);
    h.update(params.fingerprint);
    for (const auto& [name, t] : params.tensors) {
      h.update(name);
      h.update(t.data(), t.size() * sizeof(float));
    }
  }
  return h.hex();
}

void Checkpoint::validate() const {
  const NetworkSpecs specs = network_specs(config);
  if (networks.size() != specs.generators.size() + specs.discriminators.size()) {
    throw ConfigError(std::string("checkpoint holds ") + std::to_string(networks.size()) +
                      " networks; regime " + to_string(config.regime) + " needs " +
                      std::to_string(specs.generators.size() + specs.discriminators.size()));
  }
  for (const auto& [role, cfg] : specs.generators) Generator(cfg).check(network(role));
  for (const auto& [role, cfg] : specs.discriminators) Discriminator(cfg).check(network(role));
}

const ParameterSet& Checkpoint::network(const std::string& role) const {
  auto it = networks.find(role);
  if (it == networks.end()) throw ConfigError("checkpoint has no network '" + role + "'");
  return it->second;
}

void save_checkpoint(const Checkpoint& ck, const fs::path& path) {
  json header;
  header["config"] = json::parse(to_json(ck.config));
  header["iteration"] = ck.iteration;
  header["rng_fingerprint"] = ck.rng_fingerprint;
  header["networks"] = json::array();
  std::string payload;
  for (const auto& [role, params] : ck.networks) {
    json net = {{"role", role}, {"fingerprint", params.fingerprint}, {"tensors", json::array()}};
    for (const auto& [name, t] : params.tensors) {
      net["tensors"].push_back({{"name", name},
                                {"shape", {t.n(), t.c(), t.h(), t.w()}},
                                {"offset", payload.size() / sizeof(float)},
                                {"count", t.size()}});
      payload.append(reinterpret_cast<const char*>(t.data()), t.size() * sizeof(float));
    }
    header["networks"].push_back(std::move(net));
  }
  const std::string header_text = header.dump();

  std::string out(kMagic);
  put_u64(out, header_text.size());
  out += header_text;
  put_u64(out, payload.size());
  out += payload;
  detail::Fnv1a h;
  h.update(header_text);
  h.update(payload);
  put_u64(out, h.digest());

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write checkpoint " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("cannot write checkpoint " + path.string());
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw FileNotFound("checkpoint not found: " + path.string());
  std::ifstream f(path, std::ios::binary);
  const std::string bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};

  Reader r(bytes);
  if (r.take(std::min(bytes.size(), kMagic.size()), "magic") != kMagic) {
    throw FormatError("not a checkpoint (bad magic): " + path.string());
  }
  const std::uint64_t header_len = r.u64("header length");
  const std::string_view header_text = r.take(header_len, "header");
  const std::uint64_t payload_len = r.u64("payload length");
  const std::string_view payload = r.take(payload_len, "payload");
  const std::uint64_t checksum = r.u64("checksum");
  if (!r.done()) throw FormatError("trailing bytes after checkpoint payload");
  detail::Fnv1a h;
  h.update(header_text);
  h.update(payload);
  if (h.digest() != checksum) throw FormatError("checkpoint checksum mismatch: " + path.string());
  if (payload_len % sizeof(float) != 0) throw FormatError("checkpoint payload misaligned");

  Checkpoint ck;
  try {
    const json header = json::parse(header_text);
    ck.config = train_config_from_json(header.at("config").dump());
    ck.iteration = header.at("iteration").get<int>();
    ck.rng_fingerprint = header.at("rng_fingerprint").get<std::string>();
    const std::size_t total = payload_len / sizeof(float);
    for (const auto& net : header.at("networks")) {
      ParameterSet params;
      params.fingerprint = net.at("fingerprint").get<std::string>();
      for (const auto& t : net.at("tensors")) {
        const auto shape = t.at("shape").get<std::vector<int>>();
        const auto offset = t.at("offset").get<std::size_t>();
        const auto count = t.at("count").get<std::size_t>();
        if (shape.size() != 4) throw FormatError("tensor shape must have 4 dims");
        Tensor tensor(shape[0], shape[1], shape[2], shape[3]);
        if (tensor.size() != count || offset > total || count > total - offset) {
          throw FormatError("tensor table inconsistent with payload");
        }
        std::memcpy(tensor.data(), payload.data() + offset * sizeof(float), count * sizeof(float));
        params.tensors.emplace(t.at("name").get<std::string>(), std::move(tensor));
      }
      ck.networks.emplace(net.at("role").get<std::string>(), std::move(params));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint header: ") + e.what());
  }

  const NetworkSpecs specs = network_specs(ck.config);
  auto expect = [&](const std::string& role, const std::string& fingerprint) {
    const ParameterSet& p = ck.network(role);
    if (p.fingerprint != fingerprint) {
      throw ConfigError("checkpoint network '" + role + "' fingerprint '" + p.fingerprint +
                        "' does not match its config ('" + fingerprint + "')");
    }
  };
  for (const auto& [role, g] : specs.generators) expect(role, g.fingerprint());
  for (const auto& [role, d] : specs.discriminators) expect(role, d.fingerprint());
  ck.validate();
  return ck;
}

void require_use(const Checkpoint& ck, CheckpointUse use) {
  const Regime r = ck.config.regime;
  switch (use) {
    case CheckpointUse::colorize:
      return;
    case CheckpointUse::evaluate_cycle:
    case CheckpointUse::train_cyclegan:
      if (is_cycle(r)) return;
      throw RegimeMismatch(std::string("checkpoint regime ") + to_string(r) +
                           " is not a cycle regime");
    case CheckpointUse::train_baseline:
      if (is_baseline(r)) return;
      throw RegimeMismatch(std::string("checkpoint regime ") + to_string(r) +
                           " cannot be used for baseline training");
  }
}

Checkpoint load_checkpoint_for(const fs::path& path, CheckpointUse use) {
  Checkpoint ck = load_checkpoint(path);
  require_use(ck, use);
  return ck;
}

}  // namespace chromacycle
