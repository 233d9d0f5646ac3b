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

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "chromacycle/error.hpp"
#include "chromacycle/training.hpp"
#include "test_util.hpp"

namespace chromacycle {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

TrainConfig tiny(Regime regime) {
  TrainConfig c = TrainConfig::defaults_for(regime);
  c.image_size = c.load_size = 16;
  c.gen_base_width = 4;
  c.gen_n_down = 1;
  c.gen_n_res = 1;
  c.noise_dim = 2;
  c.dis_base_width = 4;
  c.dis_n_layers = 2;
  return c;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_bytes(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

TEST(Checkpoint, RoundTripIsBitExact) {
  TempDir dir;
  for (Regime r : {Regime::wgan, Regime::gan, Regime::cyclegan, Regime::cond_cyclegan}) {
    Checkpoint ck = initial_checkpoint(tiny(r));
    ck.iteration = 42;
    ck.rng_fingerprint = "abc";
    // Values with awkward bit patterns.
    ck.networks.begin()->second.tensors.begin()->second.values()[0] = -0.0f;
    ck.networks.begin()->second.tensors.begin()->second.values()[1] = 1e-42f;
    save_checkpoint(ck, dir / "ck.bin");
    const Checkpoint back = load_checkpoint(dir / "ck.bin");
    EXPECT_EQ(back.config, ck.config);
    EXPECT_EQ(back.iteration, 42);
    EXPECT_EQ(back.rng_fingerprint, "abc");
    ASSERT_EQ(back.networks.size(), ck.networks.size());
    for (const auto& [role, p] : ck.networks) {
      const auto& q = back.network(role);
      EXPECT_EQ(q.fingerprint, p.fingerprint);
      for (const auto& [name, t] : p.tensors) {
        const Tensor& u = q.at(name);
        ASSERT_EQ(u.shape(), t.shape());
        EXPECT_EQ(std::memcmp(u.data(), t.data(), t.size() * sizeof(float)), 0) << name;
      }
    }
    EXPECT_EQ(back.id(), ck.id());
  }
}

TEST(Checkpoint, StartsWithVersionedMagic) {
  TempDir dir;
  save_checkpoint(initial_checkpoint(tiny(Regime::gan)), dir / "ck.bin");
  EXPECT_EQ(read_bytes(dir / "ck.bin").substr(0, 19), "CHROMACYCLE-CKPT-1\n");
}

TEST(Checkpoint, TruncationNeverLoads) {
  TempDir dir;
  save_checkpoint(initial_checkpoint(tiny(Regime::gan)), dir / "ck.bin");
  const std::string bytes = read_bytes(dir / "ck.bin");
  for (std::size_t len : {std::size_t{0}, std::size_t{5}, std::size_t{19}, std::size_t{30},
                          bytes.size() / 2, bytes.size() - 9, bytes.size() - 1}) {
    write_bytes(dir / "cut.bin", bytes.substr(0, len));
    EXPECT_THROW(load_checkpoint(dir / "cut.bin"), FormatError) << len;
  }
}

TEST(Checkpoint, CorruptionDetected) {
  TempDir dir;
  save_checkpoint(initial_checkpoint(tiny(Regime::gan)), dir / "ck.bin");
  std::string bytes = read_bytes(dir / "ck.bin");
  bytes[bytes.size() - 100] ^= 0x01;
  write_bytes(dir / "bad.bin", bytes);
  EXPECT_THROW(load_checkpoint(dir / "bad.bin"), FormatError);
  std::string magic = read_bytes(dir / "ck.bin");
  magic[17] = '2';
  write_bytes(dir / "v2.bin", magic);
  EXPECT_THROW(load_checkpoint(dir / "v2.bin"), FormatError);
}

TEST(Checkpoint, FingerprintMismatchRefused) {
  TempDir dir;
  Checkpoint ck = initial_checkpoint(tiny(Regime::cond_cyclegan));
  ck.networks.at("gen_g2c").fingerprint = "generator/v0 something else";
  save_checkpoint(ck, dir / "ck.bin");
  EXPECT_THROW(load_checkpoint(dir / "ck.bin"), ConfigError);
}

TEST(Checkpoint, WrongShapesRefused) {
  TempDir dir;
  Checkpoint ck = initial_checkpoint(tiny(Regime::gan));
  auto& tensors = ck.networks.at("generator").tensors;
  tensors.begin()->second = Tensor(1, 1, 1, 1);
  save_checkpoint(ck, dir / "ck.bin");
  EXPECT_THROW(load_checkpoint(dir / "ck.bin"), ConfigError);
}

TEST(Checkpoint, MissingFile) {
  TempDir dir;
  EXPECT_THROW(load_checkpoint(dir / "nope.bin"), FileNotFound);
}

TEST(Checkpoint, CrossRegimeUse) {
  TempDir dir;
  save_checkpoint(initial_checkpoint(tiny(Regime::cond_cyclegan)), dir / "cond.bin");
  save_checkpoint(initial_checkpoint(tiny(Regime::wgan)), dir / "wgan.bin");
  EXPECT_NO_THROW(load_checkpoint_for(dir / "cond.bin", CheckpointUse::colorize));
  EXPECT_NO_THROW(load_checkpoint_for(dir / "cond.bin", CheckpointUse::evaluate_cycle));
  EXPECT_NO_THROW(load_checkpoint_for(dir / "cond.bin", CheckpointUse::train_cyclegan));
  EXPECT_THROW(load_checkpoint_for(dir / "cond.bin", CheckpointUse::train_baseline),
               RegimeMismatch);
  EXPECT_NO_THROW(load_checkpoint_for(dir / "wgan.bin", CheckpointUse::train_baseline));
  EXPECT_THROW(load_checkpoint_for(dir / "wgan.bin", CheckpointUse::evaluate_cycle),
               RegimeMismatch);
}

TEST(Checkpoint, IdTracksContent) {
  Checkpoint a = initial_checkpoint(tiny(Regime::gan));
  Checkpoint b = a;
  EXPECT_EQ(a.id(), b.id());
  b.networks.at("discriminator").tensors.begin()->second.values()[0] += 1.0f;
  EXPECT_NE(a.id(), b.id());
}

TEST(Checkpoint, UnwritablePath) {
  TempDir dir;
  EXPECT_THROW(save_checkpoint(initial_checkpoint(tiny(Regime::gan)), dir / "no" / "ck.bin"),
               IoError);
}

}  // namespace
}  // namespace chromacycle
