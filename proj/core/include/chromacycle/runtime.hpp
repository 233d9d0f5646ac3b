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

#pragma once

namespace chromacycle {

/// Keeps freed activation buffers inside the process heap instead of
/// returning them to the OS after every layer (glibc only; no-op elsewhere).
/// Call once at startup in processes that train or run many forward passes.
void configure_allocator() noexcept;

}  // namespace chromacycle
