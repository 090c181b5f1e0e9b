// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Deepscatter Contributors

#pragma once

#include <string>

#include "scatter/signal.hpp"

namespace scatter {

/// 16-bit PCM or 32-bit float RIFF/WAVE, mono or stereo (averaged to mono),
/// samples scaled to [-1, 1]. Truncated or foreign files raise
/// std::runtime_error without partial output.
RealSignal read_wav(const std::string& path);

/// Mono 32-bit float WAV.
void write_wav(const RealSignal& signal, const std::string& path);

}  // namespace scatter
