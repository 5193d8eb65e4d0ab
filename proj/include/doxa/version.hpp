// Copyright 2026 The doxa authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DOXA_VERSION_HPP
#define DOXA_VERSION_HPP

namespace doxa {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever the JSON report layout changes.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace doxa

#endif  // DOXA_VERSION_HPP
