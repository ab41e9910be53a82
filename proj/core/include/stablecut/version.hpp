#pragma once

namespace stablecut {

/// Code version string embedded in every output artifact.
inline constexpr const char* kVersion = "stablecut 0.1.0";

}  // namespace stablecut
