#pragma once

namespace sspanel {

/// Library and CLI version, echoed into run manifests so every artifact
/// names the code that produced it.
inline constexpr const char kVersion[] = "0.1.0";

}  // namespace sspanel
