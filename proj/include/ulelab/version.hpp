#pragma once

namespace ulelab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kModuleVersions =
    "hull=1.0.0;sampling=1.0.0;approx=1.0.0;specops=1.0.0;diagalg=1.0.0;"
    "locreport=1.0.0;cli=1.0.0";

}  // namespace ulelab
