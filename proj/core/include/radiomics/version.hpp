// version.hpp : library version string
#pragma once

namespace radiomics {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace radiomics
