#pragma once

namespace gafsm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gafsm
