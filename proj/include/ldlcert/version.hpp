#ifndef LDLCERT_VERSION_HPP
#define LDLCERT_VERSION_HPP

namespace ldlc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ldlc

#endif
