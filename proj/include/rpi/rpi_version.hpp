#ifndef RPI_RPI_VERSION_HPP
#define RPI_RPI_VERSION_HPP

namespace rpi {
inline constexpr const char* kVersion = "0.1.0";
}

#endif  // RPI_RPI_VERSION_HPP
