#pragma once

#include <stdexcept>
#include <string>

namespace rbw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidType : Error {
  using Error::Error;
};
struct ZeroVector : Error {
  using Error::Error;
};
struct GroupTooLarge : Error {
  using Error::Error;
};
struct NotInGroup : Error {
  using Error::Error;
};
struct DegenerateDirection : Error {
  using Error::Error;
};
struct QuotientTooLarge : Error {
  using Error::Error;
};
struct WindowTooLong : Error {
  using Error::Error;
};
struct HorizonExceeded : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace rbw
