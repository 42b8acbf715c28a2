#include "pflab/common.hpp"

#include <charconv>

namespace pflab {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace pflab
