#pragma once

// Diagnostics on stderr, filtered by SCHOLARGRAPH_LOG={error|info|debug}
// (default: error).

#include <iostream>
#include <mutex>
#include <sstream>

namespace scholargraph::log {

enum class Level { Error = 0, Info = 1, Debug = 2 };

Level threshold();

class Line {
 public:
  explicit Line(Level level) : enabled_(level <= threshold()), level_(level) {}
  Line(const Line&) = delete;
  Line& operator=(const Line&) = delete;
  ~Line();

  template <typename T>
  Line& operator<<(const T& v) {
    if (enabled_) buf_ << v;
    return *this;
  }

 private:
  bool enabled_;
  Level level_;
  std::ostringstream buf_;
};

inline Line error() { return Line(Level::Error); }
inline Line info() { return Line(Level::Info); }
inline Line debug() { return Line(Level::Debug); }

}  // namespace scholargraph::log
