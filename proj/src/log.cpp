#include "log.hpp"

#include <cstdlib>
#include <string_view>

namespace scholargraph::log {

Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("SCHOLARGRAPH_LOG");
    const std::string_view v = env ? env : "";
    if (v == "debug") return Level::Debug;
    if (v == "info") return Level::Info;
    return Level::Error;
  }();
  return level;
}

Line::~Line() {
  if (!enabled_) return;
  static std::mutex mu;
  static constexpr const char* kTags[] = {"error", "info", "debug"};
  std::lock_guard lock(mu);
  std::cerr << "[scholargraph " << kTags[static_cast<int>(level_)] << "] " << buf_.str() << '\n';
}

}  // namespace scholargraph::log
