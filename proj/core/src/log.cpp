#include "homog/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace homog::log {

namespace {

Level parse_env() {
  const char* v = std::getenv("HOMOG_LOG");
  if (!v) return Level::Info;
  std::string s(v);
  if (s == "quiet" || s == "0") return Level::Quiet;
  if (s == "debug" || s == "2") return Level::Debug;
  return Level::Info;
}

Level g_level = parse_env();
std::mutex g_mutex;

} // namespace

Level level() { return g_level; }

void set_level(Level lvl) { g_level = lvl; }

void write(Level lvl, const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << (lvl == Level::Debug ? "[debug] " : "[homog] ") << msg << "\n";
}

} // namespace homog::log
