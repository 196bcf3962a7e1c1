#ifndef HOMOG_LOG_HPP
#define HOMOG_LOG_HPP

#include <sstream>
#include <string>

namespace homog::log {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

/// Current verbosity; initialised from the HOMOG_LOG environment variable
/// (quiet|info|debug), default info.
Level level();
void set_level(Level lvl);

void write(Level lvl, const std::string& msg);

template <typename... Args>
void info(Args&&... args) {
  if (level() < Level::Info) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::Info, os.str());
}

template <typename... Args>
void debug(Args&&... args) {
  if (level() < Level::Debug) return;
  std::ostringstream os;
  (os << ... << args);
  write(Level::Debug, os.str());
}

} // namespace homog::log

#endif
