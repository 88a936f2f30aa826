#include "lcta/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace lcta::log {

namespace {

Level parse_env() {
    const char* raw = std::getenv("LCTA_LOG");
    if (raw == nullptr) return Level::Warn;
    if (std::strcmp(raw, "error") == 0) return Level::Error;
    if (std::strcmp(raw, "warn") == 0) return Level::Warn;
    if (std::strcmp(raw, "info") == 0) return Level::Info;
    if (std::strcmp(raw, "debug") == 0) return Level::Debug;
    return Level::Warn;
}

const char* tag(Level level) {
    switch (level) {
    case Level::Error: return "error";
    case Level::Warn: return "warn";
    case Level::Info: return "info";
    case Level::Debug: return "debug";
    }
    return "?";
}

} // namespace

Level threshold() {
    static const Level value = parse_env();
    return value;
}

void write(Level level, const std::string& message) {
    if (static_cast<int>(level) > static_cast<int>(threshold())) return;
    std::fprintf(stderr, "lcta [%s] %s\n", tag(level), message.c_str());
}

} // namespace lcta::log
