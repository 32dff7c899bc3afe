#include "outerface/log.hpp"

namespace outerface {

namespace {
LogLevel g_level = LogLevel::Warn;

const char* level_name(LogLevel l) {
    switch (l) {
        case LogLevel::Debug: return "debug";
        case LogLevel::Info: return "info";
        case LogLevel::Warn: return "warn";
        case LogLevel::Error: return "error";
    }
    return "?";
}
}  // namespace

LogLevel log_level() { return g_level; }

void set_log_level(LogLevel level) { g_level = level; }

bool set_log_level(const std::string& name) {
    if (name == "debug") g_level = LogLevel::Debug;
    else if (name == "info") g_level = LogLevel::Info;
    else if (name == "warn") g_level = LogLevel::Warn;
    else if (name == "error") g_level = LogLevel::Error;
    else return false;
    return true;
}

void log_msg(LogLevel level, const std::string& msg) {
    if (level < g_level) return;
    std::fprintf(stderr, "[%s] %s\n", level_name(level), msg.c_str());
}

}  // namespace outerface
