#include "log.hpp"

#include <cstdio>

namespace gardo {

namespace {
LogSink g_sink;  // empty => stderr
}

void set_log_sink(LogSink sink) { g_sink = std::move(sink); }

void log_warning(const std::string& message) {
    if (g_sink) {
        g_sink(message);
    } else {
        std::fprintf(stderr, "[gardo] warning: %s\n", message.c_str());
    }
}

}  // namespace gardo
