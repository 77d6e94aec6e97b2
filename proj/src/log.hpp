#pragma once

#include <functional>
#include <string>

namespace gardo {

// Library code reports warnings through this sink instead of writing to
// streams directly. Default sink prints to stderr.
using LogSink = std::function<void(const std::string&)>;

void set_log_sink(LogSink sink);
void log_warning(const std::string& message);

}  // namespace gardo
