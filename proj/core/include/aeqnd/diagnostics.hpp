#pragma once

#include <functional>
#include <string>

namespace aeqnd {

using WarningSink = std::function<void(const std::string&)>;

// Precondition warnings (near-resonant or weakly detuned lasers). Default sink
// writes to stderr. Passing nullptr silences warnings. Thread-safe.
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace aeqnd
