#include "gasless/events.hpp"

#include <sstream>

namespace gasless {

std::string EventLog::to_ndjson() const {
    std::string out;
    for (const auto& e : events_) {
        out += e.dump();
        out += '\n';
    }
    return out;
}

Result<EventLog> EventLog::from_ndjson(const std::string& text) {
    EventLog log;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Event e = Event::parse(line, nullptr, false);
        if (e.is_discarded()) return Err::ConfigInvalid;
        log.append(std::move(e));
    }
    return log;
}

}  // namespace gasless
