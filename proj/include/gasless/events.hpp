#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gasless/result.hpp"

namespace gasless {

// One simulation event: a JSON object with at least "t" (logical ms) and
// "type". nlohmann::json orders keys alphabetically, so serialization is
// deterministic and the NDJSON export is byte-stable per (scenario, seed).
using Event = nlohmann::json;

class EventLog {
public:
    void append(Event e) { events_.push_back(std::move(e)); }
    const std::vector<Event>& events() const { return events_; }
    size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    std::string to_ndjson() const;
    static Result<EventLog> from_ndjson(const std::string& text);

private:
    std::vector<Event> events_;
};

}  // namespace gasless
