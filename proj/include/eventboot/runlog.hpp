#pragma once

#include <fstream>
#include <initializer_list>
#include <mutex>
#include <string>
#include <utility>

#include <json.hpp>

#include "eventboot/util.hpp"

namespace eventboot {

// Structured run log: one JSON object per line, recording counts at each
// funnel stage (pairs scored, clusters formed, clusters labeled, ...).
class RunLog {
public:
    RunLog() = default;

    explicit RunLog(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw DataError("cannot write run log: " + path);
        enabled_ = true;
    }

    void event(const std::string& stage,
               std::initializer_list<std::pair<std::string, nlohmann::ordered_json>> fields) {
        if (!enabled_) return;
        nlohmann::ordered_json j;
        j["stage"] = stage;
        for (const auto& [k, v] : fields) j[k] = v;
        std::lock_guard<std::mutex> lk(mu_);
        out_ << j.dump() << '\n';
    }

    void flush() {
        if (enabled_) out_.flush();
    }

    bool enabled() const { return enabled_; }

private:
    std::ofstream out_;
    std::mutex mu_;
    bool enabled_ = false;
};

}  // namespace eventboot
