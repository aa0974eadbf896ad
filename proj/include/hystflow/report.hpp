#pragma once

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

namespace hystflow {

enum class CheckStatus { pass, pass_sampled, warn, fail };

inline const char* to_string(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::pass_sampled: return "pass (sampled)";
    case CheckStatus::warn: return "warn";
    case CheckStatus::fail: return "fail";
    }
    return "?";
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    std::string witness;
};

/// Ordered list of named checks. Validation never throws; callers decide
/// what a failure means.
class ValidationReport {
  public:
    void add(std::string name, CheckStatus status, std::string witness = {}) {
        items_.push_back({std::move(name), status, std::move(witness)});
    }

    void append(const ValidationReport& other) {
        items_.insert(items_.end(), other.items_.begin(), other.items_.end());
    }

    const std::vector<CheckResult>& items() const noexcept { return items_; }

    const CheckResult* find(const std::string& name) const {
        auto it = std::find_if(items_.begin(), items_.end(),
                               [&](const CheckResult& c) { return c.name == name; });
        return it == items_.end() ? nullptr : &*it;
    }

    bool has_failures() const {
        return std::any_of(items_.begin(), items_.end(),
                           [](const CheckResult& c) { return c.status == CheckStatus::fail; });
    }

    bool has_warnings() const {
        return std::any_of(items_.begin(), items_.end(),
                           [](const CheckResult& c) { return c.status == CheckStatus::warn; });
    }

    friend std::ostream& operator<<(std::ostream& os, const ValidationReport& r) {
        for (const auto& c : r.items_) {
            os << "  [" << to_string(c.status) << "] " << c.name;
            if (!c.witness.empty()) os << ": " << c.witness;
            os << '\n';
        }
        return os;
    }

  private:
    std::vector<CheckResult> items_;
};

}  // namespace hystflow
