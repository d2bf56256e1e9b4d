#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rankmet/bigint.hpp"

namespace rankmet {

/// Simulation infeasible at this ambient size (window/divisor): exit code 3.
struct Infeasible : std::runtime_error {
    explicit Infeasible(const std::string& what, Int suggested = 0)
        : std::runtime_error(what), suggested_n(std::move(suggested)) {}
    Int suggested_n;
};

/// A construction could not meet its postconditions: exit code 4.
struct ConstructionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One checked inequality with both sides kept exact, re-checkable from the
/// serialized values without rerunning.
struct Assertion {
    std::string name;
    Rat lhs, rhs;
    std::string rel;  // "<", "<=", "==", "true"
    bool ok;
};

class Audit {
  public:
    void lt(const std::string& name, const Rat& lhs, const Rat& rhs) {
        push(name, lhs, rhs, "<", lhs < rhs);
    }
    void le(const std::string& name, const Rat& lhs, const Rat& rhs) {
        push(name, lhs, rhs, "<=", lhs <= rhs);
    }
    void eq(const std::string& name, const Rat& lhs, const Rat& rhs) {
        push(name, lhs, rhs, "==", lhs == rhs);
    }
    void holds(const std::string& name, bool ok) { push(name, Rat(ok ? 1 : 0), Rat(1), "true", ok); }

    void merge(const Audit& o, const std::string& prefix = "") {
        for (auto a : o.items_) {
            a.name = prefix + a.name;
            all_ok_ = all_ok_ && a.ok;
            items_.push_back(std::move(a));
        }
    }

    bool all_ok() const { return all_ok_; }
    const std::vector<Assertion>& items() const { return items_; }

    const Assertion* first_failure() const {
        for (auto& a : items_)
            if (!a.ok) return &a;
        return nullptr;
    }

    /// Throws if any recorded assertion failed (used by callers that treat a
    /// violated bound as a hard error).
    void require_all(const std::string& context) const {
        if (all_ok_) return;
        const Assertion* f = first_failure();
        throw std::logic_error(context + ": assertion failed: " + f->name + " (" +
                               to_string(f->lhs) + " " + f->rel + " " + to_string(f->rhs) + ")");
    }

  private:
    void push(const std::string& name, const Rat& lhs, const Rat& rhs, const char* rel, bool ok) {
        items_.push_back({name, lhs, rhs, rel, ok});
        all_ok_ = all_ok_ && ok;
    }

    std::vector<Assertion> items_;
    bool all_ok_ = true;
};

}  // namespace rankmet
