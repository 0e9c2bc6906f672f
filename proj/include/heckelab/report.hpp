#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace heckelab {

struct CheckRecord {
    std::string name;
    bool pass = false;
    std::string witness; // empty on pass, rendering of the failure otherwise
    long wall_ms = 0;
};

struct Report {
    std::string suite;
    std::vector<CheckRecord> checks;

    bool all_pass() const
    {
        for (const auto& c : checks)
            if (!c.pass)
                return false;
        return true;
    }
    void add(const std::string& name, bool pass, const std::string& witness = "")
    {
        checks.push_back({name, pass, pass ? std::string() : witness, 0});
    }
    void merge(const Report& other)
    {
        for (const auto& c : other.checks)
            checks.push_back(c);
    }
    void sort_by_name()
    {
        std::stable_sort(checks.begin(), checks.end(),
                         [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
    }
    const CheckRecord* find(const std::string& name) const
    {
        for (const auto& c : checks)
            if (c.name == name)
                return &c;
        return nullptr;
    }

    std::string to_text() const
    {
        std::string out;
        for (const auto& c : checks) {
            out += c.pass ? "PASS" : "FAIL";
            out += "  " + c.name;
            if (!c.pass && !c.witness.empty())
                out += "  [" + c.witness + "]";
            out += "\n";
        }
        return out;
    }
};

} // namespace heckelab
