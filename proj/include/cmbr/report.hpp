// Structured reports for the CLI: a fixed JSON schema
// {command, inputs, results, citations, provenance} with canonical key
// order, plus a human rendering derived from the same data so the numeric
// content of the two outputs is identical by construction.
#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "cmbr/brauer.hpp"

namespace cmbr {

using ojson = nlohmann::ordered_json;

inline ojson structure_json(const BrauerStructure& s) {
    ojson arr = ojson::array();
    for (auto& [l, e] : s.factors) arr.push_back(ojson::array({l, e}));
    return arr;
}

struct Report {
    std::string command;
    ojson inputs = ojson::object();
    ojson results = ojson::object();
    std::vector<std::string> citations;
    ojson provenance = ojson::object();

    ojson to_json() const {
        ojson j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["results"] = results;
        j["citations"] = citations;
        j["provenance"] = provenance;
        return j;
    }

    static void print_value(std::ostream& os, const ojson& v, int indent) {
        std::string pad(indent, ' ');
        if (v.is_object()) {
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (it.value().is_object() || (it.value().is_array() && !it.value().empty() &&
                                               it.value().front().is_object())) {
                    os << pad << it.key() << ":\n";
                    print_value(os, it.value(), indent + 2);
                } else {
                    os << pad << it.key() << ": " << it.value().dump() << "\n";
                }
            }
        } else if (v.is_array()) {
            for (const auto& el : v) {
                if (el.is_object()) {
                    os << pad << "-\n";
                    print_value(os, el, indent + 2);
                } else {
                    os << pad << "- " << el.dump() << "\n";
                }
            }
        } else {
            os << pad << v.dump() << "\n";
        }
    }

    void print_human(std::ostream& os, bool quiet) const {
        os << "command: " << command << "\n";
        if (!quiet) {
            os << "inputs:\n";
            print_value(os, inputs, 2);
        }
        os << "results:\n";
        print_value(os, results, 2);
        if (!quiet && !citations.empty()) {
            os << "citations:\n";
            for (const auto& c : citations) os << "  - " << c << "\n";
        }
        if (!quiet && !provenance.empty()) {
            os << "provenance:\n";
            print_value(os, provenance, 2);
        }
    }
};

}  // namespace cmbr
