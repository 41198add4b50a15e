// Copyright 2026 The bosonkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "bosonkit/errors.hpp"

namespace bosonkit {

/// Occupation-number vector: photons (or photocounts) per mode.
struct Pattern {
    std::vector<int> counts;

    Pattern() = default;
    Pattern(std::initializer_list<int> values) : counts(values) {}
    explicit Pattern(std::vector<int> values) : counts(std::move(values)) {}

    auto operator<=>(const Pattern &) const = default;

    int size() const { return static_cast<int>(counts.size()); }
    int operator[](int i) const { return counts[i]; }
    int &operator[](int i) { return counts[i]; }

    int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

    bool all_nonnegative() const {
        for (int c : counts)
            if (c < 0) return false;
        return true;
    }

    /// "1,1,0"
    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < counts.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(counts[i]);
        }
        return s;
    }

    /// Parses "1,1,0" (whitespace around numbers tolerated).
    static Pattern parse(const std::string &text) {
        Pattern p;
        size_t pos = 0;
        while (pos <= text.size()) {
            size_t comma = text.find(',', pos);
            std::string field = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
            size_t begin = field.find_first_not_of(" \t");
            if (begin == std::string::npos)
                throw parameter_error("empty field in pattern: \"" + text + "\"");
            size_t end = field.find_last_not_of(" \t");
            try {
                size_t used = 0;
                int value = std::stoi(field.substr(begin, end - begin + 1), &used);
                if (used != end - begin + 1) throw std::invalid_argument("");
                if (value < 0) throw parameter_error("negative count in pattern: \"" + text + "\"");
                p.counts.push_back(value);
            } catch (const parameter_error &) {
                throw;
            } catch (const std::exception &) {
                throw parameter_error("invalid pattern: \"" + text + "\"");
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (p.counts.empty()) throw parameter_error("empty pattern");
        return p;
    }
};

/// Finite map from outcome pattern to probability, tagged with the input
/// it was computed for and the total photon number n.
struct OutcomeDistribution {
    Pattern input;
    int n = 0;
    std::map<Pattern, double> entries;

    double at(const Pattern &p) const {
        auto it = entries.find(p);
        return it == entries.end() ? 0.0 : it->second;
    }

    double total_probability() const {
        double sum = 0.0;
        for (const auto &[pattern, prob] : entries) sum += prob;
        return sum;
    }
};

}  // namespace bosonkit
