#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bk/util.hpp"

namespace bk {

// Ordered ground set; labels are strings, all internal math uses indices.
class GroundSet {
public:
    GroundSet() = default;
    explicit GroundSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.size() > 25)
            throw std::invalid_argument("ground set too large (max 25 elements)");
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("duplicate ground set label: " + labels_[i]);
        }
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_.at(i); }

    int index(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) throw std::invalid_argument("unknown label: " + label);
        return it->second;
    }
    bool has_label(const std::string& label) const { return index_.count(label) > 0; }

    Mask mask_of(const std::vector<std::string>& labels) const {
        Mask m = 0;
        for (const auto& l : labels) m |= bit(index(l));
        return m;
    }
    std::vector<std::string> labels_of(Mask m) const {
        std::vector<std::string> out;
        for (int i : elements_of(m)) out.push_back(label(i));
        return out;
    }

private:
    std::vector<std::string> labels_;
    std::map<std::string, int> index_;
};

// Deterministic integer range labels "0".."n-1".
inline std::vector<std::string> numeric_labels(int n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

}  // namespace bk
