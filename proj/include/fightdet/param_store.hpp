#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fightdet/errors.hpp"
#include "fightdet/mat.hpp"

namespace fightdet {

// Ordered map of name -> (value, gradient of identical shape). Iteration
// follows insertion order, which fixes the optimizer update order and the
// checkpoint layout.
template <typename Real>
class ParamStoreT {
public:
    struct Entry {
        std::string name;
        MatT<Real> value;
        MatT<Real> grad;
    };

    MatT<Real>& insert(const std::string& name, MatT<Real> value) {
        if (find(name))
            throw ConfigError("param store: duplicate entry " + name);
        Entry e;
        e.name = name;
        e.grad = MatT<Real>(value.rows, value.cols);
        e.value = std::move(value);
        entries_.push_back(std::move(e));
        return entries_.back().value;
    }

    Entry* find(std::string_view name) {
        for (auto& e : entries_)
            if (e.name == name) return &e;
        return nullptr;
    }
    const Entry* find(std::string_view name) const {
        for (const auto& e : entries_)
            if (e.name == name) return &e;
        return nullptr;
    }

    Entry& at(std::string_view name) {
        if (Entry* e = find(name)) return *e;
        throw ConfigError("param store: missing entry " + std::string(name));
    }
    const Entry& at(std::string_view name) const {
        if (const Entry* e = find(name)) return *e;
        throw ConfigError("param store: missing entry " + std::string(name));
    }

    const MatT<Real>& value(std::string_view name) const { return at(name).value; }
    MatT<Real>& grad(std::string_view name) { return at(name).grad; }

    void zero_grads() {
        for (auto& e : entries_)
            std::fill(e.grad.v.begin(), e.grad.v.end(), Real(0));
    }

    std::size_t scalar_count() const {
        std::size_t n = 0;
        for (const auto& e : entries_) n += e.value.size();
        return n;
    }

    std::vector<Entry>& entries() { return entries_; }
    const std::vector<Entry>& entries() const { return entries_; }

    bool empty() const { return entries_.empty(); }
    std::size_t count() const { return entries_.size(); }

private:
    std::vector<Entry> entries_;
};

using ParamStore = ParamStoreT<float>;

} // namespace fightdet
