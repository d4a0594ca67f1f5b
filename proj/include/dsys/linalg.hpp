#pragma once

#include "dsys/field.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

namespace dsys {

// Sparse row reduction to full RREF over K, generic in the column key.
// Comparator order decides pivots: the first key of a row is its pivot.
// Optional tag columns ride along and are never pivoted (provenance /
// syzygy extraction).
template <class Key, class Cmp, class TagKey = int>
class Eliminator {
public:
    using Row = std::map<Key, RatFun, Cmp>;
    using Tag = std::map<TagKey, RatFun>;

    explicit Eliminator(Cmp cmp = Cmp()) : cmp_(cmp) {}

    static void axpy(Row& dst, const RatFun& c, const Row& src) {
        if (c.is_zero()) return;
        for (auto& [k, v] : src) {
            auto it = dst.find(k);
            if (it == dst.end()) {
                RatFun nv = c * v;
                if (!nv.is_zero()) dst.emplace(k, std::move(nv));
            } else {
                it->second = it->second + c * v;
                if (it->second.is_zero()) dst.erase(it);
            }
        }
    }
    static void axpy_tag(Tag& dst, const RatFun& c, const Tag& src) {
        if (c.is_zero()) return;
        for (auto& [k, v] : src) {
            auto it = dst.find(k);
            if (it == dst.end()) {
                RatFun nv = c * v;
                if (!nv.is_zero()) dst.emplace(k, std::move(nv));
            } else {
                it->second = it->second + c * v;
                if (it->second.is_zero()) dst.erase(it);
            }
        }
    }

    // Rows are rebuilt with the eliminator's own comparator so stateful
    // orders stay consistent across call sites.
    Row make_row(const Row& in) const {
        Row r(cmp_);
        for (auto& [k, v] : in) r.emplace(k, v);
        return r;
    }

    // Reduce row (and tag) against current pivots.
    void reduce(Row& row_in, Tag* tag = nullptr) const {
        Row row = make_row(row_in);
        for (auto& e : entries_) {
            auto it = row.find(e.pivot);
            if (it == row.end()) continue;
            RatFun c = -it->second; // pivot rows are monic
            axpy(row, c, e.row);
            if (tag) axpy_tag(*tag, c, e.tag);
        }
        row_in = std::move(row);
    }

    // Insert a row; returns true if it added rank. Zero-reduced rows with a
    // tag are recorded as syzygies.
    bool insert(const Row& row_in, Tag tag = {}) {
        Row row = make_row(row_in);
        reduce(row, &tag);
        if (row.empty()) {
            if (!tag.empty()) syzygies_.push_back(std::move(tag));
            return false;
        }
        Key pivot = row.begin()->first;
        RatFun lead = row.begin()->second;
        RatFun inv = lead.inverse();
        Row nr(cmp_);
        for (auto& [k, v] : row) {
            RatFun nv = v * inv;
            if (!nv.is_zero()) nr.emplace(k, nv);
        }
        Tag nt;
        for (auto& [k, v] : tag) {
            RatFun nv = v * inv;
            if (!nv.is_zero()) nt.emplace(k, nv);
        }
        // Back-substitution keeps full RREF.
        for (auto& e : entries_) {
            auto it = e.row.find(pivot);
            if (it == e.row.end()) continue;
            RatFun c = -it->second;
            axpy(e.row, c, nr);
            axpy_tag(e.tag, c, nt);
        }
        entries_.push_back({pivot, std::move(nr), std::move(nt)});
        order_dirty_ = true;
        return true;
    }

    int rank() const { return (int)entries_.size(); }

    struct Entry {
        Key pivot;
        Row row;
        Tag tag;
    };

    // Entries sorted by pivot under the column order.
    const std::vector<Entry>& entries() const {
        if (order_dirty_) {
            auto& self = const_cast<Eliminator&>(*this);
            std::sort(self.entries_.begin(), self.entries_.end(),
                      [this](const Entry& a, const Entry& b) { return cmp_(a.pivot, b.pivot); });
            self.order_dirty_ = false;
        }
        return entries_;
    }

    const std::vector<Tag>& syzygies() const { return syzygies_; }
    bool has_pivot(const Key& k) const {
        for (auto& e : entries_)
            if (!cmp_(e.pivot, k) && !cmp_(k, e.pivot)) return true;
        return false;
    }

private:
    Cmp cmp_;
    std::vector<Entry> entries_;
    std::vector<Tag> syzygies_;
    bool order_dirty_ = false;
};

} // namespace dsys
