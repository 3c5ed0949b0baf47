#include "lk/core/interval_set.hpp"

#include "lk/core/errors.hpp"

#include <algorithm>

namespace lk {

bool Interval::empty() const {
    if (lo > hi) return true;
    return lo == hi && !(lo_closed && hi_closed);
}

bool Interval::contains(const Rat& x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
}

bool Interval::contains(const Interval& o) const {
    if (o.lo < lo || (o.lo == lo && o.lo_closed && !lo_closed)) return false;
    if (o.hi > hi || (o.hi == hi && o.hi_closed && !hi_closed)) return false;
    return true;
}

const Interval& unit_interval() {
    static const Interval unit = Interval::closed(0, 1);
    return unit;
}

IntervalSet IntervalSet::from_canonical(std::vector<Interval> parts) {
    IntervalSet s;
    s.parts_ = std::move(parts);
    return s;
}

bool IntervalSet::contains(const Rat& x) const {
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](const Rat& v, const Interval& i) { return v < i.lo; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(x);
}

std::vector<Rat> IntervalSet::endpoints() const {
    std::vector<Rat> out;
    out.reserve(parts_.size() * 2);
    for (const auto& p : parts_) {
        if (out.empty() || out.back() != p.lo) out.push_back(p.lo);
        if (out.back() != p.hi) out.push_back(p.hi);
    }
    return out;
}

IntervalSet canonicalize(std::vector<Interval> raw, const std::optional<Interval>& ambient) {
    std::vector<Interval> items;
    items.reserve(raw.size());
    for (auto& i : raw) {
        if (ambient && (i.lo < ambient->lo || i.hi > ambient->hi) && !i.empty())
            throw DomainError("interval " + to_string(i) + " escapes ambient " + to_string(*ambient));
        if (!i.empty()) items.push_back(std::move(i));
    }
    std::sort(items.begin(), items.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.lo_closed && !b.lo_closed;
    });

    std::vector<Interval> out;
    for (auto& next : items) {
        if (!out.empty()) {
            Interval& cur = out.back();
            bool touches = next.lo < cur.hi || (next.lo == cur.hi && (cur.hi_closed || next.lo_closed));
            if (touches) {
                if (next.lo == cur.lo) cur.lo_closed = cur.lo_closed || next.lo_closed;
                if (next.hi > cur.hi) {
                    cur.hi = next.hi;
                    cur.hi_closed = next.hi_closed;
                } else if (next.hi == cur.hi) {
                    cur.hi_closed = cur.hi_closed || next.hi_closed;
                }
                continue;
            }
        }
        out.push_back(std::move(next));
    }
    return IntervalSet::from_canonical(std::move(out));
}

Rat measure(const IntervalSet& a) {
    // Sum hi - lo over a running common denominator; avoids a gcd per term,
    // which dominates for sets with millions of components.
    BigInt num = 0, den = 1, scale, term;
    auto add = [&](const Rat& v, bool negate) {
        const BigInt& d = v.get_den();
        if (d == den) {
            if (negate) num -= v.get_num(); else num += v.get_num();
            return;
        }
        if (mpz_divisible_p(den.get_mpz_t(), d.get_mpz_t()) == 0) {
            BigInt l;
            mpz_lcm(l.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
            mpz_divexact(scale.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
            num *= scale;
            den = l;
        }
        mpz_divexact(scale.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
        mpz_mul(term.get_mpz_t(), v.get_num().get_mpz_t(), scale.get_mpz_t());
        if (negate) num -= term; else num += term;
    };
    for (const auto& p : a.components()) {
        add(p.hi, false);
        add(p.lo, true);
    }
    return rat(num, den);
}

IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> all = a.components();
    all.insert(all.end(), b.components().begin(), b.components().end());
    return canonicalize(std::move(all), std::nullopt);
}

namespace {

// Intersection of two nonempty intervals, if nonempty.
std::optional<Interval> meet(const Interval& x, const Interval& y) {
    Interval r;
    if (x.lo > y.lo) {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed;
    } else if (y.lo > x.lo) {
        r.lo = y.lo;
        r.lo_closed = y.lo_closed;
    } else {
        r.lo = x.lo;
        r.lo_closed = x.lo_closed && y.lo_closed;
    }
    if (x.hi < y.hi) {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed;
    } else if (y.hi < x.hi) {
        r.hi = y.hi;
        r.hi_closed = y.hi_closed;
    } else {
        r.hi = x.hi;
        r.hi_closed = x.hi_closed && y.hi_closed;
    }
    if (r.empty()) return std::nullopt;
    return r;
}

}  // namespace

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    const auto& xs = a.components();
    const auto& ys = b.components();
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < xs.size() && j < ys.size()) {
        if (auto m = meet(xs[i], ys[j])) out.push_back(std::move(*m));
        // Advance whichever component ends first.
        const Interval& x = xs[i];
        const Interval& y = ys[j];
        if (x.hi < y.hi || (x.hi == y.hi && !x.hi_closed))
            ++i;
        else
            ++j;
    }
    return canonicalize(std::move(out), std::nullopt);
}

IntervalSet complement(const IntervalSet& a, const Interval& ambient) {
    std::vector<Interval> out;
    Rat cursor = ambient.lo;
    bool cursor_closed = ambient.lo_closed;
    for (const auto& p : a.components()) {
        Interval gap{cursor, p.lo, cursor_closed, !p.lo_closed};
        if (!gap.empty()) out.push_back(gap);
        cursor = p.hi;
        cursor_closed = !p.hi_closed;
    }
    Interval tail{cursor, ambient.hi, cursor_closed, ambient.hi_closed};
    if (!tail.empty()) out.push_back(tail);
    return canonicalize(std::move(out), std::nullopt);
}

IntervalSet difference(const IntervalSet& a, const IntervalSet& b, const Interval& ambient) {
    return intersect(a, complement(b, ambient));
}

IntervalSet translate(const IntervalSet& a, const Rat& c, const Interval& ambient) {
    std::vector<Interval> out;
    out.reserve(a.size());
    for (const auto& p : a.components()) {
        Interval q{p.lo + c, p.hi + c, p.lo_closed, p.hi_closed};
        if (q.lo < ambient.lo || q.hi > ambient.hi)
            throw DomainError("translate by " + to_string(c) + " moves " + to_string(p) +
                              " outside " + to_string(ambient));
        out.push_back(std::move(q));
    }
    return IntervalSet::from_canonical(std::move(out));
}

bool is_subset(const IntervalSet& a, const IntervalSet& b) {
    return intersect(a, b) == a;
}

IntervalSet from_interval(const Interval& i) {
    if (i.empty()) return {};
    return IntervalSet::from_canonical({i});
}

std::string to_string(const Interval& i) {
    return std::string(i.lo_closed ? "[" : "(") + to_string(i.lo) + "," + to_string(i.hi) +
           (i.hi_closed ? "]" : ")");
}

std::string to_string(const IntervalSet& s) {
    if (s.empty()) return "empty";
    std::string out;
    for (const auto& p : s.components()) {
        if (!out.empty()) out += " | ";
        out += to_string(p);
    }
    return out;
}

nlohmann::json to_json(const IntervalSet& s) {
    auto arr = nlohmann::json::array();
    for (const auto& p : s.components()) {
        arr.push_back({{"lo", to_string(p.lo)},
                       {"hi", to_string(p.hi)},
                       {"lo_closed", p.lo_closed},
                       {"hi_closed", p.hi_closed}});
    }
    return arr;
}

IntervalSet interval_set_from_json(const nlohmann::json& j, const std::optional<Interval>& ambient) {
    if (!j.is_array()) throw PreconditionError("interval set JSON must be an array");
    std::vector<Interval> raw;
    for (const auto& item : j) {
        raw.push_back(Interval{parse_rat(item.at("lo").get<std::string>()),
                               parse_rat(item.at("hi").get<std::string>()),
                               item.at("lo_closed").get<bool>(), item.at("hi_closed").get<bool>()});
    }
    return canonicalize(std::move(raw), ambient);
}

}  // namespace lk
