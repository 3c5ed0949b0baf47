#include "lk/core/nested.hpp"

#include "lk/core/errors.hpp"

#include <cstdint>

namespace lk {

std::string to_string(Direction d) {
    return d == Direction::increasing ? "increasing" : "decreasing";
}

IntervalSet cantor_level(long n) {
    if (n < 0) throw PreconditionError("cantor level must be nonnegative");
    if (n > 40) throw PreconditionError("cantor level too large to enumerate");
    // Left endpoints are k / 3^n where k has only the ternary digits 0 and 2.
    std::vector<std::uint64_t> lefts{0};
    for (long k = 0; k < n; ++k) {
        std::vector<std::uint64_t> next;
        next.reserve(lefts.size() * 2);
        for (auto l : lefts) {
            next.push_back(3 * l);
            next.push_back(3 * l + 2);
        }
        lefts = std::move(next);
    }
    std::uint64_t den = 1;
    for (long k = 0; k < n; ++k) den *= 3;
    auto set_reduced = [](Rat& r, std::uint64_t p, std::uint64_t q) {
        while (p % 3 == 0 && q % 3 == 0) {
            p /= 3;
            q /= 3;
        }
        if (p == 0) q = 1;
        mpz_set_ui(r.get_num_mpz_t(), p);
        mpz_set_ui(r.get_den_mpz_t(), q);
    };
    std::vector<Interval> parts(lefts.size());
    for (std::size_t i = 0; i < lefts.size(); ++i) {
        Interval& iv = parts[i];
        set_reduced(iv.lo, lefts[i], den);
        set_reduced(iv.hi, lefts[i] + 1, den);
        iv.lo_closed = iv.hi_closed = true;
    }
    return IntervalSet::from_canonical(std::move(parts));
}

NestedFamily cantor_family() {
    return {[](long n) { return cantor_level(n); }, Direction::decreasing};
}

namespace {

void check_nesting(const IntervalSet& prev, const IntervalSet& next, Direction d, long n) {
    bool ok = d == Direction::decreasing ? is_subset(next, prev) : is_subset(prev, next);
    if (!ok)
        throw InvariantError("family is not " + to_string(d) + " between levels " +
                                 std::to_string(n) + " and " + std::to_string(n + 1),
                             n);
}

}  // namespace

LimitReport limit_measure(const NestedFamily& f, long n_max) {
    if (n_max < 0) throw PreconditionError("n_max must be nonnegative");
    LimitReport r;
    r.direction = f.direction;
    IntervalSet prev = f.level(0);
    r.measures.push_back(measure(prev));
    for (long n = 0; n < n_max; ++n) {
        IntervalSet next = f.level(n + 1);
        check_nesting(prev, next, f.direction, n);
        r.measures.push_back(measure(next));
        if (r.measures[n + 1] == r.measures[n]) r.strict = false;
        prev = std::move(next);
    }
    r.last = r.measures.back();
    r.last_step = n_max > 0 ? abs(r.measures[n_max] - r.measures[n_max - 1]) : Rat(0);
    return r;
}

Cover Cover::from(std::vector<Interval> intervals) {
    Cover c;
    c.total_length = 0;
    for (const auto& i : intervals) {
        if (i.lo_closed || i.hi_closed || !(i.lo < i.hi))
            throw PreconditionError("cover intervals must be nonempty and open");
        c.total_length += i.length();
    }
    c.intervals = std::move(intervals);
    return c;
}

NullCover null_cover(const NestedFamily& f, const Rat& eps, long horizon) {
    if (sgn(eps) <= 0) throw PreconditionError("eps must be positive");
    if (f.direction != Direction::decreasing)
        throw PreconditionError("null covers need a decreasing family");

    IntervalSet level = f.level(0);
    long n = 0;
    while (measure(level) >= eps) {
        if (n >= horizon)
            throw NotCertifiedError("no level below eps within horizon " + std::to_string(horizon));
        IntervalSet next = f.level(n + 1);
        check_nesting(level, next, f.direction, n);
        level = std::move(next);
        ++n;
    }

    NullCover out;
    out.level = n;
    out.level_measure = measure(level);
    const Rat budget = (eps - out.level_measure) / 2;
    const Rat m = level.size() == 0 ? Rat(1) : Rat(static_cast<long>(level.size()));
    Rat s = 1;
    while (2 * m * s > budget) s /= 2;
    out.slack = s;

    std::vector<Interval> raw;
    raw.reserve(level.size());
    for (const auto& c : level.components()) raw.push_back(Interval::open(c.lo - s, c.hi + s));
    out.cover = Cover::from(std::move(raw));
    if (!(out.cover.total_length < eps))
        throw InvariantError("null cover total length is not below eps");
    return out;
}

CoverCheck outer_measure_of_cover(const Cover& c, const IntervalSet& a) {
    IntervalSet u = canonicalize(c.intervals, std::nullopt);
    return {is_subset(a, u), c.total_length};
}

DensityWitness density_witness(const IntervalSet& a, const Rat& p) {
    if (!(sgn(p) > 0 && p < 1)) throw PreconditionError("p must lie in (0,1)");
    if (sgn(measure(a)) == 0) throw PreconditionError("density witness needs mu(A) > 0");
    const Interval* best = nullptr;
    for (const auto& c : a.components())
        if (best == nullptr || c.length() > best->length()) best = &c;
    Interval u = Interval::open(best->lo, best->hi);
    Rat ratio = measure(intersect(a, from_interval(u))) / u.length();
    return {u, ratio};
}

}  // namespace lk
