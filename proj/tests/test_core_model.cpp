#include <doctest.h>

#include <random>

#include "act/core_model.hpp"

using namespace act;

namespace {

using Matrix = std::vector<std::vector<bool>>;

Relation random_relation(std::mt19937_64& rng, int n, int density_pct) {
    Relation r(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (static_cast<int>(rng() % 100) < density_pct) r.add(a, b);
    return r;
}

Matrix to_matrix(const Relation& r) {
    Matrix m(r.size(), std::vector<bool>(r.size()));
    for (auto [a, b] : r.edges()) m[a][b] = true;
    return m;
}

Matrix floyd_warshall(Matrix m) {
    int n = static_cast<int>(m.size());
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (m[i][k] && m[k][j]) m[i][j] = true;
    return m;
}

// Smallest k with a closed walk of length k, 0 if acyclic.
int shortest_cycle_len(const Matrix& a) {
    int n = static_cast<int>(a.size());
    Matrix p = a;
    for (int k = 1; k <= n; ++k) {
        for (int i = 0; i < n; ++i)
            if (p[i][i]) return k;
        Matrix q(n, std::vector<bool>(n));
        for (int i = 0; i < n; ++i)
            for (int m = 0; m < n; ++m)
                if (p[i][m])
                    for (int j = 0; j < n; ++j)
                        if (a[m][j]) q[i][j] = true;
        p = std::move(q);
    }
    return 0;
}

Event ev(EventId id, int client, std::int64_t inv, std::optional<std::int64_t> ret, Level l = Level::Weak) {
    Event e;
    e.id = id;
    e.op = op("read");
    e.rval = ret ? RetVal::str("") : RetVal::pending();
    e.lvl = l;
    e.client = client;
    e.invoke_ts = inv;
    e.return_ts = ret;
    return e;
}

}  // namespace

TEST_CASE("transitive closure matches Floyd-Warshall on random graphs") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng() % 9);
        Relation r = random_relation(rng, n, 5 + static_cast<int>(rng() % 30));
        CHECK(to_matrix(transitive_closure(r)) == floyd_warshall(to_matrix(r)));
    }
}

TEST_CASE("acyclicity and shortest cycle agree with matrix powers") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        Relation r = random_relation(rng, n, 3 + static_cast<int>(rng() % 20));
        int len = shortest_cycle_len(to_matrix(r));
        CHECK(is_acyclic(r) == (len == 0));
        auto cyc = find_cycle(r);
        CHECK(static_cast<int>(cyc.size()) == len);
        for (std::size_t i = 0; i < cyc.size(); ++i) CHECK(r.has(cyc[i], cyc[(i + 1) % cyc.size()]));
    }
}

TEST_CASE("find_cycle_through only returns cycles containing the start") {
    Relation r(5);
    r.add(0, 1);
    r.add(1, 0);
    r.add(2, 3);
    r.add(3, 4);
    r.add(4, 2);
    auto c = find_cycle_through(r, 3);
    REQUIRE(c.size() == 3);
    CHECK(c.front() == 3);
    CHECK(find_cycle_through(Relation(2), 0).empty());
    Relation self(1);
    self.add(0, 0);
    CHECK(find_cycle_through(self, 0) == std::vector<EventId>{0});
}

TEST_CASE("relation add, remove, restrict, unite") {
    Relation r(4);
    r.add(0, 1);
    r.add(1, 2);
    r.add(2, 3);
    CHECK(r.edge_count() == 3);
    r.remove(1, 2);
    CHECK_FALSE(r.has(1, 2));
    CHECK(r.pred(1) == std::set<EventId>{0});
    Relation k = r.restrict({true, true, false, true});
    CHECK(k.has(0, 1));
    CHECK_FALSE(k.has(2, 3));
    Relation o(4);
    o.add(3, 0);
    Relation u = r.unite(o);
    CHECK(u.edge_count() == 3);
    CHECK(u.has(3, 0));
    CHECK_THROWS(r.add(0, 9));
}

TEST_CASE("total order positions, rank and sort") {
    TotalOrder t({3, 1, 0, 2});
    CHECK(t.pos(3) == 0);
    CHECK(t.before(1, 2));
    CHECK_FALSE(t.contains(7));
    std::set<EventId> carrier{0, 2, 3};
    CHECK(rank(carrier, t, 2) == 2);
    CHECK(sort(carrier, t) == std::vector<EventId>{3, 0, 2});
    Relation rel = t.as_relation(4);
    CHECK(rel.edge_count() == 6);
    CHECK(sort(carrier, rel) == std::vector<EventId>{3, 0, 2});
    CHECK(rank(carrier, rel, 0) == 1);
    CHECK_THROWS_AS(sort(carrier, Relation(4)), NotTotal);
    CHECK_THROWS_AS(sort(std::set<EventId>{7}, t), NotTotal);
}

TEST_CASE("foldr folds left to right over the word") {
    std::vector<std::string> w{"a", "b", "c"};
    CHECK(foldr(std::string("<"), [](std::string acc, const std::string& x) { return acc + x; }, w) == "<abc");
}

TEST_CASE("history derives returns-before and same-session relations") {
    History h({ev(0, 0, 0, 1), ev(1, 1, 0, 4), ev(2, 0, 2, 3), ev(3, 1, 5, std::nullopt)});
    for (EventId a = 0; a < h.size(); ++a)
        for (EventId b = 0; b < h.size(); ++b) {
            bool rb = h.at(a).return_ts && *h.at(a).return_ts < h.at(b).invoke_ts;
            CHECK(h.rb().has(a, b) == rb);
            CHECK(h.ss().has(a, b) == (a != b && h.at(a).client == h.at(b).client));
        }
    Relation so = session_order(h);
    CHECK(so.has(0, 2));
    CHECK(so.has(1, 3));
    CHECK_FALSE(so.has(0, 1));
    // A pending event never returns before anything.
    CHECK(h.rb().succ(3).empty());
}

TEST_CASE("history validation") {
    CHECK_THROWS_AS(History({ev(1, 0, 0, 1)}), InvalidHistory);
    CHECK_THROWS_AS(History({ev(0, 0, 0, 5), ev(1, 0, 3, 6)}), InvalidHistory);   // same client overlaps
    CHECK_THROWS_AS(History({ev(0, 0, 4, 2)}), InvalidHistory);
    Event bad = ev(0, 0, 0, 1);
    bad.rval = RetVal::pending();
    CHECK_THROWS_AS(History({bad}), InvalidHistory);
    CHECK_NOTHROW(History({ev(0, 0, 0, 5), ev(1, 1, 3, 6)}));
}

TEST_CASE("excerpt renumbers densely and keeps order") {
    History h({ev(0, 0, 0, 1), ev(1, 1, 0, 4), ev(2, 0, 2, 3), ev(3, 2, 5, 6)});
    History x = h.excerpt({3, 0});
    REQUIRE(x.size() == 2);
    CHECK(x.at(0).invoke_ts == 0);
    CHECK(x.at(1).client == 2);
    CHECK(x.rb().has(0, 1));
}

TEST_CASE("happens-before is the closure of session order and visibility") {
    History h({ev(0, 0, 0, 1), ev(1, 0, 2, 3), ev(2, 1, 0, 1)});
    AbstractExecution a{h, Relation(3), TotalOrder({0, 1, 2}), {}};
    a.vis.add(2, 0);
    Relation hb = happens_before(a);
    CHECK(hb.has(2, 1));
    CHECK_FALSE(hb.has(1, 2));
}

TEST_CASE("return values compare structurally") {
    CHECK(RetVal::values({Value{std::int64_t{2}}, Value{std::int64_t{1}}, Value{std::int64_t{2}}}) ==
          RetVal::values({Value{std::int64_t{1}}, Value{std::int64_t{2}}}));
    CHECK(RetVal::integer(1) != RetVal::boolean(true));
    CHECK(RetVal::str("ab").str() == "\"ab\"");
    CHECK(RetVal::pending().is_pending());
    CHECK(parse_level("strong") == Level::Strong);
    CHECK_THROWS(parse_level("medium"));
}
