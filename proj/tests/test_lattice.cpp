#include <catch_amalgamated.hpp>

#include <set>

#include "dagas/lattice.hpp"

using namespace dagas;

TEST_CASE("square children wrap around", "[lattice]") {
    auto c3 = Cylinder::square(3);
    REQUIRE(c3.children(0, 2) == std::vector<Site>{{1, 0, 2}, {1, 0, 0}});
    auto c4 = Cylinder::square(4);
    REQUIRE(c4.children(5, 3) == std::vector<Site>{{6, 0, 3}, {6, 0, 0}});
    auto c1 = Cylinder::square(1);
    auto ch = c1.children(0, 0);
    REQUIRE(ch.size() == 2);
    REQUIRE(ch[0] == ch[1]);
    REQUIRE_THROWS_AS(c3.children(0, 3), DomainError);
    REQUIRE_THROWS_AS(c3.children(0, -1), DomainError);
}

TEST_CASE("zigzag children follow the transfer convention", "[lattice]") {
    auto z = Cylinder::zigzag(3);
    // new down value d'_i is generated from (d_i, u_{i+1}, d_{i+1})
    REQUIRE(z.children(Site{0, 1, 2}) == std::vector<Site>{{1, 1, 2}, {1, 0, 0}, {1, 1, 0}});
    // the new up row is the old down row
    REQUIRE(z.children(Site{0, 0, 1}) == z.children(Site{1, 1, 1}));
}

TEST_CASE("child map is acyclic", "[lattice]") {
    for (auto kind : {LatticeKind::square, LatticeKind::triangular_zigzag})
        for (int n = 1; n <= 6; ++n) {
            Cylinder cyl(kind, n, 2);
            int slots = kind == LatticeKind::square ? 1 : 2;
            for (int slot = 0; slot < slots; ++slot)
                for (long i = 0; i < n; ++i) {
                    std::set<Site> frontier{Site{0, slot, i}};
                    for (int depth = 0; depth < 3; ++depth) {
                        std::set<Site> next;
                        for (auto& x : frontier)
                            for (auto& c : cyl.children(x)) {
                                REQUIRE(c.row > x.row);
                                REQUIRE_FALSE(c == Site{0, slot, i});
                                next.insert(c);
                            }
                        frontier = next;
                    }
                }
        }
}

TEST_CASE("row configuration encoding", "[lattice]") {
    REQUIRE(encode({1, 0, 0}, 2) == 1);
    REQUIRE(decode(6, 3, 2) == std::vector<int>{0, 1, 1});
    REQUIRE(encode({2, 1}, 3) == 5);
    REQUIRE(digit(5, 1, 3) == 1);
    REQUIRE_THROWS_AS(encode({2}, 2), DomainError);

    SECTION("rotation examples") {
        REQUIRE(decode(rotate(encode({1, 0, 0}, 2), 3, 2, 1), 3, 2) == std::vector<int>{0, 0, 1});
        REQUIRE(rotate(0, 5, 2, 3) == 0);
        REQUIRE(rotate(1, 2, 2, 1) == 2);
    }
    SECTION("rotation is a bijection of order dividing n") {
        for (int s : {2, 3})
            for (int n = 1; n <= 5; ++n) {
                auto count = Cylinder::square(n, s).state_count();
                std::set<std::uint64_t> image;
                for (std::uint64_t c = 0; c < count; ++c) {
                    REQUIRE(decode(c, n, s).size() == static_cast<std::size_t>(n));
                    REQUIRE(encode(decode(c, n, s), s) == c);
                    REQUIRE(rotate(c, n, s, n) == c);
                    image.insert(rotate(c, n, s, 1));
                }
                REQUIRE(image.size() == count);
            }
    }
    SECTION("zigzag interleaving") {
        Zigzag z{{1, 0}, {0, 1}};
        auto code = encode_zigzag(z, 2);
        REQUIRE(code == 0b1001);
        auto back = decode_zigzag(code, 2, 2);
        REQUIRE(back.up == z.up);
        REQUIRE(back.down == z.down);
    }
}
