#include <doctest.h>

#include <random>

#include "lpoint/error.hpp"
#include "lpoint/grouptheory.hpp"

using namespace lpoint;

namespace {

using C = std::complex<double>;

bool same(const RepVector& a, const std::vector<C>& b, double tol = 1e-14) {
    if (a.characters.size() != b.size()) return false;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (std::abs(a.characters[i] - b[i]) > tol) return false;
    return true;
}

int count_of(const std::vector<Multiplicity>& parts, const std::string& name) {
    for (const auto& m : parts)
        if (m.irrep == name) return m.count;
    return 0;
}

}  // namespace

TEST_CASE("class structure and order") {
    const auto& t = builtin_table();
    REQUIRE(t.classes().size() == 6);
    const int sizes[] = {1, 1, 2, 2, 3, 3};
    int total = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(t.classes()[i].size == sizes[i]);
        total += t.classes()[i].size;
    }
    CHECK(total == 12);
    CHECK(t.order() == 12);
    int dims = 0;
    for (const auto& ir : t.irreps()) dims += ir.dimension() * ir.dimension();
    CHECK(dims == 12);
}

TEST_CASE("table rows") {
    const auto& t = builtin_table();
    CHECK(same(t.rep("Λ3"), {2, 2, -1, -1, 0, 0}));
    CHECK(same(t.rep("Λ6"), {2, -2, 1, -1, 0, 0}));
    const auto l4 = t.rep("Λ4"), l5 = t.rep("Λ5");
    for (std::size_t i = 0; i < 6; ++i) CHECK(l4.characters[i] == std::conj(l5.characters[i]));
    CHECK(l4.characters[4] != l5.characters[4]);
}

TEST_CASE("orthogonality") {
    CHECK(builtin_table().row_orthogonality_defect() < 1e-12);
    CHECK(builtin_table().column_orthogonality_defect() < 1e-12);
}

TEST_CASE("products") {
    const auto& t = builtin_table();
    CHECK(same(product(t.rep("Λ1"), spinor_rep()), {2, -2, 1, -1, 0, 0}));
    CHECK(same(product(t.rep("Λ1"), t.rep("Λ1")), {1, 1, 1, 1, 1, 1}));
    CHECK(same(product(t.rep("Λ3"), spinor_rep()), {4, -4, -1, 1, 0, 0}));
    CHECK(format_decomposition(decompose(product(t.rep("Λ1"), spinor_rep()))) == "Λ6");
    RepVector bad;
    bad.characters = {1, 1};
    CHECK_THROWS_AS(product(bad, spinor_rep()), PreconditionError);
}

TEST_CASE("decompositions") {
    const auto parts = decompose(parse_rep_expression("L3*D12"));
    CHECK(count_of(parts, "Λ4") == 1);
    CHECK(count_of(parts, "Λ5") == 1);
    CHECK(count_of(parts, "Λ6") == 1);
    CHECK(format_decomposition(parts) == "Λ4 ⊕ Λ5 ⊕ Λ6");
    CHECK(format_decomposition(decompose(builtin_table().rep("Λ6"))) == "Λ6");

    RepVector regular;
    regular.characters = {12, 0, 0, 0, 0, 0};
    for (const auto& ir : builtin_table().irreps()) CHECK(count_of(decompose(regular), ir.name) == ir.dimension());

    RepVector junk;
    junk.characters = {1, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(decompose(junk), NotARepresentation);
}

TEST_CASE("expression parser accepts the usual spellings") {
    const auto a = parse_rep_expression("Λ3⊗D1/2");
    CHECK(same(parse_rep_expression("L3 x D12"), {a.characters.begin(), a.characters.end()}));
    CHECK(same(parse_rep_expression("L3×D1/2"), {a.characters.begin(), a.characters.end()}));
    CHECK_THROWS_AS(parse_rep_expression("L9"), PreconditionError);
}

TEST_CASE("decompose inverts recompose for random combinations") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> m(0, 4);
    const auto& t = builtin_table();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Multiplicity> parts;
        for (const auto& ir : t.irreps()) parts.push_back({ir.name, m(rng)});
        bool any = false;
        for (const auto& p : parts) any = any || p.count > 0;
        if (!any) continue;
        const auto back = decompose(recompose(parts));
        for (const auto& p : parts) CHECK(count_of(back, p.irrep) == p.count);
    }
}

TEST_CASE("product is commutative and associative") {
    const auto& t = builtin_table();
    for (const auto& a : t.irreps())
        for (const auto& b : t.irreps()) {
            const auto ab = product(t.rep(a.name), t.rep(b.name)), ba = product(t.rep(b.name), t.rep(a.name));
            CHECK(same(ab, ba.characters));
            for (const auto& c : t.irreps()) {
                const auto l = product(ab, t.rep(c.name));
                const auto r = product(t.rep(a.name), product(t.rep(b.name), t.rep(c.name)));
                CHECK(same(l, r.characters));
            }
        }
}

TEST_CASE("explicit double-group elements reproduce the class sizes and the spinor characters") {
    const auto& els = c3v_double_group_elements();
    REQUIRE(els.size() == 12);
    std::vector<int> sizes(6, 0);
    std::vector<C> trace(6, 0.0);
    for (const auto& g : els) {
        ++sizes[static_cast<std::size_t>(g.class_index)];
        trace[static_cast<std::size_t>(g.class_index)] = g.spin.trace();
        CHECK((g.spin.adjoint() * g.spin - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
    }
    CHECK(sizes == std::vector<int>{1, 1, 2, 2, 3, 3});
    CHECK(same(RepVector{trace}, spinor_rep().characters, 1e-12));
}
