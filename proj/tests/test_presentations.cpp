#include <doctest.h>

#include <pretr/beilinson.hpp>
#include <pretr/presentation.hpp>

#include "fixtures.hpp"

using namespace pretr;

namespace {

std::size_t hom_dim(const BaseCategory& cat, const std::string& src, const std::string& dst,
                    int degree) {
    const auto& hom = cat.hom(cat.object_index(src), cat.object_index(dst));
    auto it = hom.find(degree);
    return it == hom.end() ? 0 : it->second.size();
}

}  // namespace

TEST_CASE("beilinson quiver on the plane") {
    BaseCategory b2 = beilinson_category(2);
    CHECK(b2.object_count() == 3);
    CHECK(hom_dim(b2, "O(-1)", "O(0)", 0) == 3);
    // 9 length-2 paths modulo 3 commutation relations
    CHECK(hom_dim(b2, "O(-2)", "O(0)", 0) == 6);
    for (const auto& v : b2.objects()) CHECK(hom_dim(b2, v, v, 0) == 1);
    CHECK(hom_dim(b2, "O(0)", "O(-1)", 0) == 0);

    // the surviving length-2 basis is the lexicographically least one
    const auto& ids = b2.hom(b2.object_index("O(-2)"), b2.object_index("O(0)")).at(0);
    std::vector<std::string> labels;
    for (int id : ids) labels.push_back(b2.basis(id).label);
    CHECK(labels == std::vector<std::string>{"x0*y0", "x0*y1", "x0*y2", "x1*y1", "x1*y2",
                                             "x2*y2"});

    // reduction rewrites x1*y0 to x0*y1
    int x1 = b2.resolve_from_source(b2.object_index("O(-1)"), "x1");
    int y0 = b2.resolve_from_source(b2.object_index("O(-2)"), "y0");
    int x0y1 = b2.resolve_from_source(b2.object_index("O(-2)"), "x0*y1");
    const Combo& c = b2.compose_basis(x1, y0);
    REQUIRE(c.size() == 1);
    CHECK(c.begin()->first == x0y1);
    CHECK(c.begin()->second == Scalar(1));
}

TEST_CASE("beilinson hom dimensions match binomial counts up to P^3") {
    for (int n = 0; n <= 3; ++n) {
        BaseCategory cat = beilinson_category(n);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= i; ++j)
                CHECK(hom_dim(cat, line_bundle_label(-i), line_bundle_label(-j), 0) ==
                      static_cast<std::size_t>(monomial_count(n, i - j)));
    }
}

TEST_CASE("path composition agrees with the monomial oracle") {
    BaseCategory b2 = beilinson_category(2);
    int src = b2.object_index("O(-2)");
    int mid = b2.object_index("O(-1)");
    for (int i = 0; i <= 2; ++i)
        for (int j = 0; j <= 2; ++j) {
            int xi = b2.resolve_from_source(mid, "x" + std::to_string(i));
            int yj = b2.resolve_from_source(src, "y" + std::to_string(j));
            const Combo& c = b2.compose_basis(xi, yj);
            REQUIRE(c.size() == 1);
            Monomial expect = {i, j};
            CHECK(c.begin()->first == monomial_to_basis(b2, -2, expect));
            CHECK(c.begin()->second == Scalar(1));
            CHECK(path_monomial(b2, c.begin()->first) ==
                  Monomial{std::min(i, j), std::max(i, j)});
        }
}

TEST_CASE("relation-killed composite and dg quiver differentials") {
    BaseCategory q = build_path_category(fixtures::chain_with_relation());
    int g = q.resolve_from_source(q.object_index("B"), "g");
    int b = q.resolve_from_source(q.object_index("A"), "b");
    CHECK(q.compose_basis(g, b).empty());
    CHECK(hom_dim(q, "A", "C", 0) == 0);

    BaseCategory dg = build_dg_quiver_category(fixtures::chain_with_homotopies());
    CHECK(hom_dim(dg, "A", "C", 0) == 1);   // the composite survives
    CHECK(hom_dim(dg, "A", "C", -1) == 2);  // the two homotopies
    int gb = dg.resolve_from_source(dg.object_index("A"), "g*b");
    int om = dg.resolve_from_source(dg.object_index("A"), "om");
    CHECK(dg.diff_basis(gb).empty());
    const Combo& dom = dg.diff_basis(om);
    REQUIRE(dom.size() == 1);
    CHECK(dom.begin()->first == gb);
    CHECK(dom.begin()->second == Scalar(1));
}

TEST_CASE("presentation validation") {
    SUBCASE("cyclic quiver is rejected") {
        QuiverPresentation p;
        p.vertices = {"A", "B"};
        p.arrows = {{"f", "A", "B", 0}, {"g", "B", "A", 0}};
        CHECK_THROWS(build_path_category(p));
    }
    SUBCASE("relation with mismatched endpoints is rejected") {
        QuiverPresentation p;
        p.vertices = {"A", "B", "C"};
        p.arrows = {{"f", "A", "B", 0}, {"g", "B", "C", 0}};
        p.relations.push_back(PathCombo{{Scalar(1), Path{0}}, {Scalar(1), Path{1}}});
        CHECK_THROWS(build_path_category(p));
    }
    SUBCASE("differential of wrong degree is rejected") {
        QuiverPresentation p;
        p.vertices = {"A", "B", "C"};
        p.arrows = {{"b", "A", "B", 0}, {"g", "B", "C", 0}, {"om", "A", "C", 0}};
        p.differentials["om"] = PathCombo{{Scalar(1), Path{1, 0}}};
        CHECK_THROWS(build_dg_quiver_category(p));
    }
    SUBCASE("relation killing the composite forces the homotopies to be closed") {
        QuiverPresentation p = fixtures::chain_with_homotopies();
        p.relations.push_back(PathCombo{{Scalar(1), Path{1, 0}}});
        BaseCategory cat = build_dg_quiver_category(p);
        int om = cat.resolve_from_source(cat.object_index("A"), "om");
        CHECK(cat.diff_basis(om).empty());
    }
    SUBCASE("differential incompatible with relations is rejected") {
        QuiverPresentation p = fixtures::chain_with_homotopies();
        // identify the homotopies while only one of them bounds the composite
        p.differentials["ta"] = PathCombo{};
        p.relations.push_back(
            PathCombo{{Scalar(1), Path{2}}, {Scalar(-1), Path{3}}});
        CHECK_THROWS(build_dg_quiver_category(p));
    }
}

TEST_CASE("kunneth product requires degree-0 factors") {
    BaseCategory b1 = beilinson_category(1);
    BaseCategory bq = build_dg_quiver_category(fixtures::chain_with_homotopies());
    CHECK_THROWS(kunneth_product(b1, bq));
}

TEST_CASE("kunneth product of two projective lines") {
    BaseCategory b1 = beilinson_category(1);
    BaseCategory b11 = kunneth_product(b1, b1);
    CHECK(b11.object_count() == 4);
    std::size_t dim = 0;
    {
        const auto& hom = b11.hom(b11.object_index("O(-1)xO(-1)"), b11.object_index("O(0)xO(0)"));
        auto it = hom.find(0);
        dim = it == hom.end() ? 0 : it->second.size();
    }
    CHECK(dim == 4);

    // identity x identity is the identity
    int ii = b11.object_index("O(-1)xO(0)");
    CHECK(b11.basis(b11.identity_id(ii)).label == "1\xE2\x8A\xA0"
                                                  "1");

    // componentwise composition with no sign in degree 0
    int src = b11.object_index("O(-1)xO(-1)");
    int f = b11.resolve_from_source(src, "x0\xE2\x8A\xA0"
                                         "1");
    int g = b11.resolve_from_source(b11.object_index("O(0)xO(-1)"), "1\xE2\x8A\xA0x1");
    const Combo& c = b11.compose_basis(g, f);
    REQUIRE(c.size() == 1);
    CHECK(b11.basis(c.begin()->first).label == "x0\xE2\x8A\xA0x1");
    CHECK(c.begin()->second == Scalar(1));

    // product dimensions are products of factor dimensions
    for (std::size_t i = 0; i < b11.object_count(); ++i)
        for (std::size_t j = 0; j < b11.object_count(); ++j) {
            const auto& hom = b11.hom(static_cast<int>(i), static_cast<int>(j));
            std::size_t total = 0;
            for (const auto& [deg, ids] : hom) {
                (void)deg;
                total += ids.size();
            }
            // factor dims from labels O(a)xO(b)
            auto twists = [&](std::size_t idx) {
                const std::string& s = b11.object_label(static_cast<int>(idx));
                auto mid = s.find("xO(", 2);
                int a = std::stoi(s.substr(2, mid - 2 - 1));
                int b = std::stoi(s.substr(mid + 3, s.size() - mid - 4));
                return std::pair<int, int>{a, b};
            };
            auto [a1, b1t] = twists(i);
            auto [a2, b2t] = twists(j);
            CHECK(total == static_cast<std::size_t>(monomial_count(1, a2 - a1) *
                                                    monomial_count(1, b2t - b1t)));
        }
}
