#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "wtgeprp/program.hpp"

using namespace wtgeprp;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(bool(in), "cannot open ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

NormalGene make_gene(const std::string& head, const std::string& tail, const std::string& dc,
                     std::vector<double> constants) {
    NormalGene g;
    g.head = head;
    g.tail = tail;
    g.dc = dc;
    g.constants = std::move(constants);
    return g;
}

const std::vector<double> kConsts{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

struct TreeShape {
    std::size_t leaves = 0, unary = 0, binary = 0;
};

TreeShape shape_of(const ExprTree& tree, int idx = 0) {
    const ExprNode& n = tree.nodes[static_cast<std::size_t>(idx)];
    if (n.kind != ExprNode::Kind::func) return {1, 0, 0};
    TreeShape s = shape_of(tree, n.child_a);
    if (n.child_b >= 0) {
        const TreeShape r = shape_of(tree, n.child_b);
        return {s.leaves + r.leaves, s.unary + r.unary, s.binary + r.binary + 1};
    }
    return {s.leaves, s.unary + 1, s.binary};
}

}  // namespace

TEST_CASE("layout defaults and derived sizes") {
    const GeneLayout lo;
    CHECK(lo.head_len == 8);
    CHECK(lo.tail_len() == 9);
    CHECK(lo.dc_len() == 9);
    CHECK(lo.const_count == 10);
    CHECK(lo.home_head_len == 4);
    CHECK(lo.home_tail_len() == 5);
    CHECK(lo.gene_symbols() == 26);
    CHECK(lo.home_symbols() == 9);
}

TEST_CASE("random chromosomes satisfy every structural invariant") {
    const GeneLayout lo;
    Rng rng(1);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t k = 1 + rng.next_below(4);
        const Chromosome c = random_chromosome(lo, k, rng);
        REQUIRE(is_structurally_valid(c));
    }

    SUBCASE("fixed seed reproduces the identical chromosome") {
        Rng r1(77), r2(77);
        CHECK(random_chromosome(lo, 2, r1) == random_chromosome(lo, 2, r2));
    }

    SUBCASE("single-gene chromosomes carry the trivial homeotic gene") {
        Rng r(5);
        const Chromosome c = random_chromosome(lo, 1, r);
        CHECK(c.homeotic.head == "0000");
        CHECK(c.homeotic.tail == "00000");
    }

    SUBCASE("gene count bounds") {
        Rng r(5);
        CHECK_THROWS_AS((void)random_chromosome(lo, 0, r), std::invalid_argument);
        CHECK_THROWS_AS((void)random_chromosome(lo, 9, r), std::invalid_argument);
    }
}

TEST_CASE("decode basics") {
    const GeneLayout lo;

    SUBCASE("terminal at the root closes the frame") {
        const auto g = make_gene("a+*/SCQb", "abcdefabc", "ABCDEFGHI", kConsts);
        const ExprTree t = decode(g);
        CHECK(t.size() == 1);
        CHECK(oracle::tree_sexpr(t) == "a");
    }

    SUBCASE("question marks consume Dc symbols in frame order") {
        // (+ ?1 (S ?2)): first '?' (position 1) binds dc[0]='C' -> consts[2],
        // second binds dc[1]='A' -> consts[0].
        const auto g = make_gene("+?S?bcde", "fabcdefab", "CABDEFGHI", kConsts);
        CHECK(oracle::tree_sexpr(decode(g)) == "(+ c3 (S c1))");
    }

    SUBCASE("10,000 random genes decode without error") {
        Rng rng(12);
        for (int i = 0; i < 10000; ++i) {
            const Chromosome c = random_chromosome(GeneLayout{}, 1, rng);
            CHECK_NOTHROW((void)decode(c.genes[0]));
        }
    }

    SUBCASE("leaf count = binary internals + 1, over 1000 random genes") {
        Rng rng(13);
        for (int i = 0; i < 1000; ++i) {
            const Chromosome c = random_chromosome(GeneLayout{}, 1, rng);
            const TreeShape s = shape_of(decode(c.genes[0]));
            CHECK(s.leaves == s.binary + 1);
        }
    }
}

TEST_CASE("decode matches the independent reference expander") {
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        const Chromosome c = random_chromosome(GeneLayout{}, 2, rng);
        for (const NormalGene& g : c.genes)
            CHECK(oracle::tree_sexpr(decode(g)) == oracle::reference_gene_sexpr(g));
        CHECK(oracle::tree_sexpr(decode_homeotic(c.homeotic)) ==
              oracle::reference_homeotic_sexpr(c.homeotic));
    }
}

TEST_CASE("the bundled exemplar decodes to the two-gene product expression") {
    const Chromosome c =
        chromosome_from_text(read_file(std::string(WTGEPRP_DATA_DIR) + "/example_chromosome.txt"));
    REQUIRE(is_structurally_valid(c));
    const Program p = decode_chromosome(c);
    REQUIRE(p.sub_trees.size() == 2);
    CHECK(oracle::tree_sexpr(p.sub_trees[0]) == "(+ (+ (- c d) (* a c2.5)) c1)");
    CHECK(oracle::tree_sexpr(p.sub_trees[1]) == "(/ (S (+ c0.7 d)) b)");
    CHECK(oracle::tree_sexpr(p.link_tree) == "(* @0 @1)");
    CHECK(to_infix(p) == "((((c-d)+(a*2.5))+1)*(sin((0.7+d))/b))");

    SUBCASE("hand arithmetic at lags (1..6)") {
        const std::array<double, 6> lags{1, 2, 3, 4, 5, 6};
        const double expected = (((3.0 - 4.0) + 1.0 * 2.5) + 1.0) * (std::sin(0.7 + 4.0) / 2.0);
        const auto v = evaluate(p, lags);
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("homeotic gene links sub-trees") {
    const GeneLayout lo;
    Rng rng(31);
    Chromosome c = random_chromosome(lo, 2, rng);
    const std::array<double, 6> lags{1.5, -2, 0.25, 3, 4, -1};

    SUBCASE("gene reference at the root means that sub-tree alone") {
        c.homeotic.head = "0+*/";
        c.homeotic.tail = "01010";
        const Program p = decode_chromosome(c);
        CHECK(oracle::tree_sexpr(p.link_tree) == "@0");
        const auto whole = evaluate(p, lags);
        const auto sub = evaluate(p.sub_trees[0], lags);
        CHECK(whole.has_value() == sub.has_value());
        if (whole) CHECK(*whole == *sub);
    }

    SUBCASE("duplicated reference doubles the sub-tree value") {
        c.genes[0] = make_gene("+ab-cdef", "abcdefabc", "ABCDEFGHI", kConsts);
        c.homeotic.head = "+00*";
        c.homeotic.tail = "11001";
        const Program p = decode_chromosome(c);
        const auto whole = evaluate(p, lags);
        const auto sub = evaluate(p.sub_trees[0], lags);
        REQUIRE(whole.has_value());
        REQUIRE(sub.has_value());
        CHECK(*whole == doctest::Approx(2 * *sub).epsilon(1e-12));
    }

    SUBCASE("an invalid gene never referenced does not poison the program") {
        c.genes[1] = make_gene("Q-abcdef", "abcdefabc", "ABCDEFGHI", kConsts);  // sqrt(a-b)
        c.homeotic.head = "0000";
        c.homeotic.tail = "00000";
        const Program p = decode_chromosome(c);
        const std::array<double, 6> neg{1.0, 5.0, 0, 0, 0, 0};  // sqrt(-4) in gene 1
        CHECK_FALSE(evaluate(p.sub_trees[1], neg).has_value());
        CHECK(evaluate(p, neg).has_value() == evaluate(p.sub_trees[0], neg).has_value());
    }
}

TEST_CASE("evaluation") {
    const GeneLayout lo;

    SUBCASE("a + f on lags (1..6) gives 7") {
        const auto g = make_gene("+afbcdef", "abcdefabc", "ABCDEFGHI", kConsts);
        const auto v = evaluate(decode(g), {1, 2, 3, 4, 5, 6});
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(7.0));
    }

    SUBCASE("sqrt of a negative is invalid, not a number") {
        const auto g = make_gene("Qabcdefa", "abcdefabc", "ABCDEFGHI", kConsts);
        CHECK_FALSE(evaluate(decode(g), {-1, 0, 0, 0, 0, 0}).has_value());
        CHECK(evaluate(decode(g), {4, 0, 0, 0, 0, 0}).value() == doctest::Approx(2.0));
    }

    SUBCASE("division by zero is invalid even when later absorbed") {
        // a/(b/c) with c = 0: inner b/0 invalidates the whole expression.
        const auto g = make_gene("/a/bcdef", "bcabcdefa", "ABCDEFGHI", kConsts);
        CHECK_FALSE(evaluate(decode(g), {1, 2, 0, 0, 0, 0}).has_value());
    }

    SUBCASE("agrees with the independent postfix evaluator on 1000 random pairs") {
        Rng rng(41);
        std::size_t invalid_seen = 0;
        for (int i = 0; i < 1000; ++i) {
            const Chromosome c = random_chromosome(lo, 1, rng);
            std::array<double, 6> lags{};
            for (double& v : lags) v = rng.next_real(-3, 3);
            const auto mine = evaluate(decode(c.genes[0]), lags);
            const auto ref = oracle::postfix_eval(oracle::reference_gene_postfix(c.genes[0]), lags);
            REQUIRE(mine.has_value() == ref.has_value());
            if (!mine) {
                ++invalid_seen;
                continue;
            }
            const double denom = std::max(1.0, std::abs(*ref));
            CHECK(std::abs(*mine - *ref) / denom <= 1e-12);
        }
        CHECK(invalid_seen > 0);  // the sample exercises the invalid path too
    }
}

TEST_CASE("chromosome text serialization") {
    const GeneLayout lo;
    Rng rng(51);

    SUBCASE("random chromosomes round-trip") {
        for (int i = 0; i < 200; ++i) {
            const Chromosome c = random_chromosome(lo, 1 + rng.next_below(3), rng);
            const Chromosome back = chromosome_from_text(to_text(c));
            CHECK(back == c);
        }
    }

    SUBCASE("rejects malformed text") {
        CHECK_THROWS(chromosome_from_text(""));
        CHECK_THROWS(chromosome_from_text("layout head=8 home_head=4 consts=10 genes=1\n"));
        const Chromosome c = random_chromosome(lo, 2, rng);
        std::string text = to_text(c);
        text.replace(text.find("genes=2"), 7, "genes=3");
        CHECK_THROWS(chromosome_from_text(text));
    }

    SUBCASE("rejects structurally invalid symbols") {
        std::string text =
            "layout head=2 home_head=2 consts=2 genes=1\n"
            "gene 0 | +a | abZ | AB | 1 2\n"  // 'Z' is not a terminal
            "homeotic | 00 | 000\n";
        CHECK_THROWS(chromosome_from_text(text));
    }
}
