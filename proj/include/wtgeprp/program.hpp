#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtgeprp/genome.hpp"

namespace wtgeprp {

struct ExprNode {
    enum class Kind : unsigned char { func, lag, constant, gene_ref };
    Kind kind = Kind::constant;
    char op = 0;                  // function symbol when kind == func
    int child_a = -1, child_b = -1;
    int index = 0;                // lag index 0..5 or gene reference
    double value = 0.0;           // bound constant
};

// Breadth-first (Karva) tree: node i corresponds to gene position i, so the
// root is node 0 and children always follow their parent.
struct ExprTree {
    std::vector<ExprNode> nodes;

    std::size_t size() const { return nodes.size(); }
};

// Decoded chromosome: one sub-tree per normal gene plus the homeotic linking
// tree whose gene_ref leaves stand for sub-tree values.
struct Program {
    std::vector<ExprTree> sub_trees;
    ExprTree link_tree;
};

namespace detail {

// Karva expansion shared by normal and homeotic genes: starting from
// position 0, each function consumes its arity in subsequent positions; the
// open reading frame ends when all leaves are terminals.  Since the encoding
// is breadth-first, node index == gene position.
template <typename LeafFn>
ExprTree expand_karva(const std::string& head, const std::string& tail, LeafFn&& make_leaf) {
    const std::string symbols = head + tail;
    ExprTree tree;
    std::size_t total = 1;
    for (std::size_t pos = 0; pos < total; ++pos) {
        const char sym = symbols.at(pos);
        ExprNode node;
        const int arity = arity_of(sym);
        if (arity > 0) {
            node.kind = ExprNode::Kind::func;
            node.op = sym;
            node.child_a = static_cast<int>(total);
            if (arity == 2) node.child_b = static_cast<int>(total + 1);
            total += static_cast<std::size_t>(arity);
        } else {
            node = make_leaf(sym);
        }
        tree.nodes.push_back(node);
    }
    return tree;
}

}  // namespace detail

// Decode a normal gene.  Each '?' leaf, in breadth-first order of its
// appearance (= gene position order), consumes the next Dc symbol left to
// right; that symbol indexes the gene's constant array.
inline ExprTree decode(const NormalGene& gene) {
    std::size_t next_dc = 0;
    return detail::expand_karva(gene.head, gene.tail, [&](char sym) {
        ExprNode leaf;
        if (sym == '?') {
            const char dc_sym = gene.dc.at(next_dc++);
            leaf.kind = ExprNode::Kind::constant;
            leaf.index = dc_sym - 'A';
            leaf.value = gene.constants.at(static_cast<std::size_t>(dc_sym - 'A'));
        } else {
            leaf.kind = ExprNode::Kind::lag;
            leaf.index = sym - 'a';
        }
        return leaf;
    });
}

inline ExprTree decode_homeotic(const HomeoticGene& gene) {
    return detail::expand_karva(gene.head, gene.tail, [&](char sym) {
        ExprNode leaf;
        leaf.kind = ExprNode::Kind::gene_ref;
        leaf.index = sym - '0';
        return leaf;
    });
}

inline Program decode_chromosome(const Chromosome& c) {
    Program p;
    p.sub_trees.reserve(c.gene_count());
    for (const NormalGene& g : c.genes) p.sub_trees.push_back(decode(g));
    p.link_tree = decode_homeotic(c.homeotic);
    return p;
}

namespace detail {

// Recursive evaluation; nullopt means the expression is invalid on this
// input (division by zero, sqrt of a negative, overflow).  Invalidity is
// checked at every node, so e.g. 1/(1/0) is invalid rather than 0.
template <typename RefFn>
std::optional<double> eval_node(const ExprTree& tree, int idx,
                                const std::array<double, kLagCount>& lags, RefFn&& ref) {
    const ExprNode& node = tree.nodes[static_cast<std::size_t>(idx)];
    switch (node.kind) {
        case ExprNode::Kind::lag:
            return lags[static_cast<std::size_t>(node.index)];
        case ExprNode::Kind::constant:
            return node.value;
        case ExprNode::Kind::gene_ref:
            return ref(node.index);
        case ExprNode::Kind::func:
            break;
    }
    const auto a = eval_node(tree, node.child_a, lags, ref);
    if (!a) return std::nullopt;
    double r = 0.0;
    switch (node.op) {
        case 'S': r = std::sin(*a); break;
        case 'C': r = std::cos(*a); break;
        case 'Q': r = std::sqrt(*a); break;
        default: {
            const auto b = eval_node(tree, node.child_b, lags, ref);
            if (!b) return std::nullopt;
            switch (node.op) {
                case '+': r = *a + *b; break;
                case '-': r = *a - *b; break;
                case '*': r = *a * *b; break;
                case '/': r = *a / *b; break;
                default: return std::nullopt;
            }
        }
    }
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

}  // namespace detail

inline std::optional<double> evaluate(const ExprTree& tree,
                                      const std::array<double, kLagCount>& lags) {
    return detail::eval_node(tree, 0, lags, [](int) -> std::optional<double> {
        throw std::logic_error("gene reference outside a homeotic tree");
    });
}

// Evaluate the full program on one lag vector.  Sub-trees are evaluated
// lazily and memoized, so an invalid gene never referenced by the linking
// tree does not invalidate the result.
inline std::optional<double> evaluate(const Program& p,
                                      const std::array<double, kLagCount>& lags) {
    std::array<std::optional<double>, kMaxGenes> cache;
    std::array<bool, kMaxGenes> have{};
    auto ref = [&](int i) -> std::optional<double> {
        const auto u = static_cast<std::size_t>(i);
        if (!have[u]) {
            cache[u] = evaluate(p.sub_trees[u], lags);
            have[u] = true;
        }
        return cache[u];
    };
    return detail::eval_node(p.link_tree, 0, lags, ref);
}

namespace detail {

inline std::string infix_node(const ExprTree& tree, int idx,
                              const std::vector<std::string>* sub_exprs) {
    const ExprNode& node = tree.nodes[static_cast<std::size_t>(idx)];
    switch (node.kind) {
        case ExprNode::Kind::lag:
            return std::string(1, static_cast<char>('a' + node.index));
        case ExprNode::Kind::constant:
            return format_double(node.value);
        case ExprNode::Kind::gene_ref:
            if (sub_exprs) return (*sub_exprs)[static_cast<std::size_t>(node.index)];
            return "@" + std::to_string(node.index);
        case ExprNode::Kind::func:
            break;
    }
    const std::string a = infix_node(tree, node.child_a, sub_exprs);
    switch (node.op) {
        case 'S': return "sin(" + a + ")";
        case 'C': return "cos(" + a + ")";
        case 'Q': return "sqrt(" + a + ")";
        default: break;
    }
    const std::string b = infix_node(tree, node.child_b, sub_exprs);
    return "(" + a + std::string(1, node.op) + b + ")";
}

}  // namespace detail

inline std::string to_infix(const ExprTree& tree) { return detail::infix_node(tree, 0, nullptr); }

// Full program as a single infix expression, gene references expanded
// inline.
inline std::string to_infix(const Program& p) {
    std::vector<std::string> subs;
    subs.reserve(p.sub_trees.size());
    for (const ExprTree& t : p.sub_trees) subs.push_back(detail::infix_node(t, 0, nullptr));
    return detail::infix_node(p.link_tree, 0, &subs);
}

}  // namespace wtgeprp
