#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wtgeprp/rng.hpp"

namespace wtgeprp {

// Symbol alphabets.  Functions: '+','-','*','/' binary; 'S','C','Q' are the
// unary sin, cos, sqrt.  Normal-gene terminals are the six lag variables
// 'a'..'f' plus '?', the random-constant slot.  Dc symbols 'A'..'J' index a
// gene's constant array.  Homeotic-gene terminals are digits referencing
// normal genes.
inline constexpr std::string_view kFunctions = "+-*/SCQ";
inline constexpr std::string_view kTerminals = "?abcdef";
inline constexpr std::string_view kDcSymbols = "ABCDEFGHIJ";
inline constexpr std::size_t kLagCount = 6;
inline constexpr std::size_t kMaxGenes = 8;
inline constexpr double kConstMin = -10.0;
inline constexpr double kConstMax = 10.0;

inline constexpr bool is_function_symbol(char c) {
    return kFunctions.find(c) != std::string_view::npos;
}
inline constexpr bool is_terminal_symbol(char c) {
    return kTerminals.find(c) != std::string_view::npos;
}
inline constexpr bool is_dc_symbol(char c) { return c >= 'A' && c <= 'J'; }
inline constexpr bool is_gene_ref(char c, std::size_t gene_count) {
    return c >= '0' && c < static_cast<char>('0' + gene_count);
}
inline constexpr int arity_of(char f) {
    if (f == 'S' || f == 'C' || f == 'Q') return 1;
    if (f == '+' || f == '-' || f == '*' || f == '/') return 2;
    return 0;
}

// Region sizes.  With max function arity 2, tail = head + 1 guarantees that
// every gene decodes (closure); the Dc region supplies one constant index
// per possible '?' leaf, so it has tail length too.
struct GeneLayout {
    std::size_t head_len = 8;
    std::size_t home_head_len = 4;
    std::size_t const_count = 10;

    std::size_t tail_len() const { return head_len + 1; }
    std::size_t dc_len() const { return tail_len(); }
    std::size_t home_tail_len() const { return home_head_len + 1; }
    std::size_t gene_symbols() const { return head_len + tail_len() + dc_len(); }
    std::size_t home_symbols() const { return home_head_len + home_tail_len(); }

    bool operator==(const GeneLayout&) const = default;
};

inline void validate_layout(const GeneLayout& layout) {
    if (layout.head_len < 1 || layout.home_head_len < 1)
        throw std::invalid_argument("gene layout: head lengths must be >= 1");
    if (layout.const_count < 1 || layout.const_count > kDcSymbols.size())
        throw std::invalid_argument("gene layout: constant array length must be in 1..10");
}

struct NormalGene {
    std::string head, tail, dc;
    std::vector<double> constants;

    bool operator==(const NormalGene&) const = default;
};

struct HomeoticGene {
    std::string head, tail;

    bool operator==(const HomeoticGene&) const = default;
};

struct Chromosome {
    std::vector<NormalGene> genes;
    HomeoticGene homeotic;
    GeneLayout layout;

    std::size_t gene_count() const { return genes.size(); }

    bool operator==(const Chromosome&) const = default;
};

// Structural invariants: region sizes match the layout, every region holds
// only its alphabet, gene references stay in range, constants are finite.
inline bool is_structurally_valid(const Chromosome& c) {
    const GeneLayout& lo = c.layout;
    const std::size_t k = c.gene_count();
    if (k < 1 || k > kMaxGenes) return false;
    for (const NormalGene& g : c.genes) {
        if (g.head.size() != lo.head_len || g.tail.size() != lo.tail_len() ||
            g.dc.size() != lo.dc_len() || g.constants.size() != lo.const_count)
            return false;
        for (char s : g.head)
            if (!is_function_symbol(s) && !is_terminal_symbol(s)) return false;
        for (char s : g.tail)
            if (!is_terminal_symbol(s)) return false;
        for (char s : g.dc)
            if (!is_dc_symbol(s) || static_cast<std::size_t>(s - 'A') >= lo.const_count)
                return false;
        for (double v : g.constants)
            if (!std::isfinite(v)) return false;
    }
    if (c.homeotic.head.size() != lo.home_head_len ||
        c.homeotic.tail.size() != lo.home_tail_len())
        return false;
    for (char s : c.homeotic.head)
        if (!is_function_symbol(s) && !is_gene_ref(s, k)) return false;
    for (char s : c.homeotic.tail)
        if (!is_gene_ref(s, k)) return false;
    return true;
}

namespace detail {

inline char random_head_symbol(Rng& rng) {
    const std::size_t i = rng.next_below(kFunctions.size() + kTerminals.size());
    return i < kFunctions.size() ? kFunctions[i] : kTerminals[i - kFunctions.size()];
}
inline char random_tail_symbol(Rng& rng) { return kTerminals[rng.next_below(kTerminals.size())]; }
inline char random_dc_symbol(std::size_t const_count, Rng& rng) {
    return kDcSymbols[rng.next_below(const_count)];
}
inline char random_home_head_symbol(std::size_t gene_count, Rng& rng) {
    const std::size_t i = rng.next_below(kFunctions.size() + gene_count);
    return i < kFunctions.size() ? kFunctions[i]
                                 : static_cast<char>('0' + (i - kFunctions.size()));
}
inline char random_home_tail_symbol(std::size_t gene_count, Rng& rng) {
    return static_cast<char>('0' + rng.next_below(gene_count));
}

}  // namespace detail

// Uniform random chromosome.  With a single normal gene the homeotic gene is
// pinned to the trivial all-'0' form (the program is exactly the gene's own
// tree), which is the classic single-gene configuration.
inline Chromosome random_chromosome(const GeneLayout& layout, std::size_t gene_count, Rng& rng) {
    validate_layout(layout);
    if (gene_count < 1 || gene_count > kMaxGenes)
        throw std::invalid_argument("gene count must be in 1..8");
    Chromosome c;
    c.layout = layout;
    c.genes.resize(gene_count);
    for (NormalGene& g : c.genes) {
        g.head.resize(layout.head_len);
        g.tail.resize(layout.tail_len());
        g.dc.resize(layout.dc_len());
        g.constants.resize(layout.const_count);
        for (char& s : g.head) s = detail::random_head_symbol(rng);
        for (char& s : g.tail) s = detail::random_tail_symbol(rng);
        for (char& s : g.dc) s = detail::random_dc_symbol(layout.const_count, rng);
        for (double& v : g.constants) v = rng.next_real(kConstMin, kConstMax);
    }
    if (gene_count == 1) {
        c.homeotic.head.assign(layout.home_head_len, '0');
        c.homeotic.tail.assign(layout.home_tail_len(), '0');
    } else {
        c.homeotic.head.resize(layout.home_head_len);
        c.homeotic.tail.resize(layout.home_tail_len());
        for (char& s : c.homeotic.head) s = detail::random_home_head_symbol(gene_count, rng);
        for (char& s : c.homeotic.tail) s = detail::random_home_tail_symbol(gene_count, rng);
    }
    return c;
}

inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

// Textual chromosome form, one line per gene:
//   layout head=8 home_head=4 consts=10 genes=2
//   gene 0 | <head> | <tail> | <dc> | c0 c1 ...
//   homeotic | <head> | <tail>
inline std::string to_text(const Chromosome& c) {
    std::ostringstream out;
    out << "layout head=" << c.layout.head_len << " home_head=" << c.layout.home_head_len
        << " consts=" << c.layout.const_count << " genes=" << c.gene_count() << "\n";
    for (std::size_t i = 0; i < c.gene_count(); ++i) {
        const NormalGene& g = c.genes[i];
        out << "gene " << i << " | " << g.head << " | " << g.tail << " | " << g.dc << " |";
        for (double v : g.constants) out << ' ' << format_double(v);
        out << "\n";
    }
    out << "homeotic | " << c.homeotic.head << " | " << c.homeotic.tail << "\n";
    return out.str();
}

namespace detail {

inline std::vector<std::string> split_on(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

inline std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::size_t parse_size(const std::string& token, const char* what) {
    std::size_t value = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || p != token.data() + token.size())
        throw std::invalid_argument(std::string("chromosome text: bad ") + what + " '" + token +
                                    "'");
    return value;
}

inline double parse_real(const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("chromosome text: bad constant '" + token + "'");
    }
    if (used != token.size())
        throw std::invalid_argument("chromosome text: bad constant '" + token + "'");
    return v;
}

}  // namespace detail

inline Chromosome chromosome_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Chromosome c;
    std::size_t genes = 0;
    bool have_layout = false, have_homeotic = false;
    while (std::getline(in, line)) {
        line = detail::trimmed(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("layout", 0) == 0) {
            std::istringstream ls(line.substr(6));
            std::string kv;
            while (ls >> kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("chromosome text: bad layout token '" + kv + "'");
                const std::string key = kv.substr(0, eq);
                const std::size_t val = detail::parse_size(kv.substr(eq + 1), key.c_str());
                if (key == "head")
                    c.layout.head_len = val;
                else if (key == "home_head")
                    c.layout.home_head_len = val;
                else if (key == "consts")
                    c.layout.const_count = val;
                else if (key == "genes")
                    genes = val;
                else
                    throw std::invalid_argument("chromosome text: unknown layout key '" + key +
                                                "'");
            }
            have_layout = true;
        } else if (line.rfind("gene ", 0) == 0) {
            auto parts = detail::split_on(line, '|');
            if (parts.size() != 5)
                throw std::invalid_argument("chromosome text: gene line needs 5 '|' fields");
            NormalGene g;
            g.head = detail::trimmed(parts[1]);
            g.tail = detail::trimmed(parts[2]);
            g.dc = detail::trimmed(parts[3]);
            std::istringstream cs(parts[4]);
            std::string tok;
            while (cs >> tok) g.constants.push_back(detail::parse_real(tok));
            c.genes.push_back(std::move(g));
        } else if (line.rfind("homeotic", 0) == 0) {
            auto parts = detail::split_on(line, '|');
            if (parts.size() != 3)
                throw std::invalid_argument("chromosome text: homeotic line needs 3 '|' fields");
            c.homeotic.head = detail::trimmed(parts[1]);
            c.homeotic.tail = detail::trimmed(parts[2]);
            have_homeotic = true;
        } else {
            throw std::invalid_argument("chromosome text: unrecognized line '" + line + "'");
        }
    }
    if (!have_layout || !have_homeotic)
        throw std::invalid_argument("chromosome text: missing layout or homeotic line");
    if (genes != c.gene_count())
        throw std::invalid_argument("chromosome text: gene count mismatch");
    if (!is_structurally_valid(c))
        throw std::invalid_argument("chromosome text: structural invariants violated");
    return c;
}

}  // namespace wtgeprp
