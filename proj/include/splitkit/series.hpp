#pragma once

#include "splitkit/rational.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace splitkit {

/// A noncommuting symbol with an integer grade: the power of the step size
/// one occurrence of the symbol carries. A and B have grade 1; in the
/// polynomial-in-t models H0, H1, H2 carry grades 1, 2, 3.
struct Generator {
    std::string name;
    int grade = 1;

    friend bool operator==(const Generator &, const Generator &) = default;
};

/// An ordered set of distinct generators, sorted by name.
class Alphabet {
public:
    explicit Alphabet(std::vector<Generator> generators);

    static const Alphabet &ab(); ///< {A:1, B:1}
    static const Alphabet &k1(); ///< {H0:1, H1:2}
    static const Alphabet &k2(); ///< {H0:1, H1:2, H2:3}

    std::span<const Generator> generators() const { return gens_; }
    int size() const { return static_cast<int>(gens_.size()); }
    const Generator &operator[](int i) const { return gens_[static_cast<size_t>(i)]; }
    int index_of(std::string_view name) const; // -1 if absent

    friend bool operator==(const Alphabet &, const Alphabet &) = default;

private:
    std::vector<Generator> gens_;
};

/// A word over an alphabet: letter indices plus the cached grade sum.
struct Word {
    std::vector<std::uint8_t> letters;
    int degree = 0;

    friend bool operator==(const Word &, const Word &) = default;
};

class WordTable;
using WordTablePtr = std::shared_ptr<const WordTable>;

/// Enumeration and concatenation structure for all words of degree
/// <= max_degree over one alphabet. Immutable once built; instances are
/// cached and shared. Word order is canonical: degree-major, then
/// lexicographic by generator name.
class WordTable {
public:
    /// Cached lookup. Throws on negative max_degree, on an empty alphabet
    /// with max_degree > 0, and above the truncation cap.
    static WordTablePtr get(const Alphabet &alphabet, int max_degree);

    /// Truncation cap: 10 when every grade is 1 (2^N word growth),
    /// 11 for graded alphabets (needed by order checks up to 10).
    static int degree_cap(const Alphabet &alphabet);

    const Alphabet &alphabet() const { return alphabet_; }
    int max_degree() const { return max_degree_; }
    int word_count() const { return static_cast<int>(words_.size()); }
    const Word &word(int idx) const { return words_[static_cast<size_t>(idx)]; }
    int degree(int idx) const { return words_[static_cast<size_t>(idx)].degree; }

    /// Index of word(i)·word(j), or -1 if the product exceeds max_degree.
    int concat(int i, int j) const
    {
        return concat_[static_cast<size_t>(i) * words_.size() + static_cast<size_t>(j)];
    }

    int index_of(const Word &w) const;
    int first_index_of_degree(int d) const; ///< words_ offset of the degree-d block

    std::string word_name(int idx) const; ///< e.g. "ABB"; "1" for the empty word

private:
    WordTable(const Alphabet &alphabet, int max_degree);

    Alphabet alphabet_;
    int max_degree_;
    std::vector<Word> words_;
    std::vector<int> degree_offsets_;
    std::vector<std::int32_t> concat_;
};

/// All words of degree <= max_degree in canonical order.
std::vector<Word> enumerate_words(const Alphabet &alphabet, int max_degree);

/// Truncated power series over noncommuting graded generators with
/// coefficients in R. R is Rational for every exact/symbolic use; the
/// double instantiation exists solely as the numeric-search fast path.
/// Canonical form: terms sorted by word index, zero coefficients pruned.
template <class R> class BasicSeries {
public:
    using Term = std::pair<std::int32_t, R>;

    explicit BasicSeries(WordTablePtr table);
    static BasicSeries constant(WordTablePtr table, const R &value);
    /// coeff * (single-letter word); letter is an alphabet index.
    static BasicSeries generator_term(WordTablePtr table, int letter, const R &coeff);

    const WordTablePtr &table() const { return table_; }
    std::span<const Term> terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    R coeff(int word_idx) const;
    R constant_term() const { return coeff(0); }
    void set_coeff(int word_idx, const R &value);

    /// Lowest degree with a nonzero term; table max_degree + 1 if zero.
    int min_degree() const;
    BasicSeries degree_part(int degree) const;

    BasicSeries &operator+=(const BasicSeries &rhs);
    BasicSeries &operator-=(const BasicSeries &rhs);
    BasicSeries &operator*=(const R &scalar);

    friend BasicSeries operator+(BasicSeries lhs, const BasicSeries &rhs) { return lhs += rhs; }
    friend BasicSeries operator-(BasicSeries lhs, const BasicSeries &rhs) { return lhs -= rhs; }
    friend BasicSeries operator*(BasicSeries lhs, const R &scalar) { return lhs *= scalar; }
    friend BasicSeries operator*(const R &scalar, BasicSeries rhs) { return rhs *= scalar; }

    friend bool operator==(const BasicSeries &a, const BasicSeries &b)
    {
        if (a.table_ != b.table_
            && (a.table_->alphabet() != b.table_->alphabet()
                || a.table_->max_degree() != b.table_->max_degree()))
            return false;
        return a.terms_ == b.terms_;
    }

    std::string str() const; ///< human-readable, canonical order

private:
    void prune();
    static void require_compatible(const BasicSeries &a, const BasicSeries &b);

    template <class S>
    friend BasicSeries<S> mul(const BasicSeries<S> &, const BasicSeries<S> &);

    WordTablePtr table_;
    std::vector<Term> terms_;
};

/// Truncated associative product.
template <class R> BasicSeries<R> mul(const BasicSeries<R> &x, const BasicSeries<R> &y);

/// [x, y] = xy - yx.
template <class R> BasicSeries<R> commutator(const BasicSeries<R> &x, const BasicSeries<R> &y);

/// Truncated exponential; requires zero constant term (the sum terminates).
template <class R> BasicSeries<R> exp(const BasicSeries<R> &x);

/// Truncated logarithm; requires constant term exactly 1.
template <class R> BasicSeries<R> log(const BasicSeries<R> &x);

template <class R> BasicSeries<R> operator*(const BasicSeries<R> &x, const BasicSeries<R> &y)
{
    return mul(x, y);
}

using Series = BasicSeries<Rational>;
using SeriesD = BasicSeries<double>;

} // namespace splitkit
